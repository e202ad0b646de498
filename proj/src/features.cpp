#include "emopeak/features.hpp"

#include "emopeak/dsp.hpp"
#include "emopeak/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace emopeak {

namespace {

bool is_candidate(std::span<const double> c, std::size_t i)
{
    return i > 0 && i + 1 < c.size() && c[i] > c[i - 1] && c[i] >= c[i + 1];
}

}  // namespace

double peak_prominence(std::span<const double> contour, std::size_t i)
{
    const double height = contour[i];

    double left_min = height;
    for (std::size_t j = i; j-- > 0;) {
        if (contour[j] > height && is_candidate(contour, j))
            break;
        left_min = std::min(left_min, contour[j]);
    }
    double right_min = height;
    for (std::size_t j = i + 1; j < contour.size(); ++j) {
        if (contour[j] > height && is_candidate(contour, j))
            break;
        right_min = std::min(right_min, contour[j]);
    }
    return height - std::max(left_min, right_min);
}

PeakList detect_peaks(std::span<const double> contour, double min_prominence, std::size_t min_separation_frames,
                      double hop_ms)
{
    if (contour.size() < 3)
        throw Error(ErrorCode::ContourTooShort, "contour needs at least 3 frames");
    if (min_separation_frames < 1)
        throw Error(ErrorCode::InvalidConfig, "minimum separation must be >= 1 frame");

    std::vector<std::size_t> kept;
    for (std::size_t i = 1; i + 1 < contour.size(); ++i)
        if (is_candidate(contour, i) && peak_prominence(contour, i) >= min_prominence)
            kept.push_back(i);

    // Tallest first; stable sort keeps lower indices ahead on ties.
    std::vector<std::size_t> order = kept;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return contour[a] > contour[b]; });
    std::vector<std::size_t> survivors;
    for (std::size_t idx : order) {
        const bool clear = std::none_of(survivors.begin(), survivors.end(), [&](std::size_t s) {
            const std::size_t gap = idx > s ? idx - s : s - idx;
            return gap < min_separation_frames;
        });
        if (clear)
            survivors.push_back(idx);
    }
    std::sort(survivors.begin(), survivors.end());

    PeakList out;
    out.hop_ms = hop_ms;
    out.indices = std::move(survivors);
    out.values.reserve(out.indices.size());
    for (std::size_t idx : out.indices)
        out.values.push_back(contour[idx]);
    return out;
}

std::vector<double> peak_gaps_ms(const PeakList& peaks)
{
    std::vector<double> gaps;
    for (std::size_t i = 1; i < peaks.indices.size(); ++i)
        gaps.push_back(static_cast<double>(peaks.indices[i] - peaks.indices[i - 1]) * peaks.hop_ms);
    return gaps;
}

double peak_distance_feature(const PeakList& peaks)
{
    if (peaks.size() < 2)
        throw Error(ErrorCode::InsufficientPeaks, std::to_string(peaks.size()) + " peak(s) found, need 2");
    const auto gaps = peak_gaps_ms(peaks);
    return std::accumulate(gaps.begin(), gaps.end(), 0.0) / static_cast<double>(gaps.size());
}

UtteranceAnalysis analyze_utterance(const AudioBuffer& buffer, const PipelineConfig& config)
{
    config.validate();

    UtteranceAnalysis out;
    const AudioBuffer emphasized = pre_emphasize(buffer, config.pre_emphasis);
    const FrameMatrix framed = frame_signal_ms(emphasized, config.frame_ms, config.hop_ms);
    const FrameMatrix windowed = apply_window(framed, hamming_window(framed.frame_len));

    out.frame_len = framed.frame_len;
    out.hop_len = framed.hop_len;
    out.hop_ms = 1000.0 * static_cast<double>(framed.hop_len) / buffer.sample_rate_hz();
    out.n_fft = config.n_fft != 0 ? config.n_fft : next_power_of_two(framed.frame_len);
    if (out.n_fft < framed.frame_len)
        throw Error(ErrorCode::InvalidConfig, "n_fft is shorter than the frame");

    out.power_frames.reserve(windowed.size());
    for (const auto& frame : windowed.frames)
        out.power_frames.push_back(power_spectrum(frame, out.n_fft));

    const double f_max = config.f_max_hz > 0.0 ? config.f_max_hz : buffer.sample_rate_hz() / 2.0;
    out.filterbank = build_filterbank(buffer.sample_rate_hz(), out.n_fft, config.n_filters, config.f_min_hz, f_max);
    out.mfcc = compute_mfcc(out.power_frames, out.filterbank, config.n_coeffs, out.hop_ms);
    out.contour = energy_contour(out.mfcc, config.smooth_frames);

    if (out.contour.size() < 3)
        throw Error(ErrorCode::ContourTooShort,
                    "utterance yields " + std::to_string(out.contour.size()) + " frame(s), need 3");
    const auto [lo, hi] = std::minmax_element(out.contour.begin(), out.contour.end());
    const double min_prominence = config.peak_prominence_frac * (*hi - *lo);
    out.peaks = detect_peaks(out.contour, min_prominence, config.peak_separation_frames, out.hop_ms);
    return out;
}

FeatureRecord extract_record(const AudioBuffer& buffer, const PipelineConfig& config, std::string subject_id,
                             std::string utterance_id, Emotion label, std::optional<double> heart_rate_bpm)
{
    const auto analysis = analyze_utterance(buffer, config);
    FeatureRecord rec;
    rec.subject_id = std::move(subject_id);
    rec.utterance_id = std::move(utterance_id);
    rec.feature_distance_ms = peak_distance_feature(analysis.peaks);
    rec.heart_rate_bpm = heart_rate_bpm;
    rec.label = label;
    return rec;
}

}  // namespace emopeak
