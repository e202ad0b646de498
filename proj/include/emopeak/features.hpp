#pragma once

#include "emopeak/audio_io.hpp"
#include "emopeak/emotion.hpp"
#include "emopeak/mfcc.hpp"
#include "emopeak/pipeline_config.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace emopeak {

/// Peaks of an energy contour in increasing frame order.
struct PeakList {
    std::vector<std::size_t> indices;
    std::vector<double> values;
    double hop_ms = 0.0;

    std::size_t size() const noexcept { return indices.size(); }
    bool empty() const noexcept { return indices.empty(); }
};

/// One utterance reduced to its scalar peak-distance feature.
struct FeatureRecord {
    std::string subject_id;
    std::string utterance_id;
    double feature_distance_ms = 0.0;
    std::optional<double> heart_rate_bpm;
    Emotion label = Emotion::Neutral;

    bool operator==(const FeatureRecord&) const = default;
};

/// Height of contour[i] above the higher of the two valleys separating it
/// from the nearest taller candidate on each side (edges act as barriers).
double peak_prominence(std::span<const double> contour, std::size_t i);

/// Local maxima with prominence >= min_prominence, thinned so that no two
/// survivors are closer than min_separation_frames (the taller one wins,
/// ties go to the lower index).
PeakList detect_peaks(std::span<const double> contour, double min_prominence, std::size_t min_separation_frames,
                      double hop_ms = 0.0);

/// Consecutive peak gaps in milliseconds.
std::vector<double> peak_gaps_ms(const PeakList& peaks);

/// Mean consecutive peak gap in milliseconds. Needs at least two peaks.
double peak_distance_feature(const PeakList& peaks);

/// Every intermediate of the extraction chain, for inspection and plotting.
struct UtteranceAnalysis {
    std::size_t n_fft = 0;
    std::size_t frame_len = 0;
    std::size_t hop_len = 0;
    double hop_ms = 0.0;
    std::vector<std::vector<double>> power_frames;
    MelFilterbank filterbank;
    MfccMatrix mfcc;
    std::vector<double> contour;
    PeakList peaks;
};

/// Runs pre-emphasis, framing, Hamming windowing, power spectrum, MFCC,
/// contour smoothing and peak picking. Does not require any peaks.
UtteranceAnalysis analyze_utterance(const AudioBuffer& buffer, const PipelineConfig& config);

FeatureRecord extract_record(const AudioBuffer& buffer, const PipelineConfig& config, std::string subject_id,
                             std::string utterance_id, Emotion label,
                             std::optional<double> heart_rate_bpm = std::nullopt);

}  // namespace emopeak
