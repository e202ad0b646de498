#include "emopeak/mfcc.hpp"

#include "emopeak/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace emopeak {

double hz_to_mel(double f_hz)
{
    if (f_hz < 0.0)
        throw Error(ErrorCode::NegativeFrequency, std::to_string(f_hz) + " Hz");
    return 2595.0 * std::log10(1.0 + f_hz / 700.0);
}

double mel_to_hz(double mel)
{
    return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

MelFilterbank build_filterbank(int sample_rate_hz, std::size_t n_fft, std::size_t n_filters, double f_min_hz,
                               double f_max_hz)
{
    const double nyquist = sample_rate_hz / 2.0;
    if (sample_rate_hz <= 0 || !(f_min_hz >= 0.0) || !(f_min_hz < f_max_hz) || f_max_hz > nyquist)
        throw Error(ErrorCode::InvalidBand, "need 0 <= f_min < f_max <= Nyquist");
    if (n_filters < 2)
        throw Error(ErrorCode::InvalidBand, "need at least 2 filters");
    if (n_fft < 2)
        throw Error(ErrorCode::TooFewBins, "n_fft too small");

    MelFilterbank bank;
    bank.sample_rate_hz = sample_rate_hz;
    bank.n_fft = n_fft;

    const double mel_lo = hz_to_mel(f_min_hz);
    const double mel_hi = hz_to_mel(f_max_hz);
    const double step = (mel_hi - mel_lo) / static_cast<double>(n_filters + 1);
    bank.edge_freqs_hz.resize(n_filters + 2);
    for (std::size_t i = 0; i < n_filters + 2; ++i)
        bank.edge_freqs_hz[i] = mel_to_hz(mel_lo + step * static_cast<double>(i));
    bank.edge_freqs_hz.front() = f_min_hz;
    bank.edge_freqs_hz.back() = f_max_hz;

    const double bin_hz = static_cast<double>(sample_rate_hz) / static_cast<double>(n_fft);
    for (std::size_t i = 0; i + 1 < bank.edge_freqs_hz.size(); ++i) {
        if (std::lround(bank.edge_freqs_hz[i] / bin_hz) == std::lround(bank.edge_freqs_hz[i + 1] / bin_hz))
            throw Error(ErrorCode::TooFewBins, "band edges " + std::to_string(i) + " and " + std::to_string(i + 1) +
                                                   " share an FFT bin; use fewer filters or a larger n_fft");
    }

    const std::size_t n_bins = n_fft / 2 + 1;
    for (std::size_t m = 0; m < n_filters; ++m) {
        const double left = bank.edge_freqs_hz[m];
        const double center = bank.edge_freqs_hz[m + 1];
        const double right = bank.edge_freqs_hz[m + 2];
        std::vector<double> row(n_bins, 0.0);
        for (std::size_t k = 0; k < n_bins; ++k) {
            const double f = static_cast<double>(k) * bin_hz;
            if (f >= left && f <= center)
                row[k] = (f - left) / (center - left);
            else if (f > center && f <= right)
                row[k] = (right - f) / (right - center);
        }
        const double peak = *std::max_element(row.begin(), row.end());
        if (!(peak > 0.0))
            throw Error(ErrorCode::TooFewBins, "filter " + std::to_string(m) + " covers no FFT bin");
        for (double& w : row)
            w /= peak;
        // exact 1.0 at the arg-max despite rounding in the division
        *std::max_element(row.begin(), row.end()) = 1.0;
        bank.filters.push_back(std::move(row));
        bank.center_freqs_hz.push_back(center);
    }
    return bank;
}

std::vector<double> dct2(std::span<const double> input, std::size_t n_out)
{
    const std::size_t n = input.size();
    std::vector<double> out(n_out, 0.0);
    for (std::size_t j = 0; j < n_out; ++j) {
        double acc = 0.0;
        for (std::size_t m = 0; m < n; ++m)
            acc += input[m] * std::cos(std::numbers::pi * static_cast<double>(j) * (static_cast<double>(m) + 0.5) /
                                       static_cast<double>(n));
        out[j] = acc;
    }
    return out;
}

MfccMatrix compute_mfcc(const std::vector<std::vector<double>>& power_frames, const MelFilterbank& bank,
                        std::size_t n_coeffs, double hop_ms)
{
    const std::size_t n_filters = bank.n_filters();
    if (n_coeffs < 2 || n_coeffs > n_filters)
        throw Error(ErrorCode::InvalidCoeffCount,
                    "n_coeffs " + std::to_string(n_coeffs) + " outside [2, " + std::to_string(n_filters) + "]");

    // DCT basis is shared by every frame.
    std::vector<std::vector<double>> basis(n_coeffs, std::vector<double>(n_filters));
    for (std::size_t j = 0; j < n_coeffs; ++j)
        for (std::size_t m = 0; m < n_filters; ++m)
            basis[j][m] = std::cos(std::numbers::pi * static_cast<double>(j) * (static_cast<double>(m) + 0.5) /
                                   static_cast<double>(n_filters));

    MfccMatrix out;
    out.hop_ms = hop_ms;
    out.coefficients.reserve(power_frames.size());
    std::vector<double> log_energy(n_filters);
    for (const auto& power : power_frames) {
        if (power.size() != bank.n_bins())
            throw Error(ErrorCode::DimensionMismatch, "power spectrum has " + std::to_string(power.size()) +
                                                          " bins, filterbank expects " +
                                                          std::to_string(bank.n_bins()));
        for (std::size_t m = 0; m < n_filters; ++m) {
            const auto& filter = bank.filters[m];
            double e = 0.0;
            for (std::size_t k = 0; k < power.size(); ++k)
                e += filter[k] * power[k];
            log_energy[m] = std::log(std::max(e, kLogEnergyFloor));
        }
        std::vector<double> c(n_coeffs, 0.0);
        for (std::size_t j = 0; j < n_coeffs; ++j) {
            double acc = 0.0;
            for (std::size_t m = 0; m < n_filters; ++m)
                acc += log_energy[m] * basis[j][m];
            c[j] = acc;
        }
        out.coefficients.push_back(std::move(c));
    }
    return out;
}

std::vector<double> energy_contour(const MfccMatrix& mfcc, std::size_t smooth_frames)
{
    if (mfcc.n_frames() == 0)
        throw Error(ErrorCode::EmptyInput, "no MFCC frames");
    if (smooth_frames == 0 || smooth_frames % 2 == 0)
        throw Error(ErrorCode::EvenSmoothWidth, "smoothing width must be odd and >= 1");

    const std::size_t n = mfcc.n_frames();
    const std::size_t half = smooth_frames / 2;
    std::vector<double> contour(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i >= half ? i - half : 0;
        const std::size_t hi = std::min(n - 1, i + half);
        double acc = 0.0;
        for (std::size_t k = lo; k <= hi; ++k)
            acc += mfcc.coefficients[k][0];
        contour[i] = acc / static_cast<double>(hi - lo + 1);
    }
    return contour;
}

}  // namespace emopeak
