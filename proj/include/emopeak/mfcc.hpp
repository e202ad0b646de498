#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace emopeak {

inline constexpr double kLogEnergyFloor = 1e-10;

/// Triangular filters on the mel scale, one row per filter, one column per
/// FFT bin in [0, n_fft/2]. Each row peaks at exactly 1.0.
struct MelFilterbank {
    std::vector<std::vector<double>> filters;
    std::vector<double> center_freqs_hz;
    std::vector<double> edge_freqs_hz;  // n_filters + 2 band edges
    int sample_rate_hz = 0;
    std::size_t n_fft = 0;

    std::size_t n_filters() const noexcept { return filters.size(); }
    std::size_t n_bins() const noexcept { return n_fft / 2 + 1; }
};

/// Per-frame cepstra; column 0 is the log-energy proxy.
struct MfccMatrix {
    std::vector<std::vector<double>> coefficients;
    double hop_ms = 0.0;

    std::size_t n_frames() const noexcept { return coefficients.size(); }
    std::size_t n_coeffs() const noexcept { return coefficients.empty() ? 0 : coefficients.front().size(); }
};

double hz_to_mel(double f_hz);
double mel_to_hz(double mel);

MelFilterbank build_filterbank(int sample_rate_hz, std::size_t n_fft, std::size_t n_filters, double f_min_hz,
                               double f_max_hz);

/// Unnormalized DCT-II of a vector, truncated to n_out terms.
std::vector<double> dct2(std::span<const double> input, std::size_t n_out);

MfccMatrix compute_mfcc(const std::vector<std::vector<double>>& power_frames, const MelFilterbank& bank,
                        std::size_t n_coeffs, double hop_ms = 0.0);

/// Centered moving average of coefficient 0; windows are truncated at the edges.
std::vector<double> energy_contour(const MfccMatrix& mfcc, std::size_t smooth_frames);

}  // namespace emopeak
