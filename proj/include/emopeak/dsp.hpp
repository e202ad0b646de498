#pragma once

#include "emopeak/audio_io.hpp"

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace emopeak {

/// Overlapping equal-length frames cut from a signal. Frame i starts at
/// sample i * hop_len of the source.
struct FrameMatrix {
    std::vector<std::vector<double>> frames;
    std::size_t frame_len = 0;
    std::size_t hop_len = 0;
    int sample_rate_hz = 0;

    std::size_t size() const noexcept { return frames.size(); }
};

using WindowWeights = std::vector<double>;
using ComplexSpectrum = std::vector<std::complex<double>>;

AudioBuffer pre_emphasize(const AudioBuffer& buffer, double alpha);

/// Number of samples covered by `ms` at `sample_rate_hz`, rounded to nearest.
std::size_t ms_to_samples(double ms, int sample_rate_hz);

FrameMatrix frame_signal_ms(const AudioBuffer& buffer, double frame_ms, double hop_ms);
FrameMatrix frame_signal(const AudioBuffer& buffer, std::size_t frame_len, std::size_t hop_len);

/// 0.54 - 0.46 cos(2 pi n / (L - 1)), symmetric form.
WindowWeights hamming_window(std::size_t length);

FrameMatrix apply_window(const FrameMatrix& frames, std::span<const double> window);

bool is_power_of_two(std::size_t n) noexcept;
std::size_t next_power_of_two(std::size_t n) noexcept;

/// Iterative radix-2 decimation-in-time transform. Input shorter than n is
/// zero-padded.
ComplexSpectrum fft(std::span<const std::complex<double>> input, std::size_t n);
ComplexSpectrum fft(std::span<const double> input, std::size_t n);

/// |FFT(frame)[k]|^2 / n_fft for k = 0..n_fft/2.
std::vector<double> power_spectrum(std::span<const double> frame, std::size_t n_fft);

}  // namespace emopeak
