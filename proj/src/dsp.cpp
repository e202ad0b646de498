#include "emopeak/dsp.hpp"

#include "emopeak/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace emopeak {

AudioBuffer pre_emphasize(const AudioBuffer& buffer, double alpha)
{
    if (buffer.empty())
        throw Error(ErrorCode::EmptyAudio, "pre-emphasis of an empty buffer");
    if (!(alpha >= 0.0 && alpha < 1.0))
        throw Error(ErrorCode::InvalidConfig, "pre-emphasis alpha must lie in [0, 1)");
    auto x = buffer.samples();
    std::vector<double> y(x.size());
    y[0] = x[0];
    for (std::size_t n = 1; n < x.size(); ++n)
        y[n] = x[n] - alpha * x[n - 1];
    return AudioBuffer(std::move(y), buffer.sample_rate_hz());
}

std::size_t ms_to_samples(double ms, int sample_rate_hz)
{
    return static_cast<std::size_t>(std::llround(ms * sample_rate_hz / 1000.0));
}

FrameMatrix frame_signal_ms(const AudioBuffer& buffer, double frame_ms, double hop_ms)
{
    if (!(frame_ms > 0.0) || !(hop_ms > 0.0) || hop_ms > frame_ms)
        throw Error(ErrorCode::InvalidLength, "frame/hop durations must satisfy 0 < hop <= frame");
    return frame_signal(buffer, ms_to_samples(frame_ms, buffer.sample_rate_hz()),
                        ms_to_samples(hop_ms, buffer.sample_rate_hz()));
}

FrameMatrix frame_signal(const AudioBuffer& buffer, std::size_t frame_len, std::size_t hop_len)
{
    if (frame_len == 0 || hop_len == 0 || hop_len > frame_len)
        throw Error(ErrorCode::InvalidLength, "frame/hop lengths must satisfy 0 < hop <= frame");
    const auto x = buffer.samples();
    if (x.size() < frame_len)
        throw Error(ErrorCode::SignalTooShort, std::to_string(x.size()) + " samples, frame needs " +
                                                   std::to_string(frame_len));

    FrameMatrix out;
    out.frame_len = frame_len;
    out.hop_len = hop_len;
    out.sample_rate_hz = buffer.sample_rate_hz();
    const std::size_t count = (x.size() - frame_len) / hop_len + 1;
    out.frames.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        auto first = x.begin() + static_cast<std::ptrdiff_t>(i * hop_len);
        out.frames.emplace_back(first, first + static_cast<std::ptrdiff_t>(frame_len));
    }
    return out;
}

WindowWeights hamming_window(std::size_t length)
{
    if (length < 2)
        throw Error(ErrorCode::InvalidLength, "Hamming window needs at least 2 points");
    WindowWeights w(length);
    const double denom = static_cast<double>(length - 1);
    // Fill the first half and mirror so symmetry is exact in floating point.
    for (std::size_t n = 0; n <= (length - 1) / 2; ++n) {
        w[n] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) / denom);
        w[length - 1 - n] = w[n];
    }
    if (length % 2 == 1)
        w[(length - 1) / 2] = 1.0;
    return w;
}

FrameMatrix apply_window(const FrameMatrix& frames, std::span<const double> window)
{
    if (window.size() != frames.frame_len)
        throw Error(ErrorCode::LengthMismatch, "window length " + std::to_string(window.size()) +
                                                   " != frame length " + std::to_string(frames.frame_len));
    FrameMatrix out = frames;
    for (auto& frame : out.frames)
        for (std::size_t n = 0; n < frame.size(); ++n)
            frame[n] *= window[n];
    return out;
}

bool is_power_of_two(std::size_t n) noexcept
{
    return n != 0 && (n & (n - 1)) == 0;
}

std::size_t next_power_of_two(std::size_t n) noexcept
{
    std::size_t p = 1;
    while (p < n)
        p <<= 1;
    return p;
}

ComplexSpectrum fft(std::span<const std::complex<double>> input, std::size_t n)
{
    if (!is_power_of_two(n))
        throw Error(ErrorCode::NotPowerOfTwo, "transform size " + std::to_string(n));
    if (input.size() > n)
        throw Error(ErrorCode::LengthMismatch, "input longer than transform size");

    ComplexSpectrum a(n);
    std::copy(input.begin(), input.end(), a.begin());

    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1)
            j ^= bit;
        j ^= bit;
        if (i < j)
            std::swap(a[i], a[j]);
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        std::vector<std::complex<double>> twiddle(half);
        for (std::size_t k = 0; k < half; ++k) {
            const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(len);
            twiddle[k] = {std::cos(angle), std::sin(angle)};
        }
        for (std::size_t start = 0; start < n; start += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const auto u = a[start + k];
                const auto v = a[start + k + half] * twiddle[k];
                a[start + k] = u + v;
                a[start + k + half] = u - v;
            }
        }
    }
    return a;
}

ComplexSpectrum fft(std::span<const double> input, std::size_t n)
{
    std::vector<std::complex<double>> c(input.begin(), input.end());
    return fft(std::span<const std::complex<double>>(c), n);
}

std::vector<double> power_spectrum(std::span<const double> frame, std::size_t n_fft)
{
    if (!is_power_of_two(n_fft))
        throw Error(ErrorCode::NotPowerOfTwo, "n_fft " + std::to_string(n_fft));
    if (frame.size() > n_fft)
        throw Error(ErrorCode::LengthMismatch, "frame longer than n_fft");
    const auto spectrum = fft(frame, n_fft);
    std::vector<double> p(n_fft / 2 + 1);
    for (std::size_t k = 0; k < p.size(); ++k)
        p[k] = std::norm(spectrum[k]) / static_cast<double>(n_fft);
    return p;
}

}  // namespace emopeak
