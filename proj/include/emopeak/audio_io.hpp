#pragma once

#include <filesystem>
#include <span>
#include <vector>

namespace emopeak {

/// Mono sample sequence plus its sample rate. Samples are always finite;
/// buffers produced by load_wav() and the synthesizer are also bounded to
/// [-1, 1]. Immutable after construction.
class AudioBuffer {
public:
    AudioBuffer(std::vector<double> samples, int sample_rate_hz);

    std::span<const double> samples() const noexcept { return samples_; }
    int sample_rate_hz() const noexcept { return sample_rate_hz_; }
    std::size_t size() const noexcept { return samples_.size(); }
    bool empty() const noexcept { return samples_.empty(); }

private:
    std::vector<double> samples_;
    int sample_rate_hz_;
};

/// Reads an 8/16/24/32-bit integer or 32-bit float PCM WAV with one or two
/// channels. Stereo is averaged to mono.
AudioBuffer load_wav(const std::filesystem::path& path);

/// Decodes an in-memory WAV image; load_wav() is a thin wrapper around this.
AudioBuffer decode_wav(std::span<const unsigned char> bytes);

/// Writes a 16-bit mono PCM WAV.
void write_wav(const AudioBuffer& buffer, const std::filesystem::path& path);

std::vector<unsigned char> encode_wav16(const AudioBuffer& buffer);

}  // namespace emopeak
