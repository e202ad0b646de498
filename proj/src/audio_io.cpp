#include "emopeak/audio_io.hpp"

#include "emopeak/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

namespace emopeak {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t read_u16(const unsigned char* p)
{
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const unsigned char* p)
{
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u16(std::vector<unsigned char>& out, std::uint16_t v)
{
    out.push_back(static_cast<unsigned char>(v & 0xFF));
    out.push_back(static_cast<unsigned char>(v >> 8));
}

void put_u32(std::vector<unsigned char>& out, std::uint32_t v)
{
    for (int i = 0; i < 4; ++i)
        out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xFF));
}

struct Format {
    std::uint16_t tag = 0;
    std::uint16_t channels = 0;
    std::uint32_t sample_rate = 0;
    std::uint16_t bits = 0;
};

double decode_sample(const unsigned char* p, const Format& fmt)
{
    if (fmt.tag == kFormatFloat) {
        float f;
        std::uint32_t raw = read_u32(p);
        std::memcpy(&f, &raw, sizeof f);
        double v = static_cast<double>(f);
        if (!std::isfinite(v))
            return std::isnan(v) ? 0.0 : (v > 0 ? 1.0 : -1.0);
        return std::clamp(v, -1.0, 1.0);
    }
    switch (fmt.bits) {
    case 8:
        return (static_cast<double>(p[0]) - 128.0) / 128.0;
    case 16:
        return static_cast<std::int16_t>(read_u16(p)) / 32768.0;
    case 24: {
        std::int32_t v = static_cast<std::int32_t>(p[0] | (p[1] << 8) | (p[2] << 16));
        if (v & 0x800000)
            v -= 0x1000000;
        return v / 8388608.0;
    }
    case 32:
        return static_cast<std::int32_t>(read_u32(p)) / 2147483648.0;
    }
    return 0.0;
}

}  // namespace

AudioBuffer::AudioBuffer(std::vector<double> samples, int sample_rate_hz)
    : samples_(std::move(samples)), sample_rate_hz_(sample_rate_hz)
{
    if (sample_rate_hz_ <= 0)
        throw Error(ErrorCode::MalformedHeader, "sample rate must be positive");
    for (double s : samples_)
        if (!std::isfinite(s))
            throw Error(ErrorCode::UnsupportedEncoding, "non-finite sample");
}

AudioBuffer decode_wav(std::span<const unsigned char> bytes)
{
    if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
        std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
        throw Error(ErrorCode::MalformedHeader, "not a RIFF/WAVE file");

    Format fmt;
    bool have_fmt = false;
    const unsigned char* data = nullptr;
    std::size_t data_size = 0;

    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const unsigned char* chunk = bytes.data() + pos;
        const std::size_t size = read_u32(chunk + 4);
        const std::size_t avail = bytes.size() - pos - 8;
        if (std::memcmp(chunk, "fmt ", 4) == 0) {
            if (size < 16 || avail < 16)
                throw Error(ErrorCode::MalformedHeader, "fmt chunk too short");
            fmt.tag = read_u16(chunk + 8);
            fmt.channels = read_u16(chunk + 10);
            fmt.sample_rate = read_u32(chunk + 12);
            fmt.bits = read_u16(chunk + 22);
            if (fmt.tag == kFormatExtensible) {
                if (size < 40 || avail < 40)
                    throw Error(ErrorCode::MalformedHeader, "extensible fmt chunk too short");
                fmt.tag = read_u16(chunk + 8 + 24);
            }
            have_fmt = true;
        } else if (std::memcmp(chunk, "data", 4) == 0) {
            data = chunk + 8;
            data_size = std::min(size, avail);
            break;
        }
        pos += 8 + size + (size & 1);
    }

    if (!have_fmt)
        throw Error(ErrorCode::MalformedHeader, "missing fmt chunk");
    if (data == nullptr)
        throw Error(ErrorCode::MalformedHeader, "missing data chunk");
    if (fmt.channels != 1 && fmt.channels != 2)
        throw Error(ErrorCode::UnsupportedEncoding, "channel count " + std::to_string(fmt.channels));
    const bool int_ok = fmt.tag == kFormatPcm &&
                        (fmt.bits == 8 || fmt.bits == 16 || fmt.bits == 24 || fmt.bits == 32);
    const bool float_ok = fmt.tag == kFormatFloat && fmt.bits == 32;
    if (!int_ok && !float_ok)
        throw Error(ErrorCode::UnsupportedEncoding,
                    "format tag " + std::to_string(fmt.tag) + " with " + std::to_string(fmt.bits) + " bits");
    if (fmt.sample_rate == 0 || fmt.sample_rate > 0x7FFFFFFF)
        throw Error(ErrorCode::MalformedHeader, "invalid sample rate");

    const std::size_t sample_bytes = fmt.bits / 8;
    const std::size_t frame_bytes = sample_bytes * fmt.channels;
    const std::size_t n_frames = data_size / frame_bytes;
    if (n_frames == 0)
        throw Error(ErrorCode::EmptyAudio, "data chunk holds no samples");

    std::vector<double> mono(n_frames);
    for (std::size_t i = 0; i < n_frames; ++i) {
        const unsigned char* frame = data + i * frame_bytes;
        double acc = 0.0;
        for (std::size_t c = 0; c < fmt.channels; ++c)
            acc += decode_sample(frame + c * sample_bytes, fmt);
        mono[i] = acc / fmt.channels;
    }
    return AudioBuffer(std::move(mono), static_cast<int>(fmt.sample_rate));
}

AudioBuffer load_wav(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_wav(bytes);
}

std::vector<unsigned char> encode_wav16(const AudioBuffer& buffer)
{
    if (buffer.empty())
        throw Error(ErrorCode::EmptyAudio, "refusing to write an empty buffer");
    const std::uint32_t data_size = static_cast<std::uint32_t>(buffer.size() * 2);
    const std::uint32_t rate = static_cast<std::uint32_t>(buffer.sample_rate_hz());

    std::vector<unsigned char> out;
    out.reserve(44 + data_size);
    out.insert(out.end(), {'R', 'I', 'F', 'F'});
    put_u32(out, 36 + data_size);
    out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
    put_u32(out, 16);
    put_u16(out, kFormatPcm);
    put_u16(out, 1);
    put_u32(out, rate);
    put_u32(out, rate * 2);
    put_u16(out, 2);
    put_u16(out, 16);
    out.insert(out.end(), {'d', 'a', 't', 'a'});
    put_u32(out, data_size);
    for (double s : buffer.samples()) {
        const double q = std::clamp(std::round(s * 32768.0), -32768.0, 32767.0);
        put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
    }
    return out;
}

void write_wav(const AudioBuffer& buffer, const std::filesystem::path& path)
{
    const auto bytes = encode_wav16(buffer);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

}  // namespace emopeak
