#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>

namespace emopeak {

/// Every tunable of the extraction chain in one place. Defaults are the
/// conventional MFCC settings; none of them is fixed by the method itself.
struct PipelineConfig {
    double pre_emphasis = 0.97;
    double frame_ms = 25.0;
    double hop_ms = 10.0;
    std::size_t n_fft = 0;  // 0 selects the next power of two >= frame length
    std::size_t n_filters = 26;
    std::size_t n_coeffs = 13;
    double f_min_hz = 0.0;
    double f_max_hz = 0.0;  // 0 selects Nyquist
    std::size_t smooth_frames = 5;
    double peak_prominence_frac = 0.2;
    std::size_t peak_separation_frames = 5;

    /// Throws Error(InvalidConfig) naming the first out-of-range field.
    void validate() const;

    /// Applies one `key=value` assignment; keys are the field names above.
    void set(std::string_view key, std::string_view value);

    /// Reads a flat key=value file. Blank lines and lines starting with '#'
    /// are ignored.
    static PipelineConfig load(const std::filesystem::path& path);
    void apply_file(const std::filesystem::path& path);

    std::string to_text() const;
};

}  // namespace emopeak
