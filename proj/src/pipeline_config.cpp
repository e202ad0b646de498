#include "emopeak/pipeline_config.hpp"

#include "emopeak/error.hpp"
#include "emopeak/text.hpp"

#include <fstream>
#include <sstream>

namespace emopeak {

void PipelineConfig::validate() const
{
    auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); };
    if (!(pre_emphasis >= 0.0 && pre_emphasis < 1.0))
        fail("pre_emphasis must lie in [0, 1)");
    if (!(frame_ms > 0.0))
        fail("frame_ms must be positive");
    if (!(hop_ms > 0.0) || hop_ms > frame_ms)
        fail("hop_ms must satisfy 0 < hop_ms <= frame_ms");
    if (n_fft != 0 && (n_fft & (n_fft - 1)) != 0)
        fail("n_fft must be 0 (auto) or a power of two");
    if (n_filters < 2)
        fail("n_filters must be >= 2");
    if (n_coeffs < 2 || n_coeffs > n_filters)
        fail("n_coeffs must lie in [2, n_filters]");
    if (!(f_min_hz >= 0.0))
        fail("f_min_hz must be >= 0");
    if (!(f_max_hz >= 0.0) || (f_max_hz != 0.0 && f_max_hz <= f_min_hz))
        fail("f_max_hz must be 0 (Nyquist) or greater than f_min_hz");
    if (smooth_frames == 0 || smooth_frames % 2 == 0)
        fail("smooth_frames must be odd and >= 1");
    if (!(peak_prominence_frac >= 0.0 && peak_prominence_frac <= 1.0))
        fail("peak_prominence_frac must lie in [0, 1]");
    if (peak_separation_frames < 1)
        fail("peak_separation_frames must be >= 1");
}

void PipelineConfig::set(std::string_view key, std::string_view value)
{
    const std::string k(trim(key));
    const std::string_view v = trim(value);
    auto as_double = [&] {
        auto d = parse_double(v);
        if (!d)
            throw Error(ErrorCode::InvalidConfig, "value for " + k + " is not a number: " + std::string(v));
        return *d;
    };
    auto as_size = [&] {
        auto n = parse_size(v);
        if (!n)
            throw Error(ErrorCode::InvalidConfig, "value for " + k + " is not a non-negative integer: " + std::string(v));
        return *n;
    };
    if (k == "pre_emphasis") pre_emphasis = as_double();
    else if (k == "frame_ms") frame_ms = as_double();
    else if (k == "hop_ms") hop_ms = as_double();
    else if (k == "n_fft") n_fft = as_size();
    else if (k == "n_filters") n_filters = as_size();
    else if (k == "n_coeffs") n_coeffs = as_size();
    else if (k == "f_min_hz") f_min_hz = as_double();
    else if (k == "f_max_hz") f_max_hz = as_double();
    else if (k == "smooth_frames") smooth_frames = as_size();
    else if (k == "peak_prominence_frac") peak_prominence_frac = as_double();
    else if (k == "peak_separation_frames") peak_separation_frames = as_size();
    else throw Error(ErrorCode::InvalidConfig, "unknown config key '" + k + "'");
}

void PipelineConfig::apply_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::IoFailure, "cannot open config " + path.string());
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = trim(line);
        if (t.empty() || t.front() == '#')
            continue;
        const auto eq = t.find('=');
        if (eq == std::string_view::npos)
            throw Error(ErrorCode::InvalidConfig,
                        path.string() + ":" + std::to_string(line_no) + ": expected key=value");
        set(t.substr(0, eq), t.substr(eq + 1));
    }
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& path)
{
    PipelineConfig cfg;
    cfg.apply_file(path);
    return cfg;
}

std::string PipelineConfig::to_text() const
{
    std::ostringstream out;
    out << "pre_emphasis=" << format_double(pre_emphasis) << '\n'
        << "frame_ms=" << format_double(frame_ms) << '\n'
        << "hop_ms=" << format_double(hop_ms) << '\n'
        << "n_fft=" << n_fft << '\n'
        << "n_filters=" << n_filters << '\n'
        << "n_coeffs=" << n_coeffs << '\n'
        << "f_min_hz=" << format_double(f_min_hz) << '\n'
        << "f_max_hz=" << format_double(f_max_hz) << '\n'
        << "smooth_frames=" << smooth_frames << '\n'
        << "peak_prominence_frac=" << format_double(peak_prominence_frac) << '\n'
        << "peak_separation_frames=" << peak_separation_frames << '\n';
    return out.str();
}

}  // namespace emopeak
