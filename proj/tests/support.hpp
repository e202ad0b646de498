#pragma once

#include "emopeak/random.hpp"

#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

namespace testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag)
    {
        static std::uint64_t counter = 0;
        const auto salt = emopeak::derive_seed(reinterpret_cast<std::uintptr_t>(this), {counter++});
        path_ = std::filesystem::temp_directory_path() / ("emopeak_" + tag + "_" + std::to_string(salt % 1000000007));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir()
    {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& p)
{
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

inline std::vector<std::string> read_lines(const std::filesystem::path& p)
{
    std::ifstream f(p);
    std::vector<std::string> lines;
    for (std::string line; std::getline(f, line);)
        lines.push_back(line);
    return lines;
}

inline void write_file(const std::filesystem::path& p, const std::string& content)
{
    std::ofstream f(p, std::ios::binary);
    f << content;
}

inline std::vector<double> random_vector(emopeak::Rng& rng, std::size_t n, double lo = -1.0, double hi = 1.0)
{
    std::vector<double> v(n);
    for (auto& x : v)
        x = rng.uniform(lo, hi);
    return v;
}

}  // namespace testing
