#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace emopeak {

std::string_view trim(std::string_view s) noexcept;

/// Splits on `sep` without collapsing empty fields.
std::vector<std::string> split(std::string_view s, char sep);

std::optional<double> parse_double(std::string_view s) noexcept;
std::optional<std::size_t> parse_size(std::string_view s) noexcept;

/// Shortest round-trip decimal form of `v`.
std::string format_double(double v);

/// Like format_double() but always carries a decimal point ("150.0").
std::string format_decimal(double v);

}  // namespace emopeak
