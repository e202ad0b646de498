#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace emopeak::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line (without the program name, e.g. {"synth", "--out", "d"}).
/// Results go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses "lo:hi:step" or a comma list into fractions rounded to 1e-9.
std::vector<double> parse_fractions(const std::string& text);

}  // namespace emopeak::cli
