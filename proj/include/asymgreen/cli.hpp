#pragma once

#include <complex>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace asymgreen {

// Exit codes of run_command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNoConvergence = 3;

// "2", "1.5i", "-i", "2+1i", "3-0.5j"
std::complex<double> parse_complex(std::string_view text);

// Subcommands: coeffs, expand, compare, shorttime, validity, scatter.
// argv[0] is the program name.
int run_command(const std::vector<std::string_view>& argv, std::ostream& out, std::ostream& err);

}  // namespace asymgreen
