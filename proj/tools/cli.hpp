#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace sig6::cli {

enum ExitCode : int {
  kOk = 0,
  kVerificationFailed = 1,
  kUsage = 2,
  kIoError = 3,
  kSingularity = 4,
};

/// Runs one command line (program name excluded) and returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

/// Parses "x", "x+yi", "x-yi", "yi", "i" and friends. Throws
/// std::invalid_argument on malformed input.
std::complex<double> parse_complex(std::string_view text);

/// Comma-separated list of complex waypoints.
std::vector<std::complex<double>> parse_path(std::string_view text);

/// 17 significant digits, the form used in every CSV output.
std::string format_number(double x);

}  // namespace sig6::cli
