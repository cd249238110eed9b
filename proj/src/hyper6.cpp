#include "sig6/hyper6.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "sig6/errors.hpp"

namespace sig6 {
namespace {

constexpr std::size_t kMaxTerms = 1'000'000;

void check_domain(double x) {
  if (!(x >= 0.0 && x < 1.0)) {
    throw DomainError("F(1/6,5/6;1/2;x) requires 0 <= x < 1, got x = " +
                      std::to_string(x));
  }
}

}  // namespace

HyperResult f16_series(double x) {
  check_domain(x);
  constexpr double a = 1.0 / 6.0;
  constexpr double b = 5.0 / 6.0;
  constexpr double c = 0.5;
  const double cutoff = std::ldexp(1.0, -53);

  double term = 1.0;
  double sum = 1.0;
  std::size_t n = 0;
  for (;;) {
    if (n >= kMaxTerms) {
      throw ConvergenceError("F(1/6,5/6;1/2;x) series exceeded 10^6 terms");
    }
    const double k = static_cast<double>(n);
    term *= (k + a) * (k + b) / ((k + c) * (k + 1.0)) * x;
    ++n;
    if (term < cutoff * sum) break;
    sum += term;
  }
  return {sum, n, HyperMethod::series};
}

HyperResult f16_closed(double x) {
  check_domain(x);
  const double z = std::asin(std::sqrt(x));
  // cos z = sqrt(1 - x) keeps full relative accuracy as x -> 1.
  return {std::cos(2.0 * z / 3.0) / std::sqrt(1.0 - x), 0,
          HyperMethod::closed};
}

double f16(double x) { return f16_closed(x).value; }

}  // namespace sig6
