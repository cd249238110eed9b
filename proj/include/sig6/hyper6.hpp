#pragma once

#include <cstddef>

namespace sig6 {

enum class HyperMethod { series, closed };

struct HyperResult {
  double value = 1.0;
  std::size_t terms_used = 0;  // series path only
  HyperMethod method = HyperMethod::closed;
};

/// F(1/6, 5/6; 1/2; x) by direct summation of the Gauss series.
///
/// Summation stops once the next term drops below 2^-53 times the partial
/// sum. Throws DomainError unless 0 <= x < 1 and ConvergenceError after
/// 10^6 terms.
HyperResult f16_series(double x);

/// F(1/6, 5/6; 1/2; x) via F(1/6, 5/6; 1/2; sin^2 z) = cos(2z/3) / cos z with
/// z = arcsin(sqrt(x)) on the principal branch.
HyperResult f16_closed(double x);

/// Production evaluator; the closed form is accurate on all of [0, 1).
double f16(double x);

}  // namespace sig6
