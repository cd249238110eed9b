#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "sig6/errors.hpp"
#include "sig6/hyper6.hpp"

using namespace sig6;

namespace {

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::abs(b);
}

// Goldens: closed forms at z = π/4 and z = π/3, confirmed by 50-digit
// summation of the series.
const double kAtHalf = std::sqrt(6.0) / 2.0;
const double kAtThreeQuarters = 2.0 * std::cos(2.0 * std::numbers::pi / 9.0);
// 50-digit series value at x = 0.99, rounded.
constexpr double kAtPoint99 = 5.566742948343845668;

}  // namespace

TEST_CASE("origin is exactly one") {
  CHECK(f16_series(0.0).value == 1.0);
  CHECK(f16_closed(0.0).value == 1.0);
  CHECK(f16(0.0) == 1.0);
}

TEST_CASE("golden values") {
  CHECK(close_rel(f16_series(0.5).value, kAtHalf, 1e-14));
  CHECK(close_rel(f16_closed(0.5).value, kAtHalf, 4e-16));
  CHECK(close_rel(f16(0.5), kAtHalf, 4e-16));
  CHECK(close_rel(f16_series(0.75).value, kAtThreeQuarters, 1e-14));
  CHECK(close_rel(f16(0.75), kAtThreeQuarters, 4e-16));
}

TEST_CASE("near the end of the interval") {
  const auto series = f16_series(0.99);
  const auto closed = f16_closed(0.99);
  CHECK(close_rel(series.value, closed.value, 1e-10));
  CHECK(close_rel(closed.value, kAtPoint99, 1e-14));
  CHECK(series.method == HyperMethod::series);
  CHECK(closed.method == HyperMethod::closed);
}

TEST_CASE("series and closed form agree on the grid") {
  for (int i = 0; i <= 18; ++i) {
    const double x = 0.05 * i;
    CAPTURE(x);
    const double closed = f16_closed(x).value;
    CHECK(std::abs(f16_series(x).value - closed) <= 1e-12 * closed);
  }
}

TEST_CASE("strictly increasing") {
  double prev = f16(0.0);
  for (int i = 1; i <= 18; ++i) {
    const double next = f16(0.05 * i);
    CHECK(next > prev);
    prev = next;
  }
}

TEST_CASE("truncation stays within the ratio-test bound") {
  // Terms are dominated by x^n, so x^n < 2^-53 bounds the count.
  for (int i = 1; i <= 10; ++i) {
    const double x = 0.05 * i;
    const auto bound =
        static_cast<std::size_t>(std::ceil(-53.0 * std::log(2.0) / std::log(x)));
    CAPTURE(x);
    CHECK(f16_series(x).terms_used <= bound);
  }
  CHECK(f16_series(0.5).terms_used == 49);
}

TEST_CASE("values are at least one") {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> dist(0.0, 0.999);
  for (int i = 0; i < 500; ++i) {
    const double x = dist(rng);
    CAPTURE(x);
    CHECK(f16(x) >= 1.0);
    CHECK(std::isfinite(f16(x)));
  }
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(f16_series(-0.1), DomainError);
  CHECK_THROWS_AS(f16_series(1.0), DomainError);
  CHECK_THROWS_AS(f16_closed(1.5), DomainError);
  CHECK_THROWS_AS(f16(-1e-300), DomainError);
  CHECK_THROWS_AS(f16(std::numeric_limits<double>::quiet_NaN()), DomainError);
}
