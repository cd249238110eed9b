#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "sig6/errors.hpp"
#include "sig6/quadrature.hpp"

using namespace sig6;

TEST_CASE("15-point rule") {
  const auto& rule = quadrature::gauss_legendre_15();
  double total = 0.0;
  for (double w : rule.weights) total += w;
  CHECK(total == doctest::Approx(2.0).epsilon(1e-15));
  for (std::size_t i = 0; i < quadrature::kGaussOrder; ++i) {
    CHECK(rule.nodes[i] == doctest::Approx(-rule.nodes[14 - i]).epsilon(1e-15));
  }
  // Exact through degree 29.
  for (int degree : {2, 10, 28}) {
    double sum = 0.0;
    for (std::size_t i = 0; i < quadrature::kGaussOrder; ++i) {
      sum += rule.weights[i] * std::pow(rule.nodes[i], degree);
    }
    CHECK(sum == doctest::Approx(2.0 / (degree + 1)).epsilon(1e-14));
  }
}

TEST_CASE("adaptive integration of smooth functions") {
  const auto r = quadrature::integrate([](double x) { return std::sin(x); },
                                       0.0, std::numbers::pi, 1e-14);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(r.panels >= 2);

  const auto e = quadrature::integrate([](double x) { return std::exp(x); },
                                       0.0, 3.0, 1e-14, 3);
  CHECK(e.value == doctest::Approx(std::exp(3.0) - 1.0).epsilon(1e-14));

  CHECK(quadrature::integrate([](double) { return 1.0; }, 2.0, 2.0, 1e-14)
            .value == 0.0);
}

TEST_CASE("refinement cap") {
  // A jump at an irrational point converges only linearly.
  auto step = [](double x) { return x < 1.0 / std::numbers::sqrt2 ? 0.0 : 1.0; };
  CHECK_THROWS_AS(quadrature::integrate(step, 0.0, 1.0, 1e-14),
                  ConvergenceError);
}
