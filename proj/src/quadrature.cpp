#include "sig6/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "sig6/errors.hpp"

namespace sig6::quadrature {
namespace {

constexpr std::size_t kMaxPanels = std::size_t{1} << 14;
// Deeper than this the panels approach the spacing of doubles.
constexpr int kMaxDepth = 40;

GaussRule build_rule() {
  constexpr std::size_t n = kGaussOrder;
  GaussRule rule;
  for (std::size_t i = 0; i < n; ++i) {
    // Chebyshev-like starting guess for the i-th largest root.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-17) break;
    }
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  // The middle node of an odd rule is exactly zero.
  rule.nodes[n / 2] = 0.0;
  return rule;
}

double panel_rule(const std::function<double(double)>& f, double a,
                  double b) {
  const GaussRule& rule = gauss_legendre_15();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < kGaussOrder; ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return sum * half;
}

struct Refiner {
  const std::function<double(double)>& f;
  double rel_tol;
  double density;  // |coarse estimate| per unit length
  std::size_t panels = 0;

  // `whole` is the one-panel estimate on [a, b].
  double refine(double a, double b, double whole, int depth) {
    const double mid = 0.5 * (a + b);
    const double left = panel_rule(f, a, mid);
    const double right = panel_rule(f, mid, b);
    const double halves = left + right;
    ++panels;
    const double scale =
        std::max(std::abs(halves), density * std::abs(b - a));
    if (std::abs(halves - whole) <= rel_tol * scale) return halves;
    if (depth >= kMaxDepth || panels > kMaxPanels) {
      throw ConvergenceError(
          "Gauss-Legendre refinement exceeded its panel budget");
    }
    return refine(a, mid, left, depth + 1) + refine(mid, b, right, depth + 1);
  }
};

}  // namespace

const GaussRule& gauss_legendre_15() {
  static const GaussRule rule = build_rule();
  return rule;
}

AdaptiveResult integrate(const std::function<double(double)>& f, double a,
                         double b, double rel_tol,
                         std::size_t initial_panels) {
  if (a == b) return {0.0, 0};
  const std::size_t n = initial_panels == 0 ? 1 : initial_panels;
  const double width = (b - a) / static_cast<double>(n);

  std::vector<double> coarse(n);
  double estimate = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double lo = a + width * static_cast<double>(j);
    const double hi = j + 1 == n ? b : lo + width;
    coarse[j] = panel_rule(f, lo, hi);
    estimate += coarse[j];
  }

  Refiner refiner{f, rel_tol, std::abs(estimate / (b - a))};
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double lo = a + width * static_cast<double>(j);
    const double hi = j + 1 == n ? b : lo + width;
    total += refiner.refine(lo, hi, coarse[j], 0);
  }
  return {total, 2 * refiner.panels};
}

}  // namespace sig6::quadrature
