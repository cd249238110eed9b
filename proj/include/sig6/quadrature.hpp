#pragma once

#include <array>
#include <cstddef>
#include <functional>

namespace sig6::quadrature {

inline constexpr std::size_t kGaussOrder = 15;

struct GaussRule {
  std::array<double, kGaussOrder> nodes{};    // on [-1, 1], ascending
  std::array<double, kGaussOrder> weights{};
};

/// The 15-point Gauss-Legendre rule, computed once by Newton iteration on
/// the Legendre polynomial.
const GaussRule& gauss_legendre_15();

struct AdaptiveResult {
  double value = 0.0;
  std::size_t panels = 0;  // 15-point panels evaluated in the final pass
};

/// Composite 15-point Gauss-Legendre on [a, b].
///
/// Starts from `initial_panels` equal panels. Each panel is halved until the
/// two half-panel sums agree with the whole-panel value to `rel_tol`,
/// relative to the larger of the panel's own value and its share of the
/// coarse total. Only the panels that disagree are split, so a narrow peak
/// (the integrand of the forward map as κ -> 1) costs a few dozen panels
/// rather than a uniformly fine grid. Throws ConvergenceError past 2^14
/// panels or 40 levels of halving.
AdaptiveResult integrate(const std::function<double(double)>& f, double a,
                         double b, double rel_tol,
                         std::size_t initial_panels = 1);

}  // namespace sig6::quadrature
