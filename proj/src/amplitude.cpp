#include "sig6/amplitude.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sig6/errors.hpp"
#include "sig6/quadrature.hpp"

namespace sig6 {
namespace {

constexpr int kMaxNewtonIterations = 60;

}  // namespace

Modulus Modulus::from_kappa(double kappa) {
  if (!(kappa > 0.0 && kappa < 1.0)) {
    throw DomainError("kappa must lie in (0,1), got " + std::to_string(kappa));
  }
  const double lambda = std::sqrt((1.0 - kappa) * (1.0 + kappa));
  // κ² - λ² = 1 - 2λ², factored to keep Λ accurate near κ² = 1/2.
  const double Lambda = (kappa - lambda) * (kappa + lambda);
  return Modulus(kappa, lambda, Lambda);
}

double psi_of_phi(const Modulus& m, double phi) {
  return std::asin(m.kappa() * std::sin(phi));
}

double amplitude_integrand(const Modulus& m, double theta) {
  // cos ψ = sqrt(λ² + κ² cos² θ) has no cancellation as κ sin θ -> 1, and
  // atan2 keeps ψ accurate where arcsin would lose half its digits.
  const double d = std::hypot(m.lambda(), m.kappa() * std::cos(theta));
  const double psi = std::atan2(m.kappa() * std::sin(theta), d);
  return std::cos(2.0 * psi / 3.0) / d;
}

double forward_u(const Modulus& m, double phi, const Tolerances& tol) {
  if (phi == 0.0) return 0.0;
  const double length = std::abs(phi);
  // Roughly one panel per unit length to start; refinement does the rest.
  const auto panels = static_cast<std::size_t>(std::ceil(length));
  const auto result = quadrature::integrate(
      [&m](double theta) { return amplitude_integrand(m, theta); }, 0.0,
      length, tol.quadrature, panels);
  return std::copysign(result.value, phi);
}

double quarter_period(const Modulus& m, const Tolerances& tol) {
  // Integrate in t = π/2 - θ so the peak of width ~λ sits at t = 0, where
  // quadrature nodes carry no absolute rounding.
  const auto reflected = [&m](double t) {
    const double d = std::hypot(m.lambda(), m.kappa() * std::sin(t));
    const double psi = std::atan2(m.kappa() * std::cos(t), d);
    return std::cos(2.0 * psi / 3.0) / d;
  };
  return quadrature::integrate(reflected, 0.0, std::numbers::pi / 2.0,
                               tol.quadrature, 2)
      .value;
}

double invert_phi(const Modulus& m, double u, const Tolerances& tol) {
  if (u == 0.0) return 0.0;
  if (u < 0.0) return -invert_phi(m, -u, tol);

  // du/dφ lies in [1/2, 1/λ], so φ lies in [λu, 2u].
  const double lambda = m.lambda();
  double lo = 0.5 * lambda * u;
  double hi = 2.0 * u * std::max(1.0, 1.0 / lambda);
  while (forward_u(m, lo, tol) > u) lo *= 0.5;
  while (forward_u(m, hi, tol) < u) hi *= 2.0;

  double phi = std::clamp(u, lo, hi);
  double last_step = hi - lo;
  for (int iter = 0; iter < kMaxNewtonIterations; ++iter) {
    const double g = forward_u(m, phi, tol) - u;
    if (g == 0.0) return phi;
    if (g < 0.0) {
      lo = phi;
    } else {
      hi = phi;
    }
    double next = phi - g / amplitude_integrand(m, phi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - phi);
    phi = next;

    const double scale = std::max(1.0, std::abs(phi));
    if (step <= tol.newton * scale) return phi;
    // Quadrature noise puts a floor under the correction; once the step has
    // stopped shrinking at that level further iterations are pointless.
    if (step <= 1e-12 * scale && step >= last_step) return phi;
    last_step = step;
  }
  throw ConvergenceError("amplitude inversion did not converge in 60 "
                         "iterations at u = " +
                         std::to_string(u));
}

Frame frame_from_phi(const Modulus& m, double u, double phi) {
  Frame f;
  f.u = u;
  f.phi = phi;
  f.s = std::sin(phi);
  f.c = std::cos(phi);
  f.d = std::hypot(m.lambda(), m.kappa() * f.c);
  f.psi = std::atan2(m.kappa() * f.s, f.d);
  f.p = std::cos(2.0 * f.psi / 3.0);
  f.sigma = std::sin(2.0 * f.psi / 3.0);
  f.delta = f.d / f.p;
  f.nabla = f.p * f.p;
  f.S = f.s * f.s;
  f.C = f.c * f.c;
  f.D = f.d * f.d;
  if (std::abs(f.c) > kTnPoleThreshold) {
    f.tn = f.s / f.c;
    f.T = *f.tn * *f.tn;
  } else {
    f.tn.reset();
    f.T.reset();
  }
  return f;
}

Frame frame_at(const Modulus& m, double u, const Tolerances& tol) {
  return frame_from_phi(m, u, invert_phi(m, u, tol));
}

}  // namespace sig6
