#pragma once

#include <optional>

namespace sig6 {

/// Modulus κ together with λ = sqrt(1 - κ²) and Λ = 1 - 2λ².
class Modulus {
 public:
  /// Throws DomainError unless 0 < kappa < 1.
  static Modulus from_kappa(double kappa);

  double kappa() const { return kappa_; }
  double lambda() const { return lambda_; }
  double Lambda() const { return Lambda_; }

  /// The modulus with κ and λ exchanged exactly.
  Modulus complementary() const {
    return Modulus(lambda_, kappa_, (lambda_ - kappa_) * (lambda_ + kappa_));
  }

 private:
  Modulus(double kappa, double lambda, double Lambda)
      : kappa_(kappa), lambda_(lambda), Lambda_(Lambda) {}

  double kappa_;
  double lambda_;
  double Lambda_;
};

/// Accuracy knobs for the real-line pipeline. The defaults give near
/// machine precision; tests halve them to check the pipeline is stable.
struct Tolerances {
  double quadrature = 1e-14;  // relative agreement of successive refinements
  double newton = 1e-15;      // relative size of the last Newton correction
};

/// Every function of the construction at one real argument u.
///
/// `p` is ∂ = cos(2ψ/3) and `sigma` its companion sin(2ψ/3). `tn` and `T`
/// are empty where cos φ vanishes.
struct Frame {
  double u = 0.0;
  double phi = 0.0;
  double psi = 0.0;
  double s = 0.0;
  double c = 1.0;
  double d = 1.0;
  double delta = 1.0;
  double p = 1.0;
  double sigma = 0.0;
  double nabla = 1.0;
  double S = 0.0;
  double C = 1.0;
  double D = 1.0;
  std::optional<double> tn = 0.0;
  std::optional<double> T = 0.0;
};

/// |cos φ| at or below this is treated as a pole of tn = tan φ.
inline constexpr double kTnPoleThreshold = 1e-12;

/// ψ = arcsin(κ sin φ), principal branch.
double psi_of_phi(const Modulus& m, double phi);

/// The integrand of the forward map, F(1/6,5/6;1/2;κ² sin²θ) = ∂/d.
double amplitude_integrand(const Modulus& m, double theta);

/// u(φ) = ∫₀^φ F(1/6,5/6;1/2;κ² sin²θ) dθ. Odd and strictly increasing.
double forward_u(const Modulus& m, double phi, const Tolerances& tol = {});

/// K₆(κ) = u(π/2).
double quarter_period(const Modulus& m, const Tolerances& tol = {});

/// The unique real φ with u(φ) = u, by Newton iteration with a bisection
/// safeguard. Throws ConvergenceError after 60 iterations.
double invert_phi(const Modulus& m, double u, const Tolerances& tol = {});

/// Builds the full frame from an amplitude φ already known to match u.
Frame frame_from_phi(const Modulus& m, double u, double phi);

/// Builds the full frame at u.
Frame frame_at(const Modulus& m, double u, const Tolerances& tol = {});

}  // namespace sig6
