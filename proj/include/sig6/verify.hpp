#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sig6/amplitude.hpp"

namespace sig6 {

/// Frame values together with analytic first derivatives in u.
///
/// Derivatives go through the flow vector field; the squared functions use
/// the product rule, e.g. D' = 2 d d'.
struct DerivativeBundle {
  Frame frame;
  double ds = 0.0;
  double dc = 0.0;
  double dd = 0.0;
  double dp = 0.0;
  double dsigma = 0.0;
  double ddelta = 0.0;
  double dnabla = 0.0;
  double dS = 0.0;
  double dC = 0.0;
  double dD = 0.0;
  std::optional<double> dtn;
  std::optional<double> dT;
};

DerivativeBundle analytic_derivatives(const Modulus& m, double u,
                                      const Tolerances& tol = {});

inline constexpr std::size_t kIdentityCount = 13;

/// R1..R13 in order: δ∂ = d, the δ/d cubic, d'² with δ, the sextic in d
/// alone, d'² with ∂, the c and s analogues, the three squares, the ∂
/// equation, the ∇ equation, the T equation.
inline constexpr std::array<std::string_view, kIdentityCount> kIdentityNames{
    "R1_delta",     "R2_ratio",     "R3_de_delta",  "R4_d_alone",
    "R5_de_partial", "R6_de_c",     "R7_de_s",      "R8_square_S",
    "R9_square_C",  "R10_square_D", "R11_partial",  "R12_nabla",
    "R13_t"};

struct IdentityResiduals {
  std::array<double, kIdentityCount> values{};
  bool r13_skipped = false;  // tn pole at this point; values[12] is 0
};

IdentityResiduals identity_residuals(const Modulus& m, double u,
                                     const Tolerances& tol = {});
IdentityResiduals identity_residuals(const Modulus& m,
                                     const DerivativeBundle& b);

struct ResidualEntry {
  std::string name;
  double max_residual = 0.0;
  double argmax_u = 0.0;
};

struct ResidualReport {
  double kappa = 0.0;
  std::vector<ResidualEntry> entries;  // one per identity, R1..R13
  std::string grid;
  double tol = 0.0;
  std::size_t r13_skips = 0;
  bool pass = false;

  double max_residual() const;
};

/// n equispaced points on [-2K₆, 2K₆].
std::vector<double> standard_grid(const Modulus& m, std::size_t n = 33);

std::string describe_grid(std::span<const double> grid);

ResidualReport residual_report(const Modulus& m, std::span<const double> grid,
                               double tol, const Tolerances& pipeline = {});

struct QuinticValue {
  double q = 0.0;
  double dq = 0.0;
};

/// q(z) = z (z-1)² (4z-3)² and its derivative.
QuinticValue quintic_q(double z);

/// Largest discrepancy between central differences of frame_at with step h
/// and the analytic bundle. Relative where the analytic value exceeds 1e-6
/// in magnitude, absolute otherwise. tn and T are skipped when either
/// stencil point or the centre is a pole.
double fd_crosscheck(const Modulus& m, double u, double h,
                     const Tolerances& tol = {});

struct NonvanishingScan {
  double min_p = 0.0;
  double min_d = 0.0;
  double argmin_p = 0.0;
  double argmin_d = 0.0;
  double bound_p = 0.0;  // cos((2/3) arcsin κ)
  double bound_d = 0.0;  // λ
  bool holds = false;    // both minima within 1e-12 of their bounds
};

NonvanishingScan nonvanishing_scan(const Modulus& m,
                                   std::span<const double> grid);

/// Residuals under u -> u + 2K₆: d, ∂, δ, ∇ invariant; s, c negated.
struct PeriodResiduals {
  double d = 0.0;
  double p = 0.0;
  double delta = 0.0;
  double nabla = 0.0;
  double s = 0.0;
  double c = 0.0;

  double max() const;
};

PeriodResiduals real_period_check(const Modulus& m,
                                  std::span<const double> grid);

}  // namespace sig6
