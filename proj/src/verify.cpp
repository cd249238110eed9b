#include "sig6/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sig6/errors.hpp"
#include "sig6/flow.hpp"

namespace sig6 {
namespace {

constexpr double kFdMagnitudeFloor = 1e-6;

double discrepancy(double fd, double analytic) {
  const double diff = std::abs(fd - analytic);
  return std::abs(analytic) > kFdMagnitudeFloor ? diff / std::abs(analytic)
                                                : diff;
}

}  // namespace

DerivativeBundle analytic_derivatives(const Modulus& m, double u,
                                      const Tolerances& tol) {
  DerivativeBundle b;
  b.frame = frame_at(m, u, tol);
  const Frame& f = b.frame;
  const FlowTangent t = flow_derivative(state_from_frame(f), m);
  b.ds = t.s.real();
  b.dc = t.c.real();
  b.dd = t.d.real();
  b.dp = t.p.real();
  b.dsigma = t.sigma.real();
  b.ddelta = (b.dd * f.p - f.d * b.dp) / (f.p * f.p);
  b.dnabla = 2.0 * f.p * b.dp;
  b.dS = 2.0 * f.s * b.ds;
  b.dC = 2.0 * f.c * b.dc;
  b.dD = 2.0 * f.d * b.dd;
  if (f.tn) {
    b.dtn = (b.ds * f.c - f.s * b.dc) / (f.c * f.c);
    b.dT = 2.0 * *f.tn * *b.dtn;
  }
  return b;
}

IdentityResiduals identity_residuals(const Modulus& m,
                                     const DerivativeBundle& b) {
  const Frame& f = b.frame;
  const double k2 = m.kappa() * m.kappa();
  const double l2 = m.lambda() * m.lambda();
  const double d = f.d, s = f.s, c = f.c, p = f.p, delta = f.delta;
  const double d2 = d * d, dd2 = b.dd * b.dd, p2 = p * p;
  const double delta2 = delta * delta, delta3 = delta2 * delta;
  const double quartic = (1.0 - d2) * (d2 - l2);

  IdentityResiduals r;
  auto& v = r.values;
  v[0] = delta * p - d;
  v[1] = delta3 - 2.0 * d2 * delta3 - 3.0 * d * delta2 + 4.0 * d2 * d;
  v[2] = d2 * dd2 - delta2 * quartic;
  {
    const double bracket = 4.0 * quartic - 3.0 * dd2;
    v[3] = (2.0 * d2 - 1.0) * (2.0 * d2 - 1.0) * dd2 * dd2 * dd2 -
           quartic * bracket * bracket;
  }
  v[4] = p2 * dd2 - quartic;
  v[5] = p2 * b.dc * b.dc - (1.0 - c * c) * (l2 + k2 * c * c);
  v[6] = p2 * b.ds * b.ds - (1.0 - s * s) * (1.0 - k2 * s * s);
  v[7] = p2 * b.dS * b.dS - 4.0 * f.S * (1.0 - f.S) * (1.0 - k2 * f.S);
  v[8] = p2 * b.dC * b.dC - 4.0 * f.C * (1.0 - f.C) * (l2 + k2 * f.C);
  v[9] = p2 * b.dD * b.dD - 4.0 * f.D * (1.0 - f.D) * (f.D - l2);
  v[10] = 9.0 * p2 * b.dp * b.dp -
          2.0 * (1.0 - p2) * (4.0 * p2 * p - 3.0 * p + 1.0 - 2.0 * l2);
  {
    const double nabla = f.nabla;
    const double lhs =
        9.0 / 8.0 * b.dnabla * b.dnabla + m.Lambda() * (nabla - 1.0);
    const double rhs = nabla * (nabla - 1.0) * (nabla - 1.0) *
                       (4.0 * nabla - 3.0) * (4.0 * nabla - 3.0);
    v[11] = lhs * lhs - rhs;
  }
  if (f.T && b.dT) {
    const double T = *f.T;
    v[12] = f.nabla * *b.dT * *b.dT - 4.0 * T * (1.0 + T) * (1.0 + l2 * T);
  } else {
    r.r13_skipped = true;
  }
  for (double& x : v) x = std::abs(x);
  return r;
}

IdentityResiduals identity_residuals(const Modulus& m, double u,
                                     const Tolerances& tol) {
  return identity_residuals(m, analytic_derivatives(m, u, tol));
}

double ResidualReport::max_residual() const {
  double worst = 0.0;
  for (const auto& e : entries) worst = std::max(worst, e.max_residual);
  return worst;
}

std::vector<double> standard_grid(const Modulus& m, std::size_t n) {
  if (n < 2) throw DomainError("a grid needs at least two points");
  const double half_span = 2.0 * quarter_period(m);
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) {
    grid[i] = -half_span + 2.0 * half_span * static_cast<double>(i) /
                               static_cast<double>(n - 1);
  }
  return grid;
}

std::string describe_grid(std::span<const double> grid) {
  std::ostringstream os;
  os.precision(17);
  if (grid.empty()) return "empty";
  os << grid.size() << " points on [" << grid.front() << ", " << grid.back()
     << "]";
  return os.str();
}

ResidualReport residual_report(const Modulus& m, std::span<const double> grid,
                               double tol, const Tolerances& pipeline) {
  ResidualReport report;
  report.kappa = m.kappa();
  report.grid = describe_grid(grid);
  report.tol = tol;
  for (auto name : kIdentityNames) {
    report.entries.push_back({std::string(name), 0.0, grid.empty() ? 0.0 : grid[0]});
  }
  for (const double u : grid) {
    const IdentityResiduals r = identity_residuals(m, u, pipeline);
    if (r.r13_skipped) ++report.r13_skips;
    for (std::size_t i = 0; i < kIdentityCount; ++i) {
      if (i == kIdentityCount - 1 && r.r13_skipped) continue;
      if (r.values[i] > report.entries[i].max_residual) {
        report.entries[i].max_residual = r.values[i];
        report.entries[i].argmax_u = u;
      }
    }
  }
  report.pass = std::ranges::all_of(report.entries, [tol](const auto& e) {
    return e.max_residual <= tol;
  });
  return report;
}

QuinticValue quintic_q(double z) {
  const double a = z - 1.0;
  const double b = 4.0 * z - 3.0;
  return {z * a * a * b * b,
          a * a * b * b + 2.0 * z * a * b * b + 8.0 * z * a * a * b};
}

double fd_crosscheck(const Modulus& m, double u, double h,
                     const Tolerances& tol) {
  if (!(h > 0.0)) throw DomainError("finite-difference step must be > 0");
  const DerivativeBundle b = analytic_derivatives(m, u, tol);
  const Frame fp = frame_at(m, u + h, tol);
  const Frame fm = frame_at(m, u - h, tol);
  auto central = [h](double plus, double minus) {
    return (plus - minus) / (2.0 * h);
  };

  double worst = 0.0;
  auto check = [&](double plus, double minus, double analytic) {
    worst = std::max(worst, discrepancy(central(plus, minus), analytic));
  };
  check(fp.s, fm.s, b.ds);
  check(fp.c, fm.c, b.dc);
  check(fp.d, fm.d, b.dd);
  check(fp.p, fm.p, b.dp);
  check(fp.sigma, fm.sigma, b.dsigma);
  check(fp.delta, fm.delta, b.ddelta);
  check(fp.nabla, fm.nabla, b.dnabla);
  check(fp.S, fm.S, b.dS);
  check(fp.C, fm.C, b.dC);
  check(fp.D, fm.D, b.dD);
  if (b.dtn && fp.tn && fm.tn) {
    check(*fp.tn, *fm.tn, *b.dtn);
    check(*fp.T, *fm.T, *b.dT);
  }
  return worst;
}

NonvanishingScan nonvanishing_scan(const Modulus& m,
                                   std::span<const double> grid) {
  NonvanishingScan scan;
  scan.bound_p = std::cos(2.0 / 3.0 * std::asin(m.kappa()));
  scan.bound_d = m.lambda();
  scan.min_p = scan.min_d = 1.0;
  for (const double u : grid) {
    const Frame f = frame_at(m, u);
    if (f.p < scan.min_p) {
      scan.min_p = f.p;
      scan.argmin_p = u;
    }
    if (f.d < scan.min_d) {
      scan.min_d = f.d;
      scan.argmin_d = u;
    }
  }
  scan.holds = scan.min_p >= scan.bound_p - 1e-12 &&
               scan.min_d >= scan.bound_d - 1e-12;
  return scan;
}

double PeriodResiduals::max() const {
  return std::max({d, p, delta, nabla, s, c});
}

PeriodResiduals real_period_check(const Modulus& m,
                                  std::span<const double> grid) {
  const double step = 2.0 * quarter_period(m);
  PeriodResiduals r;
  for (const double u : grid) {
    const Frame a = frame_at(m, u);
    const Frame b = frame_at(m, u + step);
    r.d = std::max(r.d, std::abs(b.d - a.d));
    r.p = std::max(r.p, std::abs(b.p - a.p));
    r.delta = std::max(r.delta, std::abs(b.delta - a.delta));
    r.nabla = std::max(r.nabla, std::abs(b.nabla - a.nabla));
    r.s = std::max(r.s, std::abs(b.s + a.s));
    r.c = std::max(r.c, std::abs(b.c + a.c));
  }
  return r;
}

}  // namespace sig6
