#include "sig6/flow.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "sig6/errors.hpp"

namespace sig6 {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxSteps = 10'000'000;
constexpr double kUnderflowFraction = 1e-13;

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                 a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0,
                 e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                 e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

constexpr double kSafety = 0.9;
constexpr double kAlpha = 0.7 / 5.0;  // PI controller exponents
constexpr double kBeta = 0.4 / 5.0;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 5.0;

template <std::size_t N>
using Vec = std::array<cplx, N>;

std::string describe(cplx z) {
  std::ostringstream os;
  os.precision(17);
  os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

struct Sig6Ops {
  static constexpr std::size_t N = 5;
  using State = FlowState;
  const Modulus& m;

  Vec<N> pack(const FlowState& x) const { return {x.s, x.c, x.d, x.p, x.sigma}; }
  FlowState unpack(const Vec<N>& y, cplx u) const {
    return {u, y[0], y[1], y[2], y[3], y[4]};
  }
  Vec<N> rhs(const Vec<N>& y, cplx u) const {
    const FlowTangent t = flow_derivative(unpack(y, u), m);
    return {t.s, t.c, t.d, t.p, t.sigma};
  }
  double guard(const Vec<N>& y) const { return std::abs(y[3]); }
  double drift(const Vec<N>& y, cplx u) const {
    return quadratic_invariant_drift(unpack(y, u), m);
  }
};

struct ClassicalOps {
  static constexpr std::size_t N = 3;
  using State = ClassicalState;
  double k;
  double l;

  Vec<N> pack(const ClassicalState& x) const { return {x.sn, x.cn, x.dn}; }
  ClassicalState unpack(const Vec<N>& y, cplx u) const {
    return {u, y[0], y[1], y[2], k, l};
  }
  Vec<N> rhs(const Vec<N>& y, cplx u) const {
    const ClassicalTangent t = classical_derivative(unpack(y, u));
    return {t.sn, t.cn, t.dn};
  }
  double guard(const Vec<N>&) const { return kInf; }
  double drift(const Vec<N>& y, cplx u) const {
    return classical_invariant_drift(unpack(y, u));
  }
};

template <std::size_t N>
Vec<N> axpy(const Vec<N>& y, double h, std::initializer_list<double> coef,
            std::initializer_list<const Vec<N>*> ks) {
  Vec<N> out = y;
  auto c = coef.begin();
  for (const Vec<N>* kv : ks) {
    const double w = h * *c++;
    if (w == 0.0) continue;
    for (std::size_t i = 0; i < N; ++i) out[i] += w * (*kv)[i];
  }
  return out;
}

template <class Ops>
SegmentResult<typename Ops::State> integrate(const Ops& ops,
                                             const typename Ops::State& start,
                                             cplx target, double tol) {
  constexpr std::size_t N = Ops::N;
  if (!(tol > 0.0)) throw DomainError("integration tolerance must be > 0");

  const cplx u0 = start.u;
  Vec<N> y = ops.pack(start);
  SegmentResult<typename Ops::State> out{start, 0, ops.guard(y),
                                         ops.drift(y, u0)};
  const double length = std::abs(target - u0);
  if (length == 0.0) return out;
  const cplx dir = (target - u0) / length;

  // Derivative with respect to the real path parameter t.
  auto field = [&](const Vec<N>& x, double t) {
    Vec<N> f = ops.rhs(x, u0 + t * dir);
    for (auto& v : f) v *= dir;
    return f;
  };

  double t = 0.0;
  double h = std::min(1e-3, length / 10.0);
  double err_prev = 1e-4;
  bool rejected_last = false;
  Vec<N> k1 = field(y, 0.0);

  while (t < length) {
    if (out.steps >= kMaxSteps) {
      throw ConvergenceError("integrator exceeded the step budget");
    }
    if (h < kUnderflowFraction * length) {
      const cplx where = u0 + t * dir;
      throw StepUnderflowError("step size underflow near u = " +
                                   describe(where),
                               where, ops.guard(y));
    }
    const bool last = t + h >= length;
    if (last) h = length - t;

    Vec<N> k2, k3, k4, k5, k6, y5;
    try {
      k2 = field(axpy<N>(y, h, {a21}, {&k1}), t + h / 5.0);
      k3 = field(axpy<N>(y, h, {a31, a32}, {&k1, &k2}), t + 0.3 * h);
      k4 = field(axpy<N>(y, h, {a41, a42, a43}, {&k1, &k2, &k3}),
                 t + 0.8 * h);
      k5 = field(axpy<N>(y, h, {a51, a52, a53, a54}, {&k1, &k2, &k3, &k4}),
                 t + h * 8.0 / 9.0);
      k6 = field(axpy<N>(y, h, {a61, a62, a63, a64, a65},
                         {&k1, &k2, &k3, &k4, &k5}),
                 t + h);
      y5 = axpy<N>(y, h, {b1, 0.0, b3, b4, b5, b6},
                   {&k1, &k2, &k3, &k4, &k5, &k6});
    } catch (const SingularityError&) {
      // A trial stage strayed onto the singular set; retreat.
      h *= 0.25;
      rejected_last = true;
      continue;
    }

    const double t_next = last ? length : t + h;
    const cplx u_next = last ? target : u0 + t_next * dir;
    const double guard = ops.guard(y5);
    if (guard <= kSingularityThreshold) {
      throw SingularityError("flow reached |p| <= 1e-8 near u = " +
                                 describe(u_next),
                             u_next, guard);
    }
    const Vec<N> k7 = field(y5, t_next);

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const cplx e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                          e6 * k6[i] + e7 * k7[i]);
      err = std::max(err, std::abs(e) / tol);
    }

    if (err <= 1.0) {
      t = t_next;
      y = y5;
      k1 = k7;
      ++out.steps;
      out.min_abs_p = std::min(out.min_abs_p, guard);
      out.max_drift = std::max(out.max_drift, ops.drift(y, u_next));
      double factor = err == 0.0 ? kMaxFactor
                                 : kSafety * std::pow(err, -kAlpha) *
                                       std::pow(err_prev, kBeta);
      factor = std::clamp(factor, kMinFactor, kMaxFactor);
      if (rejected_last) factor = std::min(factor, 1.0);
      h *= factor;
      err_prev = std::max(err, 1e-4);
      rejected_last = false;
    } else {
      h *= std::max(kMinFactor, kSafety * std::pow(err, -0.2));
      rejected_last = true;
    }
  }
  out.state = ops.unpack(y, target);
  return out;
}

template <class Ops>
PathResult<typename Ops::State> integrate_along(
    const Ops& ops, const typename Ops::State& state0, const PathSpec& path,
    double tol) {
  const auto& w = path.waypoints();
  if (std::abs(state0.u - w.front()) > 1e-12 * (1.0 + std::abs(w.front()))) {
    throw DomainError("initial state does not sit at the first waypoint");
  }
  const auto y0 = ops.pack(state0);
  PathResult<typename Ops::State> out;
  out.final_state = state0;
  out.min_abs_p = ops.guard(y0);
  out.max_drift = ops.drift(y0, state0.u);
  out.trace.push_back({state0, out.max_drift, out.max_drift});
  for (std::size_t i = 1; i < w.size(); ++i) {
    const auto seg = integrate(ops, out.final_state, w[i], tol);
    out.final_state = seg.state;
    out.steps += seg.steps;
    out.min_abs_p = std::min(out.min_abs_p, seg.min_abs_p);
    out.max_drift = std::max(out.max_drift, seg.max_drift);
    out.trace.push_back(
        {seg.state, ops.drift(ops.pack(seg.state), seg.state.u),
         out.max_drift});
  }
  return out;
}

double agm(double a, double b) {
  for (int i = 0; i < 64; ++i) {
    const double an = 0.5 * (a + b);
    const double bn = std::sqrt(a * b);
    if (an == a && bn == b) break;
    a = an;
    b = bn;
    if (std::abs(a - b) <= std::numeric_limits<double>::epsilon() * a) break;
  }
  return 0.5 * (a + b);
}

}  // namespace

PathSpec::PathSpec(std::vector<cplx> waypoints)
    : waypoints_(std::move(waypoints)) {
  if (waypoints_.size() < 2) {
    throw DomainError("a path needs at least two waypoints");
  }
  for (std::size_t i = 1; i < waypoints_.size(); ++i) {
    if (waypoints_[i] == waypoints_[i - 1]) {
      throw DomainError("consecutive waypoints must be distinct");
    }
  }
}

double PathSpec::length() const {
  double total = 0.0;
  for (std::size_t i = 1; i < waypoints_.size(); ++i) {
    total += std::abs(waypoints_[i] - waypoints_[i - 1]);
  }
  return total;
}

PathSpec PathSpec::reversed() const {
  return PathSpec({waypoints_.rbegin(), waypoints_.rend()});
}

std::string to_string(FlowSystem system) {
  return system == FlowSystem::sig6 ? "sig6" : "classical";
}

FlowState origin_state() { return {}; }

FlowState state_from_frame(const Frame& f) {
  return {f.u, f.s, f.c, f.d, f.p, f.sigma};
}

ClassicalState classical_origin(double k) {
  if (!(k > 0.0 && k < 1.0)) {
    throw DomainError("classical modulus must lie in (0,1)");
  }
  return {0.0, 0.0, 1.0, 1.0, k, std::sqrt((1.0 - k) * (1.0 + k))};
}

FlowTangent flow_derivative(const FlowState& x, const Modulus& m) {
  const double abs_p = std::abs(x.p);
  if (abs_p <= kSingularityThreshold) {
    throw SingularityError("|p| <= 1e-8 at u = " + describe(x.u), x.u, abs_p);
  }
  const double kappa = m.kappa();
  const cplx inv_p = 1.0 / x.p;
  const cplx psi_dot = kappa * x.c * inv_p;  // ψ' = κc/∂
  const cplx phi_dot = x.d * inv_p;          // φ' = δ = d/∂
  return {x.c * phi_dot,
          -x.s * phi_dot,
          -kappa * x.s * psi_dot,
          -(2.0 / 3.0) * x.sigma * psi_dot,
          (2.0 / 3.0) * kappa * x.c};
}

ClassicalTangent classical_derivative(const ClassicalState& x) {
  return {x.cn * x.dn, -x.sn * x.dn, -x.k * x.k * x.sn * x.cn};
}

double quadratic_invariant_drift(const FlowState& x, const Modulus& m) {
  const double k2 = m.kappa() * m.kappa();
  return std::max({std::abs(x.c * x.c + x.s * x.s - 1.0),
                   std::abs(x.d * x.d + k2 * x.s * x.s - 1.0),
                   std::abs(x.p * x.p + x.sigma * x.sigma - 1.0),
                   std::abs(2.0 * x.d * x.d - 1.0 -
                            (4.0 * x.p * x.p * x.p - 3.0 * x.p))});
}

double classical_invariant_drift(const ClassicalState& x) {
  return std::max({std::abs(x.cn * x.cn + x.sn * x.sn - 1.0),
                   std::abs(x.dn * x.dn + x.k * x.k * x.sn * x.sn - 1.0)});
}

SegmentResult<FlowState> integrate_segment(const FlowState& state,
                                           const Modulus& m, cplx target,
                                           double tol) {
  return integrate(Sig6Ops{m}, state, target, tol);
}

SegmentResult<ClassicalState> integrate_segment(const ClassicalState& state,
                                                cplx target, double tol) {
  return integrate(ClassicalOps{state.k, state.l}, state, target, tol);
}

PathResult<FlowState> integrate_path(const FlowState& state0,
                                     const PathSpec& path, const Modulus& m,
                                     double tol) {
  return integrate_along(Sig6Ops{m}, state0, path, tol);
}

PathResult<ClassicalState> integrate_path(const ClassicalState& state0,
                                          const PathSpec& path, double tol) {
  return integrate_along(ClassicalOps{state0.k, state0.l}, state0, path, tol);
}

QuarterPeriods classical_quarter_periods(double k) {
  if (!(k > 0.0 && k < 1.0)) {
    throw DomainError("classical modulus must lie in (0,1)");
  }
  const double l = std::sqrt((1.0 - k) * (1.0 + k));
  const double half_pi = std::numbers::pi / 2.0;
  return {half_pi / agm(1.0, l), half_pi / agm(1.0, k)};
}

FlowState sig6_state_at(const Modulus& m, cplx u, double tol) {
  if (u.imag() == 0.0) return state_from_frame(frame_at(m, u.real()));
  return integrate_segment(origin_state(), m, u, tol).state;
}

ClassicalState classical_state_at(double k, cplx u, double tol) {
  return integrate_segment(classical_origin(k), u, tol).state;
}

MonodromyReport sig6_report(const PathSpec& loop,
                            const PathResult<FlowState>& run,
                            const FlowState& initial) {
  const FlowState& f = run.final_state;
  const std::array<cplx, 5> a{initial.s, initial.c, initial.d, initial.p,
                              initial.sigma};
  const std::array<cplx, 5> b{f.s, f.c, f.d, f.p, f.sigma};
  const std::array<double, 5> sign{-1.0, -1.0, 1.0, 1.0, -1.0};

  MonodromyReport r{.system = FlowSystem::sig6, .loop = loop};
  r.component_names = {"s", "c", "d", "p", "sigma"};
  for (std::size_t i = 0; i < a.size(); ++i) {
    r.component_return.push_back(std::abs(b[i] - a[i]));
    r.component_half_period.push_back(std::abs(b[i] - sign[i] * a[i]));
  }
  r.return_residual = *std::ranges::max_element(r.component_return);
  r.half_period_residual = *std::ranges::max_element(r.component_half_period);
  r.delta_return_residual = std::abs(f.d / f.p - initial.d / initial.p);
  r.min_abs_p = run.min_abs_p;
  r.max_drift = run.max_drift;
  r.steps = run.steps;
  return r;
}

MonodromyReport classical_report(const PathSpec& loop,
                                 const PathResult<ClassicalState>& run,
                                 const ClassicalState& initial) {
  const ClassicalState& f = run.final_state;
  const std::array<cplx, 3> a{initial.sn, initial.cn, initial.dn};
  const std::array<cplx, 3> b{f.sn, f.cn, f.dn};
  const std::array<double, 3> sign{-1.0, -1.0, 1.0};

  MonodromyReport r{.system = FlowSystem::classical, .loop = loop};
  r.component_names = {"sn", "cn", "dn"};
  for (std::size_t i = 0; i < a.size(); ++i) {
    r.component_return.push_back(std::abs(b[i] - a[i]));
    r.component_half_period.push_back(std::abs(b[i] - sign[i] * a[i]));
  }
  r.return_residual = *std::ranges::max_element(r.component_return);
  r.half_period_residual = *std::ranges::max_element(r.component_half_period);
  r.min_abs_p = run.min_abs_p;
  r.max_drift = run.max_drift;
  r.steps = run.steps;
  return r;
}

std::vector<MonodromyReport> monodromy_scan(const Modulus& m,
                                            FlowSystem system, cplx base_u,
                                            std::span<const cplx> candidates,
                                            double tol) {
  std::vector<MonodromyReport> reports;
  reports.reserve(candidates.size());
  if (system == FlowSystem::sig6) {
    const FlowState base = sig6_state_at(m, base_u, tol);
    for (const cplx tau : candidates) {
      PathSpec loop({base_u, base_u + tau});
      reports.push_back(sig6_report(loop, integrate_path(base, loop, m, tol),
                                    base));
    }
  } else {
    const ClassicalState base = classical_state_at(m.kappa(), base_u, tol);
    for (const cplx tau : candidates) {
      PathSpec loop({base_u, base_u + tau});
      reports.push_back(
          classical_report(loop, integrate_path(base, loop, tol), base));
    }
  }
  return reports;
}

}  // namespace sig6
