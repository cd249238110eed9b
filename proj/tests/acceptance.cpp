// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "json.hpp"
#include "sig6/amplitude.hpp"
#include "sig6/errors.hpp"
#include "sig6/flow.hpp"
#include "sig6/hyper6.hpp"
#include "sig6/verify.hpp"

using namespace sig6;
using json = nlohmann::json;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> check;
};

const std::vector<double> kKappas{0.1, 0.3, 0.5, 1.0 / std::numbers::sqrt2,
                                  0.9};

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

Outcome identity_suite() {
  double worst = 0.0;
  std::size_t skips = 0;
  bool pass = true;
  for (double kappa : kKappas) {
    const Modulus m = Modulus::from_kappa(kappa);
    const auto grid = standard_grid(m, 33);
    const ResidualReport r = residual_report(m, grid, 1e-9);
    worst = std::max(worst, r.max_residual());
    skips = std::max(skips, r.r13_skips);
    pass = pass && r.pass && r.r13_skips <= 2;
  }
  return {pass, fmt("max residual %.3g, max R13 skips per kappa %.0f", worst,
                    static_cast<double>(skips))};
}

Outcome hypergeometric() {
  double worst = 0.0;
  for (int i = 0; i <= 18; ++i) {
    const double x = 0.05 * i;
    const double a = f16_series(x).value;
    const double b = f16_closed(x).value;
    worst = std::max(worst, std::abs(a - b) / std::abs(b));
  }
  const double g1 = std::abs(f16(0.5) - std::sqrt(6.0) / 2.0);
  const double g2 =
      std::abs(f16(0.75) - 2.0 * std::cos(2.0 * std::numbers::pi / 9.0));
  const bool pass = worst <= 1e-12 && g1 <= 1e-13 && g2 <= 1e-13;
  return {pass, fmt("series/closed rel %.3g, golden error %.3g", worst,
                    std::max(g1, g2))};
}

Outcome round_trip() {
  double worst = 0.0;
  for (double kappa : kKappas) {
    const Modulus m = Modulus::from_kappa(kappa);
    for (int i = 0; i <= 120; ++i) {
      const double phi = -3.0 + 0.05 * i;
      worst = std::max(worst, std::abs(invert_phi(m, forward_u(m, phi)) - phi));
    }
  }
  return {worst <= 1e-12, fmt("max |phi error| %.3g", worst)};
}

Outcome quintic_anchor() {
  const QuinticValue v = quintic_q(0.0);
  return {v.q == 0.0 && v.dq == 9.0, fmt("q(0) = %.17g, q'(0) = %.17g", v.q, v.dq)};
}

Outcome translation_parity() {
  double translation = 0.0;
  double parity = 0.0;
  for (double kappa : kKappas) {
    const Modulus m = Modulus::from_kappa(kappa);
    const auto grid = standard_grid(m, 33);
    translation = std::max(translation, real_period_check(m, grid).max());
    for (double u : grid) {
      const Frame a = frame_at(m, u);
      const Frame r = frame_at(m, -u);
      parity = std::max({parity, std::abs(r.s + a.s), std::abs(r.c - a.c),
                         std::abs(r.d - a.d), std::abs(r.p - a.p),
                         std::abs(r.delta - a.delta),
                         std::abs(r.nabla - a.nabla)});
    }
  }
  return {translation <= 1e-10 && parity <= 1e-12,
          fmt("translation %.3g, parity %.3g", translation, parity)};
}

Outcome nonvanishing() {
  double margin_p = INFINITY;
  double margin_d = INFINITY;
  for (double kappa : kKappas) {
    const Modulus m = Modulus::from_kappa(kappa);
    const auto grid = standard_grid(m, 257);
    const NonvanishingScan s = nonvanishing_scan(m, grid);
    margin_p = std::min(margin_p, s.min_p - s.bound_p);
    margin_d = std::min(margin_d, s.min_d - s.bound_d);
  }
  return {margin_p >= -1e-12 && margin_d >= -1e-12,
          fmt("min p - bound %.3g, min d - lambda %.3g", margin_p, margin_d)};
}

Outcome flow_vs_frame() {
  double worst = 0.0;
  for (double kappa : kKappas) {
    const Modulus m = Modulus::from_kappa(kappa);
    for (double u : standard_grid(m, 33)) {
      if (u == 0.0) continue;
      const FlowState f = integrate_segment(origin_state(), m, u, 1e-12).state;
      const Frame g = frame_at(m, u);
      worst = std::max({worst, std::abs(f.s - g.s), std::abs(f.c - g.c),
                        std::abs(f.d - g.d), std::abs(f.p - g.p),
                        std::abs(f.sigma - g.sigma)});
    }
  }
  return {worst <= 1e-10, fmt("max component gap %.3g", worst)};
}

Outcome classical_baseline() {
  // Complete elliptic integral K(0.8), 50-digit reference (mpmath).
  constexpr double kK08 = 1.9953027776647293877;
  const QuarterPeriods q = classical_quarter_periods(0.8);
  const double agm_error = std::abs(q.K - kK08);

  const cplx a = 0.3;
  const std::vector<PathSpec> loops{
      PathSpec({a, a + 4.0 * q.K}),
      PathSpec({a, a + cplx(0.0, 4.0 * q.Kprime)}),
      PathSpec({a, a + 4.0 * q.K, a + cplx(4.0 * q.K, 4.0 * q.Kprime),
                a + cplx(0.0, 4.0 * q.Kprime), a})};
  double ret = 0.0;
  double drift = 0.0;
  for (const PathSpec& loop : loops) {
    const ClassicalState start = classical_state_at(0.8, loop.waypoints().front(), 1e-12);
    const auto run = integrate_path(start, loop, 1e-12);
    const MonodromyReport r = classical_report(loop, run, start);
    ret = std::max(ret, r.return_residual);
    drift = std::max(drift, r.max_drift);
  }
  const bool pass = agm_error <= 1e-13 && ret <= 1e-8 && drift <= 1e-9;
  return {pass, fmt("AGM error %.3g, loop return %.3g", agm_error, ret) +
                    fmt(", drift %.3g", drift)};
}

Outcome fd_check() {
  double worst = 0.0;
  for (double kappa : kKappas) {
    const Modulus m = Modulus::from_kappa(kappa);
    for (double u : standard_grid(m, 33)) {
      worst = std::max(worst, fd_crosscheck(m, u, 1e-6));
    }
  }
  return {worst <= 1e-6, fmt("max discrepancy %.3g", worst)};
}

struct ContinueRun {
  int code = -1;
  json report;
  std::string err;
};

ContinueRun run_continue(const std::string& path) {
  std::ostringstream out, err;
  ContinueRun r;
  r.code = cli::run({"continue", "--kappa", "0.8", "--path", path, "--tol",
                     "1e-12"},
                    out, err);
  r.err = err.str();
  if (r.code == 0) r.report = json::parse(out.str());
  return r;
}

Outcome monodromy_evidence() {
  const Modulus m = Modulus::from_kappa(0.8);
  const double k6 = quarter_period(m);
  const auto n = [](double x) { return cli::format_number(x); };
  const auto z = [&](cplx w) {
    return n(w.real()) + (w.imag() < 0 ? "-" : "+") + n(std::abs(w.imag())) + "i";
  };
  // A zero of ∂ for κ = 0.8, found by vertical continuation from the axis.
  const cplx zero{1.75252882996049, 1.6696044810678661};
  const double r = 0.3;
  const cplx base = zero.real();
  const cplx a = 0.3;
  const std::vector<std::string> paths{
      "0," + n(2.0 * k6),
      z(a) + "," + z(a + 4.0 * k6) + "," + z(a + cplx(4.0 * k6, 1.2)) + "," +
          z(a + cplx(0.0, 1.2)) + "," + z(a),
      z(a) + "," + z(a + cplx(0.0, 2.5)),
      z(base) + "," + z(zero - cplx(0, r)) + "," + z(zero + r) + "," +
          z(zero + cplx(0, r)) + "," + z(zero - r) + "," + z(zero - cplx(0, r)) +
          "," + z(base)};

  bool pass = true;
  double drift = 0.0;
  double longest = 0.0;
  std::string failure;
  for (const std::string& path : paths) {
    const ContinueRun c = run_continue(path);
    if (c.code != 0) {
      pass = false;
      failure = " [exit " + std::to_string(c.code) + ": " + c.err + "]";
      continue;
    }
    const json& j = c.report;
    const double len = j["path_length"].get<double>();
    const double d = j["max_invariant_drift"].get<double>();
    longest = std::max(longest, len);
    drift = std::max(drift, d);
    pass = pass && len <= 20.0 && d <= 1e-9 && j["min_abs_p"].get<double>() > 1e-8 &&
           j["delta_return_residual"].is_number() &&
           j["return_residual"].is_number();
  }
  return {pass, fmt("%.0f paths, longest %.4g", static_cast<double>(paths.size()),
                    longest) +
                    fmt(", max drift %.3g", drift) + failure};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "identity residuals R1-R13", identity_suite},
      {2, "hypergeometric series vs closed form", hypergeometric},
      {3, "amplitude inversion round trip", round_trip},
      {4, "quintic anchor", quintic_anchor},
      {5, "real translation and parity laws", translation_parity},
      {6, "lower bounds for p and d", nonvanishing},
      {7, "flow continuation vs frame", flow_vs_frame},
      {8, "classical baseline (AGM, period loops)", classical_baseline},
      {9, "finite-difference derivative check", fd_check},
      {10, "continue reports with bounded drift", monodromy_evidence},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::printf("%s  criterion %2d: %s | %s | %.2fs\n", o.pass ? "PASS" : "FAIL",
                c.id, c.title, o.detail.c_str(), secs);
  }
  std::printf("%d of %zu criteria passed\n",
              static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
