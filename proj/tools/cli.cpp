#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "sig6/amplitude.hpp"
#include "sig6/errors.hpp"
#include "sig6/flow.hpp"
#include "sig6/verify.hpp"

namespace sig6::cli {
namespace {

using nlohmann::json;

constexpr const char* kDefaultKappaList =
    "0.1,0.3,0.5,0.70710678118654752,0.9";

/// Usage problem detected after CLI11 accepted the flags.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return std::string(s.substr(first, last - first + 1));
}

double parse_double(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty number");
  char* end = nullptr;
  const double x = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || !std::isfinite(x)) {
    throw std::invalid_argument("malformed number '" + text + "'");
  }
  return x;
}

Modulus checked_modulus(double kappa) {
  if (!(kappa > 0.0 && kappa < 1.0)) {
    throw UsageError("kappa must lie in (0,1)");
  }
  return Modulus::from_kappa(kappa);
}

void check_tol(double tol) {
  if (!(tol > 0.0)) throw UsageError("tol must be > 0");
}

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json optional_json(const std::optional<double>& x) {
  return x ? json(*x) : json(nullptr);
}

// ---------------------------------------------------------------- eval

struct EvalOptions {
  double kappa = 0.0;
  double u = 0.0;
  std::string format = "csv";
};

int cmd_eval(const EvalOptions& o, std::ostream& out) {
  const Modulus m = checked_modulus(o.kappa);
  const Frame f = frame_at(m, o.u);
  if (o.format == "json") {
    json j;
    j["u"] = f.u;
    j["phi"] = f.phi;
    j["psi"] = f.psi;
    j["s"] = f.s;
    j["c"] = f.c;
    j["d"] = f.d;
    j["delta"] = f.delta;
    j["partial"] = f.p;
    j["sigma"] = f.sigma;
    j["nabla"] = f.nabla;
    j["S"] = f.S;
    j["C"] = f.C;
    j["D"] = f.D;
    j["tn"] = optional_json(f.tn);
    j["T"] = optional_json(f.T);
    out << j.dump() << '\n';
    return kOk;
  }
  out << "u,phi,psi,s,c,d,delta,partial,sigma,nabla,S,C,D,tn,T\n";
  for (double x : {f.u, f.phi, f.psi, f.s, f.c, f.d, f.delta, f.p, f.sigma,
                   f.nabla, f.S, f.C, f.D}) {
    out << format_number(x) << ',';
  }
  // Empty fields mark the pole of tn.
  out << (f.tn ? format_number(*f.tn) : "") << ','
      << (f.T ? format_number(*f.T) : "") << '\n';
  return kOk;
}

// --------------------------------------------------------------- table

struct TableOptions {
  double kappa = 0.0;
  std::optional<double> u_min;
  std::optional<double> u_max;
  int steps = 33;
  std::string out_path;
};

void write_table(const Modulus& m, double u_min, double u_max, int steps,
                 std::ostream& os) {
  os << "u,phi,psi,s,c,d,delta,partial,sigma,nabla\n";
  for (int i = 0; i < steps; ++i) {
    const double u =
        i == steps - 1
            ? u_max
            : u_min + (u_max - u_min) * static_cast<double>(i) /
                          static_cast<double>(steps - 1);
    const Frame f = frame_at(m, u);
    const double row[] = {f.u, f.phi,   f.psi, f.s,     f.c,
                          f.d, f.delta, f.p,   f.sigma, f.nabla};
    for (std::size_t k = 0; k < std::size(row); ++k) {
      if (k) os << ',';
      os << format_number(row[k]);
    }
    os << '\n';
  }
}

int cmd_table(const TableOptions& o, std::ostream& out, std::ostream& err) {
  const Modulus m = checked_modulus(o.kappa);
  if (o.steps < 2) throw UsageError("steps must be >= 2");
  const double k6 = quarter_period(m);
  const double u_min = o.u_min.value_or(-2.0 * k6);
  const double u_max = o.u_max.value_or(2.0 * k6);
  if (!(u_min < u_max)) throw UsageError("u-min must be below u-max");

  if (o.out_path.empty()) {
    write_table(m, u_min, u_max, o.steps, out);
    return kOk;
  }
  std::ofstream file(o.out_path, std::ios::binary | std::ios::trunc);
  if (!file) {
    err << "error: cannot open '" << o.out_path << "' for writing\n";
    return kIoError;
  }
  write_table(m, u_min, u_max, o.steps, file);
  file.flush();
  if (!file) {
    err << "error: failed writing '" << o.out_path << "'\n";
    return kIoError;
  }
  return kOk;
}

// -------------------------------------------------------------- verify

struct VerifyOptions {
  std::string kappa_list = kDefaultKappaList;
  int u_count = 33;
  double tol = 1e-9;
  std::string format = "text";
};

std::vector<double> parse_kappa_list(const std::string& text) {
  std::vector<double> kappas;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    if (t.empty()) continue;
    try {
      kappas.push_back(parse_double(t));
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("kappa-list: ") + e.what());
    }
  }
  if (kappas.empty()) throw UsageError("kappa-list must not be empty");
  for (double k : kappas) checked_modulus(k);
  return kappas;
}

int cmd_verify(const VerifyOptions& o, std::ostream& out) {
  const auto kappas = parse_kappa_list(o.kappa_list);
  if (o.u_count < 2) throw UsageError("u-count must be >= 2");
  check_tol(o.tol);

  bool all_pass = true;
  json reports = json::array();
  for (double kappa : kappas) {
    const Modulus m = Modulus::from_kappa(kappa);
    const auto grid = standard_grid(m, static_cast<std::size_t>(o.u_count));
    const ResidualReport r = residual_report(m, grid, o.tol);
    all_pass = all_pass && r.pass;
    if (o.format == "json") {
      json entries = json::object();
      json argmax = json::object();
      for (const auto& e : r.entries) {
        entries[e.name] = e.max_residual;
        argmax[e.name] = e.argmax_u;
      }
      reports.push_back({{"kappa", r.kappa},
                         {"grid", r.grid},
                         {"tol", r.tol},
                         {"entries", entries},
                         {"argmax_u", argmax},
                         {"r13_skips", r.r13_skips},
                         {"pass", r.pass}});
      continue;
    }
    out << "kappa=" << format_number(r.kappa) << "  grid: " << r.grid
        << "  tol=" << r.tol << "  r13_skips=" << r.r13_skips << "  "
        << (r.pass ? "PASS" : "FAIL") << '\n';
    for (const auto& e : r.entries) {
      out << "  " << e.name << "  max=" << format_number(e.max_residual)
          << "  at u=" << format_number(e.argmax_u)
          << (e.max_residual <= o.tol ? "" : "  <-- exceeds tol") << '\n';
    }
  }
  if (o.format == "json") {
    out << json{{"reports", reports}, {"pass", all_pass}}.dump(2) << '\n';
  } else {
    out << "verify: " << (all_pass ? "PASS" : "FAIL") << '\n';
  }
  return all_pass ? kOk : kVerificationFailed;
}

// ------------------------------------------------------------- periods

int cmd_periods(double kappa, std::ostream& out) {
  const Modulus m = checked_modulus(kappa);
  const QuarterPeriods classical = classical_quarter_periods(kappa);
  out << "quantity,value\n"
      << "K6(kappa)," << format_number(quarter_period(m)) << '\n'
      << "K6(lambda)," << format_number(quarter_period(m.complementary()))
      << '\n'
      << "K(kappa)," << format_number(classical.K) << '\n'
      << "Kprime(kappa)," << format_number(classical.Kprime) << '\n';
  return kOk;
}

// ------------------------------------------------------------ continue

struct ContinueOptions {
  double kappa = 0.0;
  std::string system = "sig6";
  std::string path;
  double tol = 1e-12;
  std::string out_path;
};

json state_json(const FlowState& x) {
  return {{"u", to_json(x.u)},       {"s", to_json(x.s)},
          {"c", to_json(x.c)},       {"d", to_json(x.d)},
          {"partial", to_json(x.p)}, {"sigma", to_json(x.sigma)},
          {"delta", to_json(x.d / x.p)}};
}

json state_json(const ClassicalState& x) {
  return {{"u", to_json(x.u)},
          {"sn", to_json(x.sn)},
          {"cn", to_json(x.cn)},
          {"dn", to_json(x.dn)}};
}

template <class State>
json report_json(const ContinueOptions& o, const MonodromyReport& r,
                 const PathResult<State>& run, const State& initial) {
  json j;
  j["system"] = to_string(r.system);
  j["kappa"] = o.kappa;
  j["tol"] = o.tol;
  json path = json::array();
  for (cplx w : r.loop.waypoints()) path.push_back(to_json(w));
  j["path"] = path;
  j["path_length"] = r.loop.length();
  j["displacement"] = to_json(r.loop.waypoints().back() -
                              r.loop.waypoints().front());
  j["steps"] = r.steps;
  j["min_abs_p"] = r.min_abs_p;
  j["max_invariant_drift"] = r.max_drift;
  j["return_residual"] = r.return_residual;
  j["half_period_residual"] = r.half_period_residual;
  j["delta_return_residual"] = optional_json(r.delta_return_residual);
  json components = json::object();
  for (std::size_t i = 0; i < r.component_names.size(); ++i) {
    components[r.component_names[i]] = {
        {"return", r.component_return[i]},
        {"half_period", r.component_half_period[i]}};
  }
  j["components"] = components;
  j["initial"] = state_json(initial);
  j["final"] = state_json(run.final_state);
  json trace = json::array();
  for (const auto& w : run.trace) {
    trace.push_back({{"u", to_json(w.state.u)},
                     {"drift", w.drift},
                     {"max_drift", w.max_drift}});
  }
  j["trace"] = trace;
  return j;
}

int cmd_continue(const ContinueOptions& o, std::ostream& out,
                 std::ostream& err) {
  const Modulus m = checked_modulus(o.kappa);
  check_tol(o.tol);
  std::vector<cplx> waypoints;
  try {
    waypoints = parse_path(o.path);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("path: ") + e.what());
  }
  std::optional<PathSpec> path;
  try {
    path.emplace(std::move(waypoints));
  } catch (const DomainError& e) {
    throw UsageError(std::string("path: ") + e.what());
  }

  json report;
  if (o.system == "sig6") {
    const FlowState start = sig6_state_at(m, path->waypoints().front(), o.tol);
    const auto run = integrate_path(start, *path, m, o.tol);
    report = report_json(o, sig6_report(*path, run, start), run, start);
  } else {
    const ClassicalState start =
        classical_state_at(o.kappa, path->waypoints().front(), o.tol);
    const auto run = integrate_path(start, *path, o.tol);
    report = report_json(o, classical_report(*path, run, start), run, start);
  }

  const std::string text = report.dump(2) + "\n";
  if (o.out_path.empty()) {
    out << text;
    return kOk;
  }
  std::ofstream file(o.out_path, std::ios::binary | std::ios::trunc);
  if (!file || !(file << text) || !file.flush()) {
    err << "error: cannot write '" << o.out_path << "'\n";
    return kIoError;
  }
  return kOk;
}

std::string location(cplx z) {
  return format_number(z.real()) + (z.imag() < 0 ? "-" : "+") +
         format_number(std::abs(z.imag())) + "i";
}

}  // namespace

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

cplx parse_complex(std::string_view raw) {
  const std::string text = trim(raw);
  if (text.empty()) throw std::invalid_argument("empty waypoint");
  if (text.back() != 'i') return {parse_double(text), 0.0};

  const std::string body = text.substr(0, text.size() - 1);
  // Split at the last sign that is not a leading sign or an exponent sign.
  std::size_t split = std::string::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' &&
        body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  const std::string real_part =
      split == std::string::npos ? "" : body.substr(0, split);
  std::string imag_part =
      split == std::string::npos ? body : body.substr(split);
  double imag = 0.0;
  if (imag_part.empty() || imag_part == "+") {
    imag = 1.0;
  } else if (imag_part == "-") {
    imag = -1.0;
  } else {
    imag = parse_double(imag_part);
  }
  const double real = real_part.empty() ? 0.0 : parse_double(real_part);
  return {real, imag};
}

std::vector<cplx> parse_path(std::string_view text) {
  std::vector<cplx> points;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = text.find(',', start);
    points.push_back(parse_complex(text.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return points;
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Signature-6 analogues of the Jacobi elliptic functions"};
  app.name("sig6");
  app.require_subcommand(1);

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate the frame at one u");
  eval_cmd->add_option("--kappa", eval.kappa, "modulus in (0,1)")->required();
  eval_cmd->add_option("--u", eval.u, "real argument")->required();
  eval_cmd->add_option("--format", eval.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  TableOptions table;
  auto* table_cmd = app.add_subcommand("table", "Tabulate the frame as CSV");
  table_cmd->add_option("--kappa", table.kappa, "modulus in (0,1)")
      ->required();
  table_cmd->add_option("--u-min", table.u_min, "default -2 K6");
  table_cmd->add_option("--u-max", table.u_max, "default 2 K6");
  table_cmd->add_option("--steps", table.steps, "number of rows (>= 2)");
  table_cmd->add_option("--out", table.out_path, "output file (default stdout)");

  VerifyOptions verify;
  auto* verify_cmd =
      app.add_subcommand("verify", "Residuals of every identity on a grid");
  verify_cmd->add_option("--kappa-list", verify.kappa_list,
                         "comma-separated moduli");
  verify_cmd->add_option("--u-count", verify.u_count,
                         "grid points on [-2 K6, 2 K6]");
  verify_cmd->add_option("--tol", verify.tol, "absolute residual tolerance");
  verify_cmd->add_option("--format", verify.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  double periods_kappa = 0.0;
  auto* periods_cmd = app.add_subcommand(
      "periods", "Quarter periods K6(kappa), K6(lambda), K, K'");
  periods_cmd->add_option("--kappa", periods_kappa, "modulus in (0,1)")
      ->required();

  ContinueOptions cont;
  auto* continue_cmd = app.add_subcommand(
      "continue", "Continue a system along a path in the complex u-plane");
  continue_cmd->add_option("--kappa", cont.kappa, "modulus in (0,1)")
      ->required();
  continue_cmd->add_option("--system", cont.system, "sig6 or classical")
      ->check(CLI::IsMember({"sig6", "classical"}));
  continue_cmd
      ->add_option("--path", cont.path, "waypoints, e.g. 0.3,2.3,2.3+1.5i")
      ->required();
  continue_cmd->add_option("--tol", cont.tol, "local error tolerance");
  continue_cmd->add_option("--out", cont.out_path,
                           "output file (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*eval_cmd) return cmd_eval(eval, out);
    if (*table_cmd) return cmd_table(table, out, err);
    if (*verify_cmd) return cmd_verify(verify, out);
    if (*periods_cmd) return cmd_periods(periods_kappa, out);
    if (*continue_cmd) return cmd_continue(cont, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const FlowBreakdownError& e) {
    err << "error: " << e.what() << " (|p| = " << e.abs_p() << " at u = "
        << location(e.where()) << ")\n";
    return kSingularity;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kVerificationFailed;
  }
  return kUsage;
}

}  // namespace sig6::cli
