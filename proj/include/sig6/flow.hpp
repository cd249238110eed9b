#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sig6/amplitude.hpp"

namespace sig6 {

using cplx = std::complex<double>;

/// Flow aborts once |∂| falls to this level.
inline constexpr double kSingularityThreshold = 1e-8;

/// The signature-6 frame continued into the complex u-plane.
struct FlowState {
  cplx u{0.0};
  cplx s{0.0};
  cplx c{1.0};
  cplx d{1.0};
  cplx p{1.0};
  cplx sigma{0.0};
};

/// Derivatives of the five FlowState components with respect to u.
struct FlowTangent {
  cplx s, c, d, p, sigma;
};

/// The classical Jacobi triple sn, cn, dn of modulus k.
struct ClassicalState {
  cplx u{0.0};
  cplx sn{0.0};
  cplx cn{1.0};
  cplx dn{1.0};
  double k = 0.0;
  double l = 1.0;
};

struct ClassicalTangent {
  cplx sn, cn, dn;
};

/// Polyline in the u-plane: at least two waypoints, consecutive ones
/// distinct.
class PathSpec {
 public:
  explicit PathSpec(std::vector<cplx> waypoints);

  const std::vector<cplx>& waypoints() const { return waypoints_; }
  double length() const;
  PathSpec reversed() const;

 private:
  std::vector<cplx> waypoints_;
};

enum class FlowSystem { sig6, classical };

std::string to_string(FlowSystem system);

FlowState origin_state();
FlowState state_from_frame(const Frame& f);
ClassicalState classical_origin(double k);

/// (s', c', d', ∂', σ') = (cd/∂, -sd/∂, -κ²sc/∂, -(2/3)κcσ/∂, (2/3)κc).
/// Throws SingularityError when |∂| <= kSingularityThreshold.
FlowTangent flow_derivative(const FlowState& state, const Modulus& m);

/// (sn', cn', dn') = (cn dn, -sn dn, -k² sn cn).
ClassicalTangent classical_derivative(const ClassicalState& state);

/// Largest defect among c²+s²=1, d²+κ²s²=1, ∂²+σ²=1, 2d²-1 = 4∂³-3∂.
double quadratic_invariant_drift(const FlowState& state, const Modulus& m);

/// Largest defect among cn²+sn²=1, dn²+k²sn²=1.
double classical_invariant_drift(const ClassicalState& state);

template <class State>
struct SegmentResult {
  State state;
  std::size_t steps = 0;
  double min_abs_p = 0.0;  // +inf for the classical system
  double max_drift = 0.0;
};

/// Adaptive Dormand-Prince 5(4) along the straight segment from state.u to
/// `target`. The local error estimate per step is kept below `tol` in every
/// component; the last step lands exactly on `target`.
SegmentResult<FlowState> integrate_segment(const FlowState& state,
                                           const Modulus& m, cplx target,
                                           double tol);
SegmentResult<ClassicalState> integrate_segment(const ClassicalState& state,
                                                cplx target, double tol);

template <class State>
struct WaypointRecord {
  State state;
  double drift = 0.0;
  double max_drift = 0.0;  // running maximum over every accepted step so far
};

template <class State>
struct PathResult {
  State final_state;
  std::vector<WaypointRecord<State>> trace;  // one record per waypoint
  std::size_t steps = 0;
  double min_abs_p = 0.0;
  double max_drift = 0.0;
};

/// Integrates waypoint to waypoint. The state must sit at the first
/// waypoint.
PathResult<FlowState> integrate_path(const FlowState& state0,
                                     const PathSpec& path, const Modulus& m,
                                     double tol);
PathResult<ClassicalState> integrate_path(const ClassicalState& state0,
                                          const PathSpec& path, double tol);

struct QuarterPeriods {
  double K = 0.0;
  double Kprime = 0.0;
};

/// K = π / (2 AGM(1, l)), K' = π / (2 AGM(1, k)).
QuarterPeriods classical_quarter_periods(double k);

/// Sig6 state at an arbitrary base point: frame_at on the real axis,
/// otherwise continued from the origin along the straight segment.
FlowState sig6_state_at(const Modulus& m, cplx u, double tol);
ClassicalState classical_state_at(double k, cplx u, double tol);

/// Evidence from one translation or loop.
///
/// `component_return` compares the final state to the initial one;
/// `component_half_period` compares it to the image of the initial state
/// under the real half-period map (s, c, σ negated for sig6; sn, cn
/// negated for the classical system).
struct MonodromyReport {
  FlowSystem system = FlowSystem::sig6;
  PathSpec loop;
  std::vector<std::string> component_names{};
  std::vector<double> component_return{};
  std::vector<double> component_half_period{};
  double return_residual = 0.0;
  double half_period_residual = 0.0;
  std::optional<double> delta_return_residual{};  // sig6 only
  double min_abs_p = 0.0;
  double max_drift = 0.0;
  std::size_t steps = 0;
};

MonodromyReport sig6_report(const PathSpec& loop,
                            const PathResult<FlowState>& run,
                            const FlowState& initial);
MonodromyReport classical_report(const PathSpec& loop,
                                 const PathResult<ClassicalState>& run,
                                 const ClassicalState& initial);

/// For each translation τ integrates from base_u to base_u + τ and reports
/// the residuals against the identity and the half-period map.
std::vector<MonodromyReport> monodromy_scan(const Modulus& m,
                                            FlowSystem system, cplx base_u,
                                            std::span<const cplx> candidates,
                                            double tol);

}  // namespace sig6
