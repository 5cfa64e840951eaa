#pragma once

#include <iosfwd>
#include <vector>

#include "ohmlab/graph.hpp"
#include "ohmlab/linalg.hpp"
#include "ohmlab/routing.hpp"

namespace ohmlab {

/// Voltages of one demand, re-oriented along the flow and centered so that
/// the fractional volume at threshold 0 is half the total volume.
struct ThresholdProfile {
  VoltageProfile voltages;  // centered
  std::vector<Edge> oriented_edges;  // v(tail) <= v(head) for every edge
  std::vector<double> breakpoints;   // sorted distinct voltage values
  double center_shift = 0.0;         // subtracted from the raw voltages
  double total_volume = 0.0;

  double t_min() const { return breakpoints.front(); }
  double t_max() const { return breakpoints.back(); }
};

/// Builds the profile from already-computed raw voltages.
ThresholdProfile threshold_profile_from_voltages(const Multigraph& g, const Vector& raw_voltages);

ThresholdProfile threshold_profile(const Multigraph& g, const Demand& chi, double tol = 1e-10);
ThresholdProfile threshold_profile(const Multigraph& g, const LaplacianSolver& solver, const Demand& chi,
                                   double tol = 1e-10);

/// Same graph with voltages negated; used to run the t >= 0 checks on the
/// t <= 0 half of the profile.
ThresholdProfile mirrored(const ThresholdProfile& tp);

/// S_t = {a : v(a) >= t}.
VertexSet threshold_cut(const ThresholdProfile& tp, double t);

/// Weight of oriented edges with v(tail) < t <= v(head).
double delta(const ThresholdProfile& tp, double t);

/// vol_>=(t): per edge 2w above the edge, linear interpolation across it,
/// zero below. Zero-gap edges jump from 2w to 0 at their voltage.
double fractional_volume(const ThresholdProfile& tp, double t);
inline double fractional_volume_plus(const ThresholdProfile& tp, double t) {
  return fractional_volume(tp, t) + 1.0;
}

/// d/dt vol+_>=(t) = -sum over crossing edges of 2w / (v(head) - v(tail)).
/// Exact away from breakpoints; at a breakpoint this is the left derivative.
double dvolplus_dt(const ThresholdProfile& tp, double t);

/// sum over crossing edges of w (v(head) - v(tail)).
double crossing_flow(const ThresholdProfile& tp, double t);

struct IntegralIdentity {
  double lhs = 0.0;  // sum_e w |v(a) - v(b)|
  double rhs = 0.0;  // integral of delta over [t_min, t_max]
  double abs_gap = 0.0;
};

/// rhs is evaluated exactly: delta is constant between breakpoints.
IntegralIdentity check_integral_identity(const ThresholdProfile& tp);

/// `samples` thresholds strictly inside (t_min, t_max) that avoid breakpoints.
std::vector<double> interior_samples(const ThresholdProfile& tp, int samples, double from, double to);

/// Max |crossing flow - 1| over sampled thresholds. chi must be a unit pair
/// demand (ArgumentError otherwise).
double check_unit_flow_across_cuts(const ThresholdProfile& tp, const Demand& chi, int samples);

struct DeltaBoundViolation {
  double t = 0.0;
  bool mirrored = false;
  bool cauchy_schwarz = false;  // true: -dvol+/dt >= 2 delta^2 failed; false: delta bound failed
  double lhs = 0.0;
  double rhs = 0.0;
};

struct DeltaBoundReport {
  int samples_checked = 0;
  std::vector<DeltaBoundViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks at sampled thresholds t > 0 (and again on the mirrored profile)
///   -d/dt vol+ >= 2 delta(t)^2
///   delta(t)   <= -(3 / (2 phi)) (d/dt vol+) / vol+
/// with violations counted beyond 1e-8 relative. phi must be positive.
DeltaBoundReport check_delta_bound(const ThresholdProfile& tp, double phi, int samples);

/// CSV dump with columns t,delta,vol_geq,volplus,dvolplus_dt,crossing_flow at
/// every breakpoint and every midpoint between consecutive breakpoints.
void write_profile_csv(std::ostream& out, const ThresholdProfile& tp);

}  // namespace ohmlab
