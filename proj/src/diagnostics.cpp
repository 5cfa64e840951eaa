#include "ohmlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "ohmlab/csv.hpp"
#include "ohmlab/errors.hpp"

namespace ohmlab {

namespace {

std::vector<Edge> orient_along(const std::vector<Edge>& edges, const Vector& v) {
  std::vector<Edge> out;
  out.reserve(edges.size());
  for (const Edge& e : edges) {
    if (v(e.tail) <= v(e.head)) {
      out.push_back(e);
    } else {
      out.push_back({e.head, e.tail, e.weight});
    }
  }
  return out;
}

std::vector<double> sorted_distinct(const Vector& v) {
  std::vector<double> b(v.data(), v.data() + v.size());
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

double edge_fractional_volume(const Edge& e, const Vector& v, double t) {
  double lo = v(e.tail);
  double hi = v(e.head);
  if (t <= lo) return 2.0 * e.weight;
  if (t <= hi) return 2.0 * e.weight * (hi - t) / (hi - lo);  // lo < t forces hi > lo
  return 0.0;
}

double fractional_volume_raw(const std::vector<Edge>& edges, const Vector& v, double t) {
  double total = 0.0;
  for (const Edge& e : edges) total += edge_fractional_volume(e, v, t);
  return total;
}

ThresholdProfile assemble(const std::vector<Edge>& edges, const Vector& raw, double total_volume, bool recenter) {
  ThresholdProfile tp;
  tp.total_volume = total_volume;
  double shift = 0.0;
  if (recenter && raw.size() > 0) {
    std::vector<Edge> oriented = orient_along(edges, raw);
    const double half = 0.5 * total_volume;
    double lo = raw.minCoeff();
    double hi = raw.maxCoeff();
    const double width = hi - lo;
    if (fractional_volume_raw(oriented, raw, lo) <= half) {
      shift = lo;
    } else {
      // Leftmost t with vol_>=(t) <= vol/2; vol_>= is nonincreasing.
      while (hi - lo > 1e-12 * width) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (fractional_volume_raw(oriented, raw, mid) > half) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      // The bracket is narrow enough to be linear; interpolate to the crossing.
      double f_lo = fractional_volume_raw(oriented, raw, lo);
      double f_hi = fractional_volume_raw(oriented, raw, hi);
      shift = hi;
      if (f_lo > f_hi && f_hi <= half) {
        double c = lo + (f_lo - half) / (f_lo - f_hi) * (hi - lo);
        if (c > lo && c <= hi) shift = c;
      }
    }
  }
  tp.center_shift = shift;
  Vector v = raw.array() - shift;
  tp.voltages = {v, shift, recenter};
  tp.oriented_edges = orient_along(edges, v);
  tp.breakpoints = sorted_distinct(v);
  return tp;
}

}  // namespace

ThresholdProfile threshold_profile_from_voltages(const Multigraph& g, const Vector& raw_voltages) {
  if (raw_voltages.size() != g.num_vertices()) throw ArgumentError("voltage vector length mismatch");
  if (g.num_vertices() == 0) throw ArgumentError("threshold profile needs a nonempty graph");
  return assemble(g.edges(), raw_voltages, 2.0 * g.total_weight(), true);
}

ThresholdProfile threshold_profile(const Multigraph& g, const Demand& chi, double tol) {
  return threshold_profile(g, LaplacianSolver(g), chi, tol);
}

ThresholdProfile threshold_profile(const Multigraph& g, const LaplacianSolver& solver, const Demand& chi,
                                   double tol) {
  return threshold_profile_from_voltages(g, electrical_voltages(solver, chi, tol).values);
}

ThresholdProfile mirrored(const ThresholdProfile& tp) {
  Vector negated = -tp.voltages.values;
  ThresholdProfile out = assemble(tp.oriented_edges, negated, tp.total_volume, false);
  out.center_shift = -tp.center_shift;
  out.voltages.offset = -tp.center_shift;
  out.voltages.centered = tp.voltages.centered;
  return out;
}

VertexSet threshold_cut(const ThresholdProfile& tp, double t) {
  const Vector& v = tp.voltages.values;
  VertexSet s(static_cast<int>(v.size()));
  for (Eigen::Index a = 0; a < v.size(); ++a) {
    if (v(a) >= t) s.insert(static_cast<Vertex>(a));
  }
  return s;
}

double delta(const ThresholdProfile& tp, double t) {
  const Vector& v = tp.voltages.values;
  double total = 0.0;
  for (const Edge& e : tp.oriented_edges) {
    if (v(e.tail) < t && t <= v(e.head)) total += e.weight;
  }
  return total;
}

double fractional_volume(const ThresholdProfile& tp, double t) {
  return fractional_volume_raw(tp.oriented_edges, tp.voltages.values, t);
}

double dvolplus_dt(const ThresholdProfile& tp, double t) {
  const Vector& v = tp.voltages.values;
  double total = 0.0;
  for (const Edge& e : tp.oriented_edges) {
    if (v(e.tail) < t && t <= v(e.head)) total += 2.0 * e.weight / (v(e.head) - v(e.tail));
  }
  return -total;
}

double crossing_flow(const ThresholdProfile& tp, double t) {
  const Vector& v = tp.voltages.values;
  double total = 0.0;
  for (const Edge& e : tp.oriented_edges) {
    if (v(e.tail) < t && t <= v(e.head)) total += e.weight * (v(e.head) - v(e.tail));
  }
  return total;
}

IntegralIdentity check_integral_identity(const ThresholdProfile& tp) {
  IntegralIdentity out;
  const Vector& v = tp.voltages.values;
  for (const Edge& e : tp.oriented_edges) out.lhs += e.weight * std::abs(v(e.head) - v(e.tail));
  const auto& b = tp.breakpoints;
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    double mid = 0.5 * (b[i] + b[i + 1]);
    out.rhs += delta(tp, mid) * (b[i + 1] - b[i]);
  }
  out.abs_gap = std::abs(out.lhs - out.rhs);
  return out;
}

std::vector<double> interior_samples(const ThresholdProfile& tp, int samples, double from, double to) {
  std::vector<double> out;
  if (samples <= 0 || !(to > from)) return out;
  const auto& b = tp.breakpoints;
  out.reserve(static_cast<std::size_t>(samples));
  for (int j = 0; j < samples; ++j) {
    double t = from + (to - from) * (j + 1) / (samples + 1.0);
    auto it = std::lower_bound(b.begin(), b.end(), t);
    if (it != b.end() && *it == t) {
      // Step off the breakpoint to the middle of a neighbouring interval.
      if (std::next(it) != b.end() && *std::next(it) <= to) {
        t = 0.5 * (*it + *std::next(it));
      } else if (it != b.begin()) {
        t = 0.5 * (*std::prev(it) + *it);
      }
    }
    if (t > from && t < to) out.push_back(t);
  }
  return out;
}

double check_unit_flow_across_cuts(const ThresholdProfile& tp, const Demand& chi, int samples) {
  if (samples < 1) throw ArgumentError("need at least one sample");
  const Vector& c = chi.values();
  int plus = 0;
  int minus = 0;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    if (c(i) == 1.0) {
      ++plus;
    } else if (c(i) == -1.0) {
      ++minus;
    } else if (c(i) != 0.0) {
      throw ArgumentError("crossing-flow check needs a unit pair demand");
    }
  }
  if (plus != 1 || minus != 1) throw ArgumentError("crossing-flow check needs a unit pair demand");
  double worst = 0.0;
  for (double t : interior_samples(tp, samples, tp.t_min(), tp.t_max())) {
    worst = std::max(worst, std::abs(crossing_flow(tp, t) - 1.0));
  }
  return worst;
}

DeltaBoundReport check_delta_bound(const ThresholdProfile& tp, double phi, int samples) {
  if (!(phi > 0.0)) throw ArgumentError("conductance bound phi must be positive");
  DeltaBoundReport report;
  constexpr double kRel = 1e-8;
  auto run = [&](const ThresholdProfile& side, bool is_mirror) {
    if (!(side.t_max() > 0.0)) return;
    for (double t : interior_samples(side, samples, 0.0, side.t_max())) {
      double d = delta(side, t);
      double volplus = fractional_volume_plus(side, t);
      double neg_derivative = -dvolplus_dt(side, t);
      ++report.samples_checked;
      double cs_rhs = 2.0 * d * d;
      if (cs_rhs - neg_derivative > kRel * std::max(neg_derivative, cs_rhs)) {
        report.violations.push_back({t, is_mirror, true, neg_derivative, cs_rhs});
      }
      double bound = 1.5 / phi * neg_derivative / volplus;
      if (d - bound > kRel * std::max(d, bound)) {
        report.violations.push_back({t, is_mirror, false, d, bound});
      }
    }
  };
  run(tp, false);
  run(mirrored(tp), true);
  return report;
}

void write_profile_csv(std::ostream& out, const ThresholdProfile& tp) {
  CsvWriter csv(out, {"t", "delta", "vol_geq", "volplus", "dvolplus_dt", "crossing_flow"});
  const auto& b = tp.breakpoints;
  auto emit = [&](double t) {
    double vol = fractional_volume(tp, t);
    csv.row({format_number(t), format_number(delta(tp, t)), format_number(vol), format_number(vol + 1.0),
             format_number(dvolplus_dt(tp, t)), format_number(crossing_flow(tp, t))});
  };
  for (std::size_t i = 0; i < b.size(); ++i) {
    emit(b[i]);
    if (i + 1 < b.size()) emit(0.5 * (b[i] + b[i + 1]));
  }
}

}  // namespace ohmlab
