#include "ohmlab/routing.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <utility>

#include "ohmlab/errors.hpp"
#include "ohmlab/parallel.hpp"

namespace ohmlab {

Demand::Demand(Vector values) : values_(std::move(values)) {
  double scale = values_.lpNorm<1>();
  if (std::abs(values_.sum()) > 1e-12 * scale) {
    throw ArgumentError("demand vector does not sum to zero");
  }
}

Demand Demand::pair(int n, Vertex a, Vertex b) {
  if (a < 0 || a >= n || b < 0 || b >= n) throw ArgumentError("demand endpoint out of range");
  Vector v = Vector::Zero(n);
  v(a) += 1.0;
  v(b) -= 1.0;
  return Demand(std::move(v));
}

Demand Demand::across_edge(const Multigraph& g, int e) {
  return pair(g.num_vertices(), g.edge(e).tail, g.edge(e).head);
}

VoltageProfile electrical_voltages(const LaplacianSolver& solver, const Demand& chi, double tol) {
  return {solver.solve(chi.values(), tol).solution, 0.0, false};
}

Flow flow_from_voltages(const Multigraph& g, const Vector& v) {
  Flow f{Vector(g.num_edges())};
  for (int e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    f.values(e) = ed.weight * (v(ed.head) - v(ed.tail));
  }
  return f;
}

Flow route_electrical(const Multigraph& g, const Demand& chi, double tol) {
  return route_electrical(g, LaplacianSolver(g), chi, tol);
}

Flow route_electrical(const Multigraph& g, const LaplacianSolver& solver, const Demand& chi, double tol) {
  return flow_from_voltages(g, electrical_voltages(solver, chi, tol).values);
}

LinearOperator electrical_routing_operator(const Multigraph& g, double tol) {
  auto solver = std::make_shared<const LaplacianSolver>(g);
  auto graph = std::make_shared<const Multigraph>(g);
  return {g.num_edges(), g.num_vertices(), [solver, graph, tol](const Vector& chi) {
            return flow_from_voltages(*graph, solver->solve(chi, tol).solution).values;
          }};
}

double effective_resistance(const Multigraph& g, Vertex s, Vertex t, double tol) {
  if (s == t) return 0.0;
  Demand chi = Demand::pair(g.num_vertices(), s, t);
  Vector v = LaplacianSolver(g).solve(chi.values(), tol).solution;
  return chi.values().dot(v);
}

double congestion(const Multigraph& g, std::span<const Flow> flows, double p) {
  if (!(p >= 1.0)) throw ArgumentError("congestion needs p >= 1");
  Vector load = Vector::Zero(g.num_edges());
  for (const Flow& f : flows) {
    if (f.values.size() != g.num_edges()) throw ArgumentError("flow length does not match edge count");
    load += f.values.cwiseAbs();
  }
  for (int e = 0; e < g.num_edges(); ++e) load(e) /= g.edge(e).weight;
  if (load.size() == 0) return 0.0;
  if (std::isinf(p)) return load.maxCoeff();
  if (p == 1.0) return load.sum();
  return std::pow(load.array().pow(p).sum(), 1.0 / p);
}

double flow_energy(const Multigraph& g, const Flow& f) {
  double energy = 0.0;
  for (int e = 0; e < g.num_edges(); ++e) energy += f.values(e) * f.values(e) / g.edge(e).weight;
  return energy;
}

double voltage_energy(const SparseMatrix& laplacian, const Vector& v) {
  return v.dot(laplacian * v);
}

// Per-edge solves ----------------------------------------------------------

namespace {

struct PairIndex {
  std::vector<std::pair<Vertex, Vertex>> keys;  // (min, max) endpoints
  std::vector<int> key_of_edge;
};

PairIndex index_endpoint_pairs(const Multigraph& g) {
  PairIndex idx;
  std::map<std::pair<Vertex, Vertex>, int> lookup;
  idx.key_of_edge.reserve(static_cast<std::size_t>(g.num_edges()));
  for (const Edge& e : g.edges()) {
    std::pair<Vertex, Vertex> key{std::min(e.tail, e.head), std::max(e.tail, e.head)};
    auto [it, inserted] = lookup.emplace(key, static_cast<int>(idx.keys.size()));
    if (inserted) idx.keys.push_back(key);
    idx.key_of_edge.push_back(it->second);
  }
  return idx;
}

void require_connected(const Multigraph& g) {
  if (!g.is_connected()) throw StructuralError("electrical routing requires a connected graph");
}

void require_unit_weight(const Multigraph& g, const char* what) {
  if (!g.is_unit_weight()) {
    throw ContractError(std::string(what) +
                        " needs a unit-weight graph; use rho_general or weighted_to_multigraph");
  }
}

}  // namespace

EdgeFlowNorms edge_flow_l1_norms(const Multigraph& g, double tol) {
  require_connected(g);
  LaplacianSolver solver(g);
  PairIndex idx = index_endpoint_pairs(g);
  std::vector<double> key_norm(idx.keys.size());
  std::vector<double> key_residual(idx.keys.size());
  parallel_for(idx.keys.size(), [&](std::size_t k) {
    Demand chi = Demand::pair(g.num_vertices(), idx.keys[k].first, idx.keys[k].second);
    SolveReport rep = solver.solve(chi.values(), tol);
    key_norm[k] = flow_from_voltages(g, rep.solution).values.lpNorm<1>();
    key_residual[k] = rep.residual_norm / chi.values().norm();
  });
  EdgeFlowNorms out;
  out.solves = static_cast<int>(idx.keys.size());
  out.l1.reserve(static_cast<std::size_t>(g.num_edges()));
  for (int key : idx.key_of_edge) out.l1.push_back(key_norm[static_cast<std::size_t>(key)]);
  for (double r : key_residual) out.max_relative_residual = std::max(out.max_relative_residual, r);
  return out;
}

double rho_infinity(const Multigraph& g, double tol) {
  EdgeFlowNorms norms = edge_flow_l1_norms(g, tol);
  return norms.l1.empty() ? 0.0 : *std::max_element(norms.l1.begin(), norms.l1.end());
}

Eigen::MatrixXd projection_matrix(const Multigraph& g, double tol, const RoutingLimits& limits) {
  require_connected(g);
  const int m = g.num_edges();
  if (m > limits.max_dense_edges) {
    throw SizeError("dense projection matrix needs m <= " + std::to_string(limits.max_dense_edges) +
                    ", got m = " + std::to_string(m));
  }
  LaplacianSolver solver(g);
  PairIndex idx = index_endpoint_pairs(g);
  // Potentials for chi = 1_min - 1_max of each distinct endpoint pair.
  std::vector<Vector> potentials(idx.keys.size());
  parallel_for(idx.keys.size(), [&](std::size_t k) {
    Demand chi = Demand::pair(g.num_vertices(), idx.keys[k].first, idx.keys[k].second);
    potentials[k] = solver.solve(chi.values(), tol).solution;
  });
  Eigen::MatrixXd pi(m, m);
  for (int e = 0; e < m; ++e) {
    const Edge& ed = g.edge(e);
    // Column e is B^T L^+ B_e with B_e = 1_head - 1_tail.
    double sign = ed.tail < ed.head ? -1.0 : 1.0;
    const Vector& x = potentials[static_cast<std::size_t>(idx.key_of_edge[static_cast<std::size_t>(e)])];
    for (int f = 0; f < m; ++f) {
      const Edge& fd = g.edge(f);
      pi(f, e) = sign * (x(fd.head) - x(fd.tail));
    }
  }
  return pi;
}

double rho_from_projection(const Eigen::MatrixXd& projection, double p, const PowerIterationOptions& opt) {
  Eigen::MatrixXd magnitude = projection.cwiseAbs();
  return induced_norm_p_nonneg(magnitude, p, opt);
}

double rho_p(const Multigraph& g, double p, double tol, const RoutingLimits& limits) {
  if (!(p >= 1.0)) throw ArgumentError("rho_p needs p in [1, inf]");
  require_unit_weight(g, "rho_p");
  return rho_from_projection(projection_matrix(g, tol, limits), p);
}

double rho_general(const Multigraph& g, const LinearOperator& a, double p, double tol,
                   const RoutingLimits& limits) {
  if (!(p >= 1.0)) throw ArgumentError("rho_general needs p in [1, inf]");
  const int m = g.num_edges();
  const int n = g.num_vertices();
  if (a.rows != m || a.cols != n) throw ArgumentError("routing operator must be E x V");
  if (m > limits.max_dense_edges) {
    throw SizeError("rho_general materializes an m x m matrix; m = " + std::to_string(m) +
                    " exceeds " + std::to_string(limits.max_dense_edges));
  }
  SparseMatrix b = incidence(g);
  Eigen::MatrixXd scaled(m, m);
  const int stride = std::max(1, m / 64);
  for (int e = 0; e < m; ++e) {
    const Edge& ed = g.edge(e);
    Vector column = b.col(e);  // B_e, itself a unit demand
    Vector flow = a.apply(column);
    if (flow.size() != m) throw ArgumentError("routing operator returned a vector of the wrong length");
    if (e % stride == 0) {
      double mismatch = (b * flow - column).norm();
      if (mismatch > std::max(10.0 * tol, 1e-12) * column.norm()) {
        throw ContractError("operator does not route the demand of edge " + std::to_string(e) +
                            " (residual " + std::to_string(mismatch) + ")");
      }
    }
    for (int f = 0; f < m; ++f) scaled(f, e) = std::abs(flow(f) / g.edge(f).weight * ed.weight);
  }
  return induced_norm_p_nonneg(scaled, p);
}

double localization(const Multigraph& g, double tol) {
  require_unit_weight(g, "localization");
  EdgeFlowNorms norms = edge_flow_l1_norms(g, tol);
  if (norms.l1.empty()) return 0.0;
  double total = 0.0;
  for (double v : norms.l1) total += v;
  return total / static_cast<double>(norms.l1.size());
}

double upper_bound_formula(double volume, double phi) {
  if (!(phi > 0.0)) return kInfinity;
  return 3.0 * std::log(volume) / phi;
}

CompetitiveReport competitive_report(const Multigraph& g, const std::vector<double>& p_list, double tol,
                                     const std::string& graph_id, const RoutingLimits& limits,
                                     const GraphLimits& graph_limits) {
  require_connected(g);
  CompetitiveReport rep;
  rep.graph_id = graph_id;
  rep.n = g.num_vertices();
  rep.m = g.num_edges();
  rep.volume = 2.0 * g.total_weight();
  rep.solver_tol = tol;
  if (rep.n <= graph_limits.max_exact_conductance_vertices) {
    ConductanceCertificate exact = conductance_exact(g, graph_limits);
    rep.phi_lower = rep.phi_upper = exact.phi;
    rep.phi_exact = true;
  } else {
    ConductanceBounds bounds = conductance_bounds(g, graph_limits);
    rep.phi_lower = bounds.lower.phi;
    rep.phi_upper = bounds.upper.phi;
  }
  rep.bound = upper_bound_formula(rep.volume, rep.phi_lower);

  EdgeFlowNorms norms = edge_flow_l1_norms(g, tol);
  double rho_inf = *std::max_element(norms.l1.begin(), norms.l1.end());
  rep.max_relative_residual = norms.max_relative_residual;
  rep.error_bound = rep.m * tol * std::sqrt(2.0);
  const bool unit = g.is_unit_weight();
  if (unit) {
    double total = 0.0;
    for (double v : norms.l1) total += v;
    rep.localization = total / static_cast<double>(norms.l1.size());
  }

  const bool dense_ok = rep.m <= limits.max_dense_edges;
  Eigen::MatrixXd projection;
  LinearOperator routing;
  for (double p : p_list) {
    if (!(p >= 1.0)) throw ArgumentError("p grid values must lie in [1, inf]");
    double value = std::numeric_limits<double>::quiet_NaN();
    if (std::isinf(p)) {
      value = rho_inf;
    } else if (unit && p == 1.0 && !dense_ok) {
      value = rho_inf;  // abs(Pi) is symmetric
    } else if (dense_ok && unit) {
      if (projection.size() == 0) projection = projection_matrix(g, tol, limits);
      value = rho_from_projection(projection, p);
    } else if (dense_ok) {
      if (!routing.apply) routing = electrical_routing_operator(g, tol);
      value = rho_general(g, routing, p, tol, limits);
    }
    if (!std::isnan(value) && value < 1.0 - 1e-6) {
      throw ContractError("competitive ratio " + std::to_string(value) + " below 1 for p = " +
                          std::to_string(p));
    }
    rep.rho[p] = value;
  }
  return rep;
}

}  // namespace ohmlab
