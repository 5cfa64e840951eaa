#pragma once

#include <functional>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ohmlab/graph.hpp"
#include "ohmlab/linalg.hpp"

namespace ohmlab {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Vertex-indexed vector summing to zero (within 1e-12 ||chi||_1).
class Demand {
 public:
  explicit Demand(Vector values);

  /// 1_a - 1_b.
  static Demand pair(int n, Vertex a, Vertex b);
  /// Unit demand across edge e: 1_tail - 1_head.
  static Demand across_edge(const Multigraph& g, int e);

  const Vector& values() const { return values_; }

 private:
  Vector values_;
};

/// Edge-indexed flow, signed with respect to the stored edge orientation.
struct Flow {
  Vector values;
};

struct VoltageProfile {
  Vector values;
  double offset = 0.0;    // constant subtracted from the raw L^+ chi
  bool centered = false;  // false: raw, orthogonal to 1
};

/// E x V operator given by its action on vectors.
struct LinearOperator {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  std::function<Vector(const Vector&)> apply;
};

struct RoutingLimits {
  int max_dense_edges = 4000;  // cap for materializing Pi or |W^-1 A B W|
};

/// v = L^+ chi.
VoltageProfile electrical_voltages(const LaplacianSolver& solver, const Demand& chi, double tol = 1e-10);

/// f = W B^T v with v = L^+ chi, i.e. f_e = w_e (v(head) - v(tail)).
Flow flow_from_voltages(const Multigraph& g, const Vector& v);

Flow route_electrical(const Multigraph& g, const Demand& chi, double tol = 1e-10);
Flow route_electrical(const Multigraph& g, const LaplacianSolver& solver, const Demand& chi,
                      double tol = 1e-10);

/// The electrical routing A_E = W B^T L^+ as an operator.
LinearOperator electrical_routing_operator(const Multigraph& g, double tol = 1e-10);

/// chi^T L^+ chi for chi = 1_s - 1_t; zero when s == t.
double effective_resistance(const Multigraph& g, Vertex s, Vertex t, double tol = 1e-10);

/// ||W^-1 sum_i |f_i| ||_p. Flows of different commodities never cancel.
double congestion(const Multigraph& g, std::span<const Flow> flows, double p);

double flow_energy(const Multigraph& g, const Flow& f);
double voltage_energy(const SparseMatrix& laplacian, const Vector& v);

/// ||W B^T L^+ chi_e||_1 for every edge, with one Laplacian solve per
/// distinct endpoint pair.
struct EdgeFlowNorms {
  std::vector<double> l1;
  double max_relative_residual = 0.0;
  int solves = 0;
};
EdgeFlowNorms edge_flow_l1_norms(const Multigraph& g, double tol = 1e-10);

/// max_e ||W B^T L^+ chi_e||_1 via per-edge solves.
double rho_infinity(const Multigraph& g, double tol = 1e-10);

/// Dense Pi = B^T L^+ B, assembled column by column.
Eigen::MatrixXd projection_matrix(const Multigraph& g, double tol = 1e-10, const RoutingLimits& limits = {});

/// ||abs(Pi)||_{p->p}; p = 1 and p = inf are exact.
double rho_from_projection(const Eigen::MatrixXd& projection, double p,
                           const PowerIterationOptions& opt = {});

/// Competitive ratio in l_p of electrical routing on a unit-weight graph.
double rho_p(const Multigraph& g, double p, double tol = 1e-10, const RoutingLimits& limits = {});

/// ||abs(W^-1 A B W)||_{p->p} for an arbitrary oblivious routing A. The
/// routing property B A chi_e = chi_e is checked on a sample of edges.
double rho_general(const Multigraph& g, const LinearOperator& a, double p, double tol = 1e-10,
                   const RoutingLimits& limits = {});

/// (1/m) sum_e ||A_E chi_e||_1 on a unit-weight graph.
double localization(const Multigraph& g, double tol = 1e-10);

struct CompetitiveReport {
  std::string graph_id;
  int n = 0;
  int m = 0;
  double volume = 0.0;
  double phi_lower = 0.0;
  double phi_upper = 0.0;
  bool phi_exact = false;
  std::map<double, double> rho;  // keyed by p; inf for p = infinity
  double bound = 0.0;            // 3 ln(vol(V)) / phi_lower
  double localization = std::numeric_limits<double>::quiet_NaN();
  double solver_tol = 0.0;
  double max_relative_residual = 0.0;
  double error_bound = 0.0;  // m * tol * ||chi_e||_2 propagated into rho_inf
};

/// 3 ln(vol) / phi.
double upper_bound_formula(double volume, double phi);

CompetitiveReport competitive_report(const Multigraph& g, const std::vector<double>& p_list,
                                     double tol = 1e-10, const std::string& graph_id = "",
                                     const RoutingLimits& limits = {},
                                     const GraphLimits& graph_limits = {});

}  // namespace ohmlab
