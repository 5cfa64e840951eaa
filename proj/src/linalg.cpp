#include "ohmlab/linalg.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace ohmlab {

SparseMatrix incidence(const Multigraph& g) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(2 * static_cast<std::size_t>(g.num_edges()));
  for (int e = 0; e < g.num_edges(); ++e) {
    triplets.emplace_back(g.edge(e).tail, e, -1.0);
    triplets.emplace_back(g.edge(e).head, e, 1.0);
  }
  SparseMatrix b(g.num_vertices(), g.num_edges());
  b.setFromTriplets(triplets.begin(), triplets.end());
  return b;
}

SparseMatrix laplacian(const Multigraph& g) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(4 * static_cast<std::size_t>(g.num_edges()));
  for (const Edge& e : g.edges()) {
    triplets.emplace_back(e.tail, e.tail, e.weight);
    triplets.emplace_back(e.head, e.head, e.weight);
    triplets.emplace_back(e.tail, e.head, -e.weight);
    triplets.emplace_back(e.head, e.tail, -e.weight);
  }
  SparseMatrix l(g.num_vertices(), g.num_vertices());
  l.setFromTriplets(triplets.begin(), triplets.end());
  l.prune(0.0);
  return l;
}

// LaplacianSolver ----------------------------------------------------------

namespace {

void center(Vector& v) {
  if (v.size() > 0) v.array() -= v.mean();
}

}  // namespace

LaplacianSolver::LaplacianSolver(const Multigraph& g) : laplacian_(laplacian(g)) {
  const int n = g.num_vertices();
  if (!g.is_connected()) throw StructuralError("Laplacian solve requires a connected graph");
  inv_diagonal_ = Vector::Ones(n);
  double max_degree = 0.0;
  double min_weight = std::numeric_limits<double>::infinity();
  for (int v = 0; v < n; ++v) {
    double d = g.weighted_degree(v);
    if (d > 0.0) inv_diagonal_(v) = 1.0 / d;
    max_degree = std::max(max_degree, d);
  }
  for (const Edge& e : g.edges()) min_weight = std::min(min_weight, e.weight);
  if (g.num_edges() > 0) {
    // lambda_max <= 2 d_max and lambda_2 >= 4 w_min / n^2 bound the condition number.
    double kappa = 2.0 * max_degree * static_cast<double>(n) * n / (4.0 * min_weight);
    double cap = 10.0 * n * std::sqrt(kappa);
    iteration_cap_ = static_cast<long>(std::min(std::max(cap, 1e4), 1e9));
  }
}

SolveReport LaplacianSolver::solve(const Vector& b_in, double tol) const {
  const Eigen::Index n = laplacian_.rows();
  if (b_in.size() != n) {
    throw ArgumentError("right-hand side has length " + std::to_string(b_in.size()) +
                        ", expected " + std::to_string(n));
  }
  if (!(tol > 0.0)) throw ArgumentError("solver tolerance must be positive");
  const double b_raw_norm = b_in.norm();
  if (std::abs(b_in.sum()) > 10.0 * tol * b_raw_norm) {
    throw ArgumentError("right-hand side is not orthogonal to the all-ones vector");
  }
  Vector b = b_in;
  center(b);
  const double b_norm = b.norm();
  SolveReport report;
  report.solution = Vector::Zero(n);
  if (b_norm == 0.0) return report;

  const double target = 0.5 * tol * b_norm;
  Vector& x = report.solution;
  Vector r = b;
  Vector z = inv_diagonal_.cwiseProduct(r);
  center(z);
  Vector p = z;
  double rz = r.dot(z);
  Vector best = x;
  double best_residual = b_norm;
  long it = 0;
  while (it < iteration_cap_) {
    ++it;
    Vector lp = laplacian_ * p;
    double curvature = p.dot(lp);
    if (!(curvature > 0.0)) break;
    double alpha = rz / curvature;
    x.noalias() += alpha * p;
    center(x);
    r.noalias() -= alpha * lp;
    center(r);
    if (r.norm() <= target) {
      // Confirm with the true residual; restart from it if recursion drifted.
      Vector true_r = b - laplacian_ * x;
      center(true_r);
      double true_norm = true_r.norm();
      if (true_norm < best_residual) {
        best_residual = true_norm;
        best = x;
      }
      if (true_norm <= tol * b_norm) {
        report.residual_norm = true_norm;
        report.iterations = static_cast<int>(it);
        return report;
      }
      r = true_r;
      z = inv_diagonal_.cwiseProduct(r);
      center(z);
      p = z;
      rz = r.dot(z);
      continue;
    }
    z = inv_diagonal_.cwiseProduct(r);
    center(z);
    double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  Vector final_r = b - laplacian_ * x;
  double final_norm = final_r.norm();
  if (final_norm <= tol * b_norm) {
    report.residual_norm = final_norm;
    report.iterations = static_cast<int>(it);
    return report;
  }
  if (final_norm < best_residual) {
    best_residual = final_norm;
    best = x;
  }
  throw ConvergenceError("Laplacian solve stopped after " + std::to_string(it) +
                             " iterations with relative residual " +
                             std::to_string(best_residual / b_norm),
                         best, best_residual);
}

SolveReport solve_laplacian(const Multigraph& g, const Vector& b, double tol) {
  return LaplacianSolver(g).solve(b, tol);
}

// Coordinate text ----------------------------------------------------------

void write_coordinate(std::ostream& out, const SparseMatrix& m) {
  out << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
  std::ostringstream line;
  line.precision(17);
  for (Eigen::Index k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
      line.str("");
      line << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
      out << line.str();
    }
  }
}

SparseMatrix read_coordinate(std::istream& in) {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  Eigen::Index nnz = 0;
  if (!(in >> rows >> cols >> nnz) || rows < 0 || cols < 0 || nnz < 0) {
    throw ArgumentError("coordinate matrix: expected 'rows cols nnz' header");
  }
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(nnz));
  for (Eigen::Index i = 0; i < nnz; ++i) {
    Eigen::Index r = 0;
    Eigen::Index c = 0;
    double v = 0.0;
    if (!(in >> r >> c >> v)) throw ArgumentError("coordinate matrix: truncated triplet list");
    if (r < 0 || r >= rows || c < 0 || c >= cols) throw ArgumentError("coordinate matrix: index out of range");
    triplets.emplace_back(r, c, v);
  }
  SparseMatrix m(rows, cols);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.prune(0.0);
  return m;
}

}  // namespace ohmlab
