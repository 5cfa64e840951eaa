#include "ohmlab/sparsify.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <queue>
#include <random>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include "ohmlab/errors.hpp"

namespace ohmlab {

// Partition ----------------------------------------------------------------

Partition::Partition(int n, std::vector<Vertex> terminals, std::vector<Vertex> eliminated)
    : n_(n), c_(std::move(terminals)), f_(std::move(eliminated)) {
  std::sort(c_.begin(), c_.end());
  std::sort(f_.begin(), f_.end());
  if (c_.empty()) throw ArgumentError("partition needs at least one terminal");
  std::vector<int> seen(static_cast<std::size_t>(n), 0);
  for (const auto* side : {&c_, &f_}) {
    for (Vertex v : *side) {
      if (v < 0 || v >= n) throw ArgumentError("partition vertex " + std::to_string(v) + " out of range");
      if (seen[static_cast<std::size_t>(v)]++) {
        throw ArgumentError("vertex " + std::to_string(v) + " appears twice in the partition");
      }
    }
  }
  if (static_cast<int>(c_.size() + f_.size()) != n) throw ArgumentError("partition does not cover every vertex");
}

Partition Partition::from_terminals(int n, std::vector<Vertex> terminals) {
  VertexSet c(n, terminals);
  return Partition(n, std::move(terminals), c.complement().members());
}

Vector Partition::assemble(const Vector& on_terminals, const Vector& on_eliminated) const {
  if (on_terminals.size() != static_cast<Eigen::Index>(c_.size()) ||
      on_eliminated.size() != static_cast<Eigen::Index>(f_.size())) {
    throw ArgumentError("vector sizes do not match the partition");
  }
  Vector full(n_);
  for (std::size_t i = 0; i < c_.size(); ++i) full(c_[i]) = on_terminals(static_cast<Eigen::Index>(i));
  for (std::size_t i = 0; i < f_.size(); ++i) full(f_[i]) = on_eliminated(static_cast<Eigen::Index>(i));
  return full;
}

namespace {

std::vector<Vertex> parse_ids(const std::string& rest, int line_no) {
  std::istringstream in(rest);
  std::vector<Vertex> ids;
  std::string token;
  while (in >> token) {
    try {
      std::size_t used = 0;
      int v = std::stoi(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
      ids.push_back(v);
    } catch (const std::exception&) {
      throw ArgumentError("partition line " + std::to_string(line_no) + ": bad vertex id '" + token + "'");
    }
  }
  return ids;
}

}  // namespace

Partition read_partition(std::istream& in, int n) {
  std::string line;
  int line_no = 0;
  std::vector<Vertex> c;
  std::vector<Vertex> f;
  bool have_c = false;
  bool have_f = false;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    if (line.compare(first, 2, "C:") == 0) {
      c = parse_ids(line.substr(first + 2), line_no);
      have_c = true;
    } else if (line.compare(first, 2, "F:") == 0) {
      f = parse_ids(line.substr(first + 2), line_no);
      have_f = true;
    } else {
      throw ArgumentError("partition line " + std::to_string(line_no) + ": expected 'C:' or 'F:'");
    }
  }
  if (!have_c || !have_f) throw ArgumentError("partition file needs both a 'C:' and an 'F:' line");
  return Partition(n, std::move(c), std::move(f));
}

Partition read_partition_file(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open partition file '" + path + "'");
  return read_partition(in, n);
}

void write_partition(std::ostream& out, const Partition& part) {
  out << "C:";
  for (Vertex v : part.terminals()) out << ' ' << v;
  out << "\nF:";
  for (Vertex v : part.eliminated()) out << ' ' << v;
  out << '\n';
}

// Elimination --------------------------------------------------------------

namespace {

struct Blocks {
  SparseMatrix cc;
  SparseMatrix cf;
  SparseMatrix ff;
};

void require_graph_matches(const Multigraph& g, const Partition& part) {
  if (part.universe() != g.num_vertices()) throw ArgumentError("partition size does not match the graph");
}

// Every component of G[F] must touch C, otherwise L_FF is singular.
void require_eliminable(const Multigraph& g, const Partition& part) {
  VertexSet in_f = part.eliminated_set();
  VertexSet visited(g.num_vertices());
  for (Vertex root : part.eliminated()) {
    if (visited.contains(root)) continue;
    std::vector<Vertex> component{root};
    std::vector<Vertex> stack{root};
    visited.insert(root);
    bool touches_c = false;
    while (!stack.empty()) {
      Vertex u = stack.back();
      stack.pop_back();
      for (int e : g.incidence_lists()[static_cast<std::size_t>(u)]) {
        Vertex w = g.other_end(e, u);
        if (!in_f.contains(w)) {
          touches_c = true;
        } else if (!visited.contains(w)) {
          visited.insert(w);
          component.push_back(w);
          stack.push_back(w);
        }
      }
    }
    if (!touches_c) {
      std::sort(component.begin(), component.end());
      std::string ids;
      for (Vertex v : component) ids += (ids.empty() ? "" : " ") + std::to_string(v);
      throw StructuralError("L_FF is singular: eliminated component {" + ids + "} has no edge to C");
    }
  }
}

Blocks split_laplacian(const Multigraph& g, const Partition& part) {
  const int n = g.num_vertices();
  std::vector<int> pos(static_cast<std::size_t>(n));
  std::vector<char> is_c(static_cast<std::size_t>(n), 0);
  for (std::size_t i = 0; i < part.terminals().size(); ++i) {
    pos[static_cast<std::size_t>(part.terminals()[i])] = static_cast<int>(i);
    is_c[static_cast<std::size_t>(part.terminals()[i])] = 1;
  }
  for (std::size_t i = 0; i < part.eliminated().size(); ++i) {
    pos[static_cast<std::size_t>(part.eliminated()[i])] = static_cast<int>(i);
  }
  const auto nc = static_cast<Eigen::Index>(part.terminals().size());
  const auto nf = static_cast<Eigen::Index>(part.eliminated().size());
  std::vector<Eigen::Triplet<double>> cc;
  std::vector<Eigen::Triplet<double>> cf;
  std::vector<Eigen::Triplet<double>> ff;
  SparseMatrix l = laplacian(g);
  for (Eigen::Index k = 0; k < l.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(l, k); it; ++it) {
      auto r = static_cast<std::size_t>(it.row());
      auto c = static_cast<std::size_t>(it.col());
      if (is_c[r] && is_c[c]) {
        cc.emplace_back(pos[r], pos[c], it.value());
      } else if (is_c[r]) {
        cf.emplace_back(pos[r], pos[c], it.value());
      } else if (!is_c[c]) {
        ff.emplace_back(pos[r], pos[c], it.value());
      }
    }
  }
  Blocks b{SparseMatrix(nc, nc), SparseMatrix(nc, nf), SparseMatrix(nf, nf)};
  b.cc.setFromTriplets(cc.begin(), cc.end());
  b.cf.setFromTriplets(cf.begin(), cf.end());
  b.ff.setFromTriplets(ff.begin(), ff.end());
  return b;
}

// L_FF^-1 applied to the columns of rhs.
Eigen::MatrixXd solve_ff(const SparseMatrix& ff, const Eigen::MatrixXd& rhs) {
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(ff);
  if (ldlt.info() != Eigen::Success) throw StructuralError("L_FF factorization failed");
  Eigen::MatrixXd out = ldlt.solve(rhs);
  if (ldlt.info() != Eigen::Success) throw StructuralError("L_FF solve failed");
  return out;
}

void require_box(const Vector& x, const char* what) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!(x(i) >= 0.0 && x(i) <= 1.0)) throw ArgumentError(std::string(what) + " must lie in [0,1]");
  }
}

void require_binary(const Vector& x, const char* what) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) != 0.0 && x(i) != 1.0) throw ArgumentError(std::string(what) + " must be 0/1");
  }
}

}  // namespace

SparseMatrix schur_complement(const Multigraph& g, const Partition& part) {
  require_graph_matches(g, part);
  if (part.eliminated().empty()) return laplacian(g);
  require_eliminable(g, part);
  Blocks b = split_laplacian(g, part);
  Eigen::MatrixXd fc = Eigen::MatrixXd(b.cf.transpose());
  Eigen::MatrixXd reduced = Eigen::MatrixXd(b.cc) - b.cf * solve_ff(b.ff, fc);
  double scale = reduced.cwiseAbs().maxCoeff();
  SparseMatrix out = reduced.sparseView();
  out.prune(1e-14 * scale, 1.0);
  return out;
}

std::vector<WeightedPair> laplacian_edges(const SparseMatrix& l, double drop_below) {
  std::vector<WeightedPair> out;
  for (Eigen::Index k = 0; k < l.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(l, k); it; ++it) {
      if (it.row() < it.col() && -it.value() > drop_below) {
        out.push_back({static_cast<int>(it.row()), static_cast<int>(it.col()), -it.value()});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const WeightedPair& p, const WeightedPair& q) {
    return p.a != q.a ? p.a < q.a : p.b < q.b;
  });
  return out;
}

Vector harmonic_extension(const Multigraph& g, const Partition& part, const Vector& x) {
  require_graph_matches(g, part);
  if (x.size() != static_cast<Eigen::Index>(part.terminals().size())) {
    throw ArgumentError("boundary vector length does not match the terminal count");
  }
  require_box(x, "boundary values");
  if (part.eliminated().empty()) return Vector(0);
  require_eliminable(g, part);
  Blocks b = split_laplacian(g, part);
  Vector rhs = -(b.cf.transpose() * x);
  Vector y = solve_ff(b.ff, rhs);
  constexpr double kMargin = 1e-10;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y(i) < -kMargin || y(i) > 1.0 + kMargin) {
      throw ContractError("harmonic extension left [0,1] at vertex " +
                          std::to_string(part.eliminated()[static_cast<std::size_t>(i)]));
    }
  }
  return cap_to_unit_box(y);
}

Vector cap_to_unit_box(const Vector& y) { return y.cwiseMax(0.0).cwiseMin(1.0); }

double l1_objective(const Multigraph& g, const Partition& part, const Vector& x, const Vector& y) {
  Vector full = part.assemble(x, y);
  double total = 0.0;
  for (const Edge& e : g.edges()) total += e.weight * std::abs(full(e.head) - full(e.tail));
  return total;
}

double energy_objective(const Multigraph& g, const Partition& part, const Vector& x, const Vector& y) {
  Vector full = part.assemble(x, y);
  double total = 0.0;
  for (const Edge& e : g.edges()) {
    double d = full(e.head) - full(e.tail);
    total += e.weight * d * d;
  }
  return total;
}

// Minimum cut --------------------------------------------------------------

namespace {

// Dinic's algorithm on real capacities.
class MaxFlow {
 public:
  explicit MaxFlow(int nodes) : adj_(static_cast<std::size_t>(nodes)) {}

  void add_arc(int from, int to, double cap) {
    adj_[static_cast<std::size_t>(from)].push_back(static_cast<int>(arcs_.size()));
    arcs_.push_back({to, cap});
    adj_[static_cast<std::size_t>(to)].push_back(static_cast<int>(arcs_.size()));
    arcs_.push_back({from, 0.0});
  }

  double run(int s, int t, double eps) {
    eps_ = eps;
    double total = 0.0;
    while (levels(s, t)) {
      next_.assign(adj_.size(), 0);
      for (;;) {
        double pushed = augment(s, t, std::numeric_limits<double>::infinity());
        if (pushed <= eps_) break;
        total += pushed;
      }
    }
    return total;
  }

  /// Nodes reachable from s in the residual graph.
  std::vector<char> source_side(int s) const {
    std::vector<char> seen(adj_.size(), 0);
    std::vector<int> stack{s};
    seen[static_cast<std::size_t>(s)] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int id : adj_[static_cast<std::size_t>(u)]) {
        const Arc& a = arcs_[static_cast<std::size_t>(id)];
        if (a.cap > eps_ && !seen[static_cast<std::size_t>(a.to)]) {
          seen[static_cast<std::size_t>(a.to)] = 1;
          stack.push_back(a.to);
        }
      }
    }
    return seen;
  }

 private:
  struct Arc {
    int to;
    double cap;
  };

  bool levels(int s, int t) {
    level_.assign(adj_.size(), -1);
    std::queue<int> q;
    level_[static_cast<std::size_t>(s)] = 0;
    q.push(s);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int id : adj_[static_cast<std::size_t>(u)]) {
        const Arc& a = arcs_[static_cast<std::size_t>(id)];
        if (a.cap > eps_ && level_[static_cast<std::size_t>(a.to)] < 0) {
          level_[static_cast<std::size_t>(a.to)] = level_[static_cast<std::size_t>(u)] + 1;
          q.push(a.to);
        }
      }
    }
    return level_[static_cast<std::size_t>(t)] >= 0;
  }

  double augment(int u, int t, double limit) {
    if (u == t) return limit;
    auto& i = next_[static_cast<std::size_t>(u)];
    const auto& out = adj_[static_cast<std::size_t>(u)];
    for (; i < out.size(); ++i) {
      int id = out[i];
      Arc& a = arcs_[static_cast<std::size_t>(id)];
      if (a.cap > eps_ && level_[static_cast<std::size_t>(a.to)] == level_[static_cast<std::size_t>(u)] + 1) {
        double got = augment(a.to, t, std::min(limit, a.cap));
        if (got > eps_) {
          a.cap -= got;
          arcs_[static_cast<std::size_t>(id ^ 1)].cap += got;
          return got;
        }
      }
    }
    return 0.0;
  }

  std::vector<std::vector<int>> adj_;
  std::vector<Arc> arcs_;
  std::vector<int> level_;
  std::vector<std::size_t> next_;
  double eps_ = 0.0;
};

}  // namespace

L1Extension l1_extension_min(const Multigraph& g, const Partition& part, const Vector& x) {
  require_graph_matches(g, part);
  if (x.size() != static_cast<Eigen::Index>(part.terminals().size())) {
    throw ArgumentError("boundary vector length does not match the terminal count");
  }
  require_binary(x, "boundary values");
  const auto nf = static_cast<Eigen::Index>(part.eliminated().size());
  L1Extension out;
  if (x.minCoeff() == x.maxCoeff()) {
    out.y = Vector::Constant(nf, x(0));
    out.value = l1_objective(g, part, x, out.y);
    return out;
  }
  const int n = g.num_vertices();
  const int source = n;
  const int sink = n + 1;
  MaxFlow flow(n + 2);
  double total_weight = 0.0;
  for (const Edge& e : g.edges()) {
    flow.add_arc(e.tail, e.head, e.weight);
    flow.add_arc(e.head, e.tail, e.weight);
    total_weight += e.weight;
  }
  const double big = 2.0 * total_weight + 1.0;
  for (std::size_t i = 0; i < part.terminals().size(); ++i) {
    Vertex c = part.terminals()[i];
    if (x(static_cast<Eigen::Index>(i)) == 1.0) {
      flow.add_arc(source, c, big);
    } else {
      flow.add_arc(c, sink, big);
    }
  }
  flow.run(source, sink, 1e-12 * std::max(1.0, total_weight));
  std::vector<char> reach = flow.source_side(source);
  out.y = Vector(nf);
  for (Eigen::Index i = 0; i < nf; ++i) {
    out.y(i) = reach[static_cast<std::size_t>(part.eliminated()[static_cast<std::size_t>(i)])] ? 1.0 : 0.0;
  }
  out.value = l1_objective(g, part, x, out.y);
  return out;
}

Vector discretize_minimizer(const Multigraph& g, const Partition& part, const Vector& x, const Vector& y_in) {
  require_graph_matches(g, part);
  require_binary(x, "boundary values");
  constexpr double kSnap = 1e-9;
  for (Eigen::Index i = 0; i < y_in.size(); ++i) {
    if (!(y_in(i) >= -kSnap && y_in(i) <= 1.0 + kSnap)) throw ArgumentError("fractional minimizer must lie in [0,1]");
  }
  Vector y = cap_to_unit_box(y_in);
  const double base = l1_objective(g, part, x, y);
  const double allowed = base + 1e-6 * base + 1e-12;
  for (Eigen::Index iter = 0; iter <= y.size(); ++iter) {
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      if (y(i) <= kSnap) y(i) = 0.0;
      if (y(i) >= 1.0 - kSnap) y(i) = 1.0;
    }
    double level = 2.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      if (y(i) > 0.0 && y(i) < 1.0) level = std::min(level, y(i));
    }
    if (level > 1.0) return y;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      if (std::abs(y(i) - level) <= kSnap) y(i) = 0.0;
    }
    double now = l1_objective(g, part, x, y);
    if (now > allowed) {
      throw ContractError("objective rose from " + std::to_string(base) + " to " + std::to_string(now) +
                          " when lowering level " + std::to_string(level) + "; input was not a minimizer");
    }
  }
  return y;
}

// Threshold rounding -------------------------------------------------------

VertexSet random_threshold_cut(const Vector& x, double t) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!(x(i) >= 0.0 && x(i) <= 1.0)) throw ContractError("threshold rounding needs x in [0,1]");
  }
  VertexSet s(static_cast<int>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) > t) s.insert(static_cast<Vertex>(i));
  }
  return s;
}

ExpectedCut expected_cut_l1(const Multigraph& g, const Vector& x) {
  if (x.size() != g.num_vertices()) throw ArgumentError("x must be vertex-indexed");
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!(x(i) >= 0.0 && x(i) <= 1.0)) throw ContractError("threshold rounding needs x in [0,1]");
  }
  ExpectedCut out;
  for (const Edge& e : g.edges()) out.closed_form += e.weight * std::abs(x(e.head) - x(e.tail));
  std::vector<double> points(x.data(), x.data() + x.size());
  points.push_back(0.0);
  points.push_back(1.0);
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    double mid = 0.5 * (points[i] + points[i + 1]);
    out.integrated += cut_weight(g, random_threshold_cut(x, mid)) * (points[i + 1] - points[i]);
  }
  return out;
}

MonteCarloEstimate monte_carlo_cut_l1(const Multigraph& g, const Vector& x, int samples, std::uint64_t seed) {
  if (samples < 2) throw ArgumentError("Monte Carlo estimate needs at least two samples");
  std::mt19937_64 rng(seed);
  double mean = 0.0;
  double m2 = 0.0;
  for (int i = 0; i < samples; ++i) {
    double t = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    double value = cut_weight(g, random_threshold_cut(x, t));
    double d = value - mean;
    mean += d / (i + 1);
    m2 += d * (value - mean);
  }
  double variance = m2 / (samples - 1);
  return {mean, std::sqrt(variance / samples), samples};
}

}  // namespace ohmlab
