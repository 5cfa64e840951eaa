#include "ohmlab/graph.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <queue>
#include <random>
#include <set>
#include <sstream>
#include <utility>

#include <Eigen/Dense>

#include "ohmlab/errors.hpp"
#include "ohmlab/parallel.hpp"

namespace ohmlab {

Multigraph::Multigraph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (n < 0) throw ArgumentError("vertex count must be nonnegative");
  degree_.assign(static_cast<std::size_t>(n), 0.0);
  incident_.assign(static_cast<std::size_t>(n), {});
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const Edge& ed = edges_[e];
    if (ed.tail < 0 || ed.tail >= n || ed.head < 0 || ed.head >= n) {
      throw ArgumentError("edge " + std::to_string(e) + " has an endpoint outside [0, " +
                          std::to_string(n) + ")");
    }
    if (ed.tail == ed.head) throw ArgumentError("edge " + std::to_string(e) + " is a self-loop");
    if (!(ed.weight >= 1.0) || !std::isfinite(ed.weight)) {
      throw ArgumentError("edge " + std::to_string(e) + " has weight below 1");
    }
    degree_[static_cast<std::size_t>(ed.tail)] += ed.weight;
    degree_[static_cast<std::size_t>(ed.head)] += ed.weight;
    incident_[static_cast<std::size_t>(ed.tail)].push_back(static_cast<int>(e));
    incident_[static_cast<std::size_t>(ed.head)].push_back(static_cast<int>(e));
  }
}

double Multigraph::total_weight() const {
  double total = 0.0;
  for (const Edge& e : edges_) total += e.weight;
  return total;
}

bool Multigraph::is_unit_weight() const {
  return std::all_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.weight == 1.0; });
}

bool Multigraph::is_connected() const {
  if (n_ <= 1) return true;
  std::vector<char> seen(static_cast<std::size_t>(n_), 0);
  std::vector<Vertex> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    Vertex u = stack.back();
    stack.pop_back();
    for (int e : incident_[static_cast<std::size_t>(u)]) {
      Vertex w = other_end(e, u);
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == n_;
}

Vertex Multigraph::other_end(int e, Vertex v) const {
  const Edge& ed = edge(e);
  return ed.tail == v ? ed.head : ed.tail;
}

// VertexSet ----------------------------------------------------------------

VertexSet::VertexSet(int n, const std::vector<Vertex>& members) : VertexSet(n) {
  for (Vertex v : members) insert(v);
}

VertexSet VertexSet::all(int n) {
  VertexSet s(n);
  std::fill(s.member_.begin(), s.member_.end(), 1);
  return s;
}

void VertexSet::insert(Vertex v) {
  if (v < 0 || v >= universe()) {
    throw ArgumentError("vertex " + std::to_string(v) + " outside [0, " +
                        std::to_string(universe()) + ")");
  }
  member_[static_cast<std::size_t>(v)] = 1;
}

int VertexSet::size() const {
  return static_cast<int>(std::count(member_.begin(), member_.end(), 1));
}

std::vector<Vertex> VertexSet::members() const {
  std::vector<Vertex> out;
  for (std::size_t v = 0; v < member_.size(); ++v) {
    if (member_[v]) out.push_back(static_cast<Vertex>(v));
  }
  return out;
}

VertexSet VertexSet::complement() const {
  VertexSet c(universe());
  for (std::size_t v = 0; v < member_.size(); ++v) c.member_[v] = member_[v] ? 0 : 1;
  return c;
}

// Measurements -------------------------------------------------------------

namespace {

void require_same_universe(const Multigraph& g, const VertexSet& s) {
  if (s.universe() != g.num_vertices()) {
    throw ArgumentError("vertex set universe " + std::to_string(s.universe()) +
                        " does not match graph size " + std::to_string(g.num_vertices()));
  }
}

VertexSet smaller_side(const Multigraph& g, const VertexSet& s) {
  double vs = volume(g, s);
  double vc = 2.0 * g.total_weight() - vs;
  if (vc < vs) return s.complement();
  if (vc > vs) return s;
  return s.contains(0) ? s : s.complement();
}

VertexSet component_of(const Multigraph& g, Vertex root) {
  VertexSet comp(g.num_vertices());
  std::vector<Vertex> stack{root};
  comp.insert(root);
  while (!stack.empty()) {
    Vertex u = stack.back();
    stack.pop_back();
    for (int e : g.incidence_lists()[static_cast<std::size_t>(u)]) {
      Vertex w = g.other_end(e, u);
      if (!comp.contains(w)) {
        comp.insert(w);
        stack.push_back(w);
      }
    }
  }
  return comp;
}

}  // namespace

double volume(const Multigraph& g, const VertexSet& s) {
  require_same_universe(g, s);
  double vol = 0.0;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (s.contains(v)) vol += g.weighted_degree(v);
  }
  return vol;
}

double cut_weight(const Multigraph& g, const VertexSet& s) {
  require_same_universe(g, s);
  double cut = 0.0;
  for (const Edge& e : g.edges()) {
    if (s.contains(e.tail) != s.contains(e.head)) cut += e.weight;
  }
  return cut;
}

double cut_conductance(const Multigraph& g, const VertexSet& s) {
  double vs = volume(g, s);
  double vc = 2.0 * g.total_weight() - vs;
  double denom = std::min(vs, vc);
  if (denom <= 0.0) return std::numeric_limits<double>::infinity();
  return cut_weight(g, s) / denom;
}

ConductanceCertificate conductance_exact(const Multigraph& g, const GraphLimits& limits) {
  const int n = g.num_vertices();
  if (n < 2) throw ArgumentError("conductance needs at least two vertices");
  if (n > limits.max_exact_conductance_vertices) {
    throw SizeError("exact conductance enumerates 2^(n-1) cuts; n = " + std::to_string(n) +
                    " exceeds the limit " + std::to_string(limits.max_exact_conductance_vertices) +
                    ", use conductance_bounds");
  }
  if (!g.is_connected()) {
    return {0.0, smaller_side(g, component_of(g, 0)), CertificateKind::exact};
  }

  // Neighbour lists with accumulated parallel weight, for O(deg) Gray-code flips.
  std::vector<std::vector<std::pair<int, double>>> adj(static_cast<std::size_t>(n));
  for (const Edge& e : g.edges()) {
    adj[static_cast<std::size_t>(e.tail)].emplace_back(e.head, e.weight);
    adj[static_cast<std::size_t>(e.head)].emplace_back(e.tail, e.weight);
  }
  const double total_vol = 2.0 * g.total_weight();
  const int free_bits = n - 1;  // vertex 0 always in S
  const std::uint64_t subsets = std::uint64_t{1} << free_bits;
  const std::uint64_t full_mask = subsets - 1;

  struct Best {
    double phi = std::numeric_limits<double>::infinity();
    std::uint64_t mask = 0;
  };
  const std::size_t blocks = free_bits >= 8 ? 64 : 1;
  const std::uint64_t block_len = subsets / blocks;
  std::vector<Best> best(blocks);

  parallel_for(blocks, [&](std::size_t b) {
    std::uint64_t begin = b * block_len;
    std::uint64_t end = begin + block_len;
    std::vector<char> in(static_cast<std::size_t>(n), 0);
    std::uint64_t mask = begin ^ (begin >> 1);
    in[0] = 1;
    for (int i = 0; i < free_bits; ++i) in[static_cast<std::size_t>(i + 1)] = (mask >> i) & 1u;
    double vol_s = 0.0;
    double cut = 0.0;
    for (int v = 0; v < n; ++v) {
      if (in[static_cast<std::size_t>(v)]) vol_s += g.weighted_degree(v);
    }
    for (const Edge& e : g.edges()) {
      if (in[static_cast<std::size_t>(e.tail)] != in[static_cast<std::size_t>(e.head)]) cut += e.weight;
    }
    Best local;
    for (std::uint64_t i = begin; i < end; ++i) {
      if (i != begin) {
        int bit = std::countr_zero(i);
        int v = bit + 1;
        double w_in = 0.0;
        for (auto [u, w] : adj[static_cast<std::size_t>(v)]) {
          if (in[static_cast<std::size_t>(u)]) w_in += w;
        }
        double deg = g.weighted_degree(v);
        if (in[static_cast<std::size_t>(v)]) {
          in[static_cast<std::size_t>(v)] = 0;
          vol_s -= deg;
          cut += 2.0 * w_in - deg;
        } else {
          in[static_cast<std::size_t>(v)] = 1;
          vol_s += deg;
          cut += deg - 2.0 * w_in;
        }
        mask ^= std::uint64_t{1} << bit;
      }
      if (mask == full_mask) continue;  // S = V
      double denom = std::min(vol_s, total_vol - vol_s);
      if (denom <= 0.0) continue;
      double phi = cut / denom;
      if (phi < local.phi) local = {phi, mask};
    }
    best[b] = local;
  });

  Best overall;
  for (const Best& b : best) {
    if (b.phi < overall.phi) overall = b;
  }
  VertexSet s(n);
  s.insert(0);
  for (int i = 0; i < free_bits; ++i) {
    if ((overall.mask >> i) & 1u) s.insert(i + 1);
  }
  VertexSet witness = smaller_side(g, s);
  return {cut_conductance(g, witness), witness, CertificateKind::exact};
}

ConductanceBounds conductance_bounds(const Multigraph& g, const GraphLimits& limits) {
  const int n = g.num_vertices();
  if (n < 2) throw ArgumentError("conductance needs at least two vertices");
  if (!g.is_connected()) throw StructuralError("conductance_bounds requires a connected graph");
  if (n > limits.max_dense_spectral_vertices) {
    throw SizeError("spectral bracket is dense; n = " + std::to_string(n) + " exceeds " +
                    std::to_string(limits.max_dense_spectral_vertices));
  }

  Eigen::VectorXd inv_sqrt_deg(n);
  for (int v = 0; v < n; ++v) inv_sqrt_deg(v) = 1.0 / std::sqrt(g.weighted_degree(v));
  Eigen::MatrixXd normalized = Eigen::MatrixXd::Identity(n, n);
  for (const Edge& e : g.edges()) {
    double s = e.weight * inv_sqrt_deg(e.tail) * inv_sqrt_deg(e.head);
    normalized(e.tail, e.head) -= s;
    normalized(e.head, e.tail) -= s;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(normalized);
  if (eig.info() != Eigen::Success) {
    throw ConvergenceError("normalized Laplacian eigensolver did not converge",
                           Eigen::VectorXd::Zero(n), std::numeric_limits<double>::quiet_NaN());
  }
  double lambda2 = std::max(0.0, eig.eigenvalues()(1));
  Eigen::VectorXd embedding = eig.eigenvectors().col(1).cwiseProduct(inv_sqrt_deg);

  std::vector<Vertex> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Vertex a, Vertex b) { return embedding(a) < embedding(b); });

  const double total_vol = 2.0 * g.total_weight();
  std::vector<char> in(static_cast<std::size_t>(n), 0);
  double vol_s = 0.0;
  double cut = 0.0;
  double best_phi = std::numeric_limits<double>::infinity();
  int best_prefix = 1;
  for (int i = 0; i + 1 < n; ++i) {
    Vertex v = order[static_cast<std::size_t>(i)];
    double w_in = 0.0;
    for (int e : g.incidence_lists()[static_cast<std::size_t>(v)]) {
      if (in[static_cast<std::size_t>(g.other_end(e, v))]) w_in += g.edge(e).weight;
    }
    in[static_cast<std::size_t>(v)] = 1;
    vol_s += g.weighted_degree(v);
    cut += g.weighted_degree(v) - 2.0 * w_in;
    double phi = cut / std::min(vol_s, total_vol - vol_s);
    if (phi < best_phi) {
      best_phi = phi;
      best_prefix = i + 1;
    }
  }
  VertexSet prefix(n);
  for (int i = 0; i < best_prefix; ++i) prefix.insert(order[static_cast<std::size_t>(i)]);
  VertexSet witness = smaller_side(g, prefix);
  ConductanceCertificate upper{cut_conductance(g, witness), witness,
                               CertificateKind::sweep_upper_bound};
  // Rounding slack keeps the bracket valid against eigensolver error.
  double lower_phi = std::max(0.0, 0.5 * lambda2 * (1.0 - 1e-10) - 1e-14);
  lower_phi = std::min(lower_phi, upper.phi);
  ConductanceCertificate lower{lower_phi, VertexSet(n), CertificateKind::cheeger_lower_bound};
  return {lower, upper};
}

std::optional<int> girth(const Multigraph& g) {
  const int n = g.num_vertices();
  int best = std::numeric_limits<int>::max();
  std::vector<int> dist(static_cast<std::size_t>(n));
  std::vector<int> parent_edge(static_cast<std::size_t>(n));
  for (Vertex s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(parent_edge.begin(), parent_edge.end(), -1);
    std::queue<Vertex> queue;
    dist[static_cast<std::size_t>(s)] = 0;
    queue.push(s);
    while (!queue.empty()) {
      Vertex u = queue.front();
      queue.pop();
      if (2 * dist[static_cast<std::size_t>(u)] + 1 >= best) break;
      for (int e : g.incidence_lists()[static_cast<std::size_t>(u)]) {
        if (e == parent_edge[static_cast<std::size_t>(u)]) continue;
        Vertex w = g.other_end(e, u);
        if (dist[static_cast<std::size_t>(w)] < 0) {
          dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(u)] + 1;
          parent_edge[static_cast<std::size_t>(w)] = e;
          queue.push(w);
        } else {
          best = std::min(best, dist[static_cast<std::size_t>(u)] + dist[static_cast<std::size_t>(w)] + 1);
        }
      }
    }
  }
  if (best == std::numeric_limits<int>::max()) return std::nullopt;
  return best;
}

// Generators ---------------------------------------------------------------

namespace {

// Unbiased draw from [0, bound); spelled out so edge lists do not depend on
// the standard library's distribution implementation.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

}  // namespace

Multigraph gen_random_regular(int n, int d, std::uint64_t seed, int max_attempts) {
  if (d < 3) throw ArgumentError("random regular generation needs d >= 3");
  if (n <= d) throw ArgumentError("random regular generation needs n > d");
  if ((static_cast<long long>(n) * d) % 2 != 0) throw ArgumentError("n * d must be even");

  std::mt19937_64 rng(seed);
  std::vector<Vertex> points(static_cast<std::size_t>(n) * static_cast<std::size_t>(d));
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    for (std::size_t i = 0; i < points.size(); ++i) points[i] = static_cast<Vertex>(i / static_cast<std::size_t>(d));
    for (std::size_t i = points.size() - 1; i > 0; --i) {
      std::swap(points[i], points[bounded(rng, i + 1)]);
    }
    std::set<std::pair<Vertex, Vertex>> seen;
    std::vector<Edge> edges;
    edges.reserve(points.size() / 2);
    bool simple = true;
    for (std::size_t i = 0; i < points.size(); i += 2) {
      Vertex a = std::min(points[i], points[i + 1]);
      Vertex b = std::max(points[i], points[i + 1]);
      if (a == b || !seen.emplace(a, b).second) {
        simple = false;
        break;
      }
      edges.push_back({a, b, 1.0});
    }
    if (!simple) continue;
    Multigraph g(n, std::move(edges));
    if (g.is_connected()) return g;
  }
  throw GenerationError("no simple connected " + std::to_string(d) + "-regular graph on " +
                        std::to_string(n) + " vertices after " + std::to_string(max_attempts) +
                        " attempts");
}

Multigraph gadget_subdivide(const Multigraph& g, int k, const GraphLimits& limits) {
  if (k < 1) throw ArgumentError("gadget path count k must be positive");
  if (!g.is_unit_weight()) throw ContractError("gadget_subdivide requires a unit-weight graph");
  const std::int64_t m = g.num_edges();
  const std::int64_t kk = static_cast<std::int64_t>(k) * k;
  const std::int64_t predicted_edges = m * kk;
  const std::int64_t predicted_vertices = g.num_vertices() + m * k * (k - 1);
  if (predicted_edges > limits.max_edges || predicted_vertices > std::numeric_limits<int>::max()) {
    throw SizeError("gadget with k = " + std::to_string(k) + " would have " +
                    std::to_string(predicted_vertices) + " vertices and " +
                    std::to_string(predicted_edges) + " edges (cap " +
                    std::to_string(limits.max_edges) + ")");
  }
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(predicted_edges));
  Vertex next = g.num_vertices();
  for (const Edge& e : g.edges()) {
    for (int path = 0; path < k; ++path) {
      Vertex prev = e.tail;
      for (int hop = 1; hop < k; ++hop) {
        edges.push_back({prev, next, 1.0});
        prev = next++;
      }
      edges.push_back({prev, e.head, 1.0});
    }
  }
  return Multigraph(static_cast<int>(predicted_vertices), std::move(edges));
}

Multigraph graph_union(const Multigraph& g, const Multigraph& h) {
  std::vector<Edge> edges = g.edges();
  edges.insert(edges.end(), h.edges().begin(), h.edges().end());
  return Multigraph(std::max(g.num_vertices(), h.num_vertices()), std::move(edges));
}

Multigraph weighted_to_multigraph(const Multigraph& g, const std::vector<int>& capacities,
                                  const std::vector<int>& lengths, const GraphLimits& limits) {
  const auto m = static_cast<std::size_t>(g.num_edges());
  if (capacities.size() != m || lengths.size() != m) {
    throw ArgumentError("capacities and lengths need one entry per edge");
  }
  std::int64_t predicted_edges = 0;
  std::int64_t predicted_vertices = g.num_vertices();
  for (std::size_t e = 0; e < m; ++e) {
    if (capacities[e] < 1 || lengths[e] < 1) {
      throw ArgumentError("capacities and lengths must be positive integers");
    }
    predicted_edges += static_cast<std::int64_t>(capacities[e]) * lengths[e];
    predicted_vertices += lengths[e] - 1;
  }
  if (predicted_edges > limits.max_edges) {
    throw SizeError("multigraph expansion would have " + std::to_string(predicted_edges) +
                    " edges (cap " + std::to_string(limits.max_edges) + ")");
  }
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(predicted_edges));
  Vertex next = g.num_vertices();
  for (std::size_t e = 0; e < m; ++e) {
    Vertex prev = g.edges()[e].tail;
    for (int hop = 0; hop < lengths[e]; ++hop) {
      Vertex to = hop + 1 == lengths[e] ? g.edges()[e].head : next++;
      for (int c = 0; c < capacities[e]; ++c) edges.push_back({prev, to, 1.0});
      prev = to;
    }
  }
  return Multigraph(static_cast<int>(predicted_vertices), std::move(edges));
}

Multigraph complete_graph(int n) {
  std::vector<Edge> edges;
  for (Vertex a = 0; a < n; ++a) {
    for (Vertex b = a + 1; b < n; ++b) edges.push_back({a, b, 1.0});
  }
  return Multigraph(n, std::move(edges));
}

Multigraph cycle_graph(int n) {
  std::vector<Edge> edges;
  for (Vertex a = 0; a < n; ++a) edges.push_back({a, (a + 1) % n, 1.0});
  return Multigraph(n, std::move(edges));
}

Multigraph path_graph(int n) {
  std::vector<Edge> edges;
  for (Vertex a = 0; a + 1 < n; ++a) edges.push_back({a, a + 1, 1.0});
  return Multigraph(n, std::move(edges));
}

Multigraph petersen_graph() {
  std::vector<Edge> edges;
  for (Vertex i = 0; i < 5; ++i) {
    edges.push_back({i, (i + 1) % 5, 1.0});          // outer cycle
    edges.push_back({i, i + 5, 1.0});                // spokes
    edges.push_back({i + 5, (i + 2) % 5 + 5, 1.0});  // inner pentagram
  }
  return Multigraph(10, std::move(edges));
}

// Text format --------------------------------------------------------------

namespace {

bool next_data_line(std::istream& in, std::string& line, int& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    return true;
  }
  return false;
}

std::string format_double(double x) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), end);
}

}  // namespace

Multigraph read_graph(std::istream& in) {
  std::string line;
  int line_no = 0;
  if (!next_data_line(in, line, line_no)) throw ArgumentError("graph file: missing 'n m' header");
  long long n = -1;
  long long m = -1;
  {
    std::istringstream header(line);
    if (!(header >> n >> m) || n < 0 || m < 0) {
      throw ArgumentError("graph file line " + std::to_string(line_no) + ": expected 'n m'");
    }
  }
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    if (!next_data_line(in, line, line_no)) {
      throw ArgumentError("graph file: expected " + std::to_string(m) + " edges, found " +
                          std::to_string(i));
    }
    std::istringstream row(line);
    Edge e;
    if (!(row >> e.tail >> e.head >> e.weight)) {
      throw ArgumentError("graph file line " + std::to_string(line_no) +
                          ": expected 'tail head weight'");
    }
    edges.push_back(e);
  }
  return Multigraph(static_cast<int>(n), std::move(edges));
}

Multigraph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open graph file '" + path + "'");
  return read_graph(in);
}

void write_graph(std::ostream& out, const Multigraph& g) {
  out << g.num_vertices() << ' ' << g.num_edges() << '\n';
  for (const Edge& e : g.edges()) {
    out << e.tail << ' ' << e.head << ' ' << format_double(e.weight) << '\n';
  }
}

void write_graph_file(const std::string& path, const Multigraph& g) {
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot write graph file '" + path + "'");
  write_graph(out, g);
}

}  // namespace ohmlab
