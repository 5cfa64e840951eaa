#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace ohmlab {

using Vertex = int;

/// Directed representative of an undirected edge. The (tail, head) order is
/// the fixed orientation used by the incidence matrix.
struct Edge {
  Vertex tail = 0;
  Vertex head = 0;
  double weight = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Weighted undirected multigraph with fixed edge orientations.
///
/// Weights are at least 1, there are no self-loops, and parallel edges are
/// allowed. Instances are immutable once built.
class Multigraph {
 public:
  Multigraph() = default;
  /// Throws ArgumentError when any edge violates the invariants above.
  Multigraph(int n, std::vector<Edge> edges);

  int num_vertices() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_[static_cast<std::size_t>(e)]; }

  double weighted_degree(Vertex v) const { return degree_[static_cast<std::size_t>(v)]; }
  const std::vector<double>& weighted_degrees() const { return degree_; }
  double total_weight() const;
  bool is_unit_weight() const;
  bool is_connected() const;

  /// Incident edge ids of each vertex.
  const std::vector<std::vector<int>>& incidence_lists() const { return incident_; }
  Vertex other_end(int e, Vertex v) const;

  friend bool operator==(const Multigraph& a, const Multigraph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<double> degree_;
  std::vector<std::vector<int>> incident_;
};

/// Subset of [0, n).
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(int n) : member_(static_cast<std::size_t>(n), 0) {}
  VertexSet(int n, const std::vector<Vertex>& members);

  static VertexSet all(int n);

  int universe() const { return static_cast<int>(member_.size()); }
  bool contains(Vertex v) const { return member_[static_cast<std::size_t>(v)] != 0; }
  void insert(Vertex v);
  void erase(Vertex v) { member_[static_cast<std::size_t>(v)] = 0; }
  int size() const;
  bool empty() const { return size() == 0; }
  std::vector<Vertex> members() const;
  VertexSet complement() const;

  friend bool operator==(const VertexSet&, const VertexSet&) = default;

 private:
  std::vector<char> member_;
};

enum class CertificateKind { exact, sweep_upper_bound, cheeger_lower_bound };

struct ConductanceCertificate {
  double phi = 0.0;
  VertexSet witness;  // empty when only a bound is known
  CertificateKind kind = CertificateKind::exact;
};

struct ConductanceBounds {
  ConductanceCertificate lower;
  ConductanceCertificate upper;
};

struct GraphLimits {
  int max_exact_conductance_vertices = 24;
  int max_dense_spectral_vertices = 4000;
  std::int64_t max_edges = 2'000'000;
};

double volume(const Multigraph& g, const VertexSet& s);
double cut_weight(const Multigraph& g, const VertexSet& s);

/// |cut(s)| / min(vol(s), vol(V \ s)); +inf when the smaller side has zero volume.
double cut_conductance(const Multigraph& g, const VertexSet& s);

/// Exact conductance by enumerating every cut with vertex 0 fixed on one
/// side. The witness is the side of smaller volume (vertex 0's side on ties).
/// Disconnected graphs yield phi = 0 with a disconnecting witness.
ConductanceCertificate conductance_exact(const Multigraph& g, const GraphLimits& limits = {});

/// Cheeger bracket from the normalized Laplacian: lower = lambda2 / 2 and
/// upper = best sweep cut over the second eigenvector.
ConductanceBounds conductance_bounds(const Multigraph& g, const GraphLimits& limits = {});

/// Hop count of the shortest cycle; nullopt for forests. Parallel edges give 2.
std::optional<int> girth(const Multigraph& g);

// Generators ---------------------------------------------------------------

/// Connected simple d-regular graph from the pairing model with full
/// rejection. Deterministic in (n, d, seed).
Multigraph gen_random_regular(int n, int d, std::uint64_t seed, int max_attempts = 100000);

/// Replaces every edge of a unit-weight graph by k vertex-disjoint paths of k
/// unit edges. Original vertex ids are kept; internal vertices are appended.
Multigraph gadget_subdivide(const Multigraph& g, int k, const GraphLimits& limits = {});

/// Edge multiset concatenation on max(n_g, n_h) vertices.
Multigraph graph_union(const Multigraph& g, const Multigraph& h);

/// Edge e becomes a path of lengths[e] hops, each hop carrying capacities[e]
/// parallel unit edges.
Multigraph weighted_to_multigraph(const Multigraph& g, const std::vector<int>& capacities,
                                  const std::vector<int>& lengths, const GraphLimits& limits = {});

// Small named graphs used throughout tests and examples.
Multigraph complete_graph(int n);
Multigraph cycle_graph(int n);
Multigraph path_graph(int n);
Multigraph petersen_graph();

// Text format --------------------------------------------------------------
//   n m
//   tail head weight      (m lines, 0-based ids)
// Lines starting with '#' are ignored.

Multigraph read_graph(std::istream& in);
Multigraph read_graph_file(const std::string& path);
void write_graph(std::ostream& out, const Multigraph& g);
void write_graph_file(const std::string& path, const Multigraph& g);

}  // namespace ohmlab
