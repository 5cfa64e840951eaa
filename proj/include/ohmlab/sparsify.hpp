#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ohmlab/graph.hpp"
#include "ohmlab/linalg.hpp"

namespace ohmlab {

/// Terminals C and eliminated vertices F; C and F partition V, C nonempty.
/// Vectors "on C" / "on F" are indexed by position in terminals() / eliminated().
class Partition {
 public:
  Partition(int n, std::vector<Vertex> terminals, std::vector<Vertex> eliminated);
  /// F = V \ C.
  static Partition from_terminals(int n, std::vector<Vertex> terminals);

  int universe() const { return n_; }
  const std::vector<Vertex>& terminals() const { return c_; }
  const std::vector<Vertex>& eliminated() const { return f_; }
  VertexSet terminal_set() const { return VertexSet(n_, c_); }
  VertexSet eliminated_set() const { return VertexSet(n_, f_); }

  /// (x; y) as a vertex-indexed vector.
  Vector assemble(const Vector& on_terminals, const Vector& on_eliminated) const;

 private:
  int n_ = 0;
  std::vector<Vertex> c_;
  std::vector<Vertex> f_;
};

/// Partition text: a line "C: id id ..." and a line "F: id id ...".
Partition read_partition(std::istream& in, int n);
Partition read_partition_file(const std::string& path, int n);
void write_partition(std::ostream& out, const Partition& part);

/// L_CC - L_CF L_FF^-1 L_FC, a Laplacian on the terminals.
/// StructuralError when some component of G[F] has no edge to C.
SparseMatrix schur_complement(const Multigraph& g, const Partition& part);

/// Edge weights of the graph represented by a Schur complement, as
/// (terminal position a, terminal position b, weight) with a < b.
struct WeightedPair {
  int a = 0;
  int b = 0;
  double weight = 0.0;
};
std::vector<WeightedPair> laplacian_edges(const SparseMatrix& l, double drop_below = 1e-14);

/// Energy minimizer y = -L_FF^-1 L_FC x for x in [0,1]^C; the result is
/// checked to lie in [-1e-10, 1 + 1e-10]^F and then clamped.
Vector harmonic_extension(const Multigraph& g, const Partition& part, const Vector& x);

/// Entrywise clamp to [0, 1].
Vector cap_to_unit_box(const Vector& y);

/// ||W B^T (x; y)||_1 and (x; y)^T L (x; y).
double l1_objective(const Multigraph& g, const Partition& part, const Vector& x, const Vector& y);
double energy_objective(const Multigraph& g, const Partition& part, const Vector& x, const Vector& y);

struct L1Extension {
  double value = 0.0;
  Vector y;  // 0/1 on F
};

/// Exact min over y of ||W B^T (x; y)||_1 for x in {0,1}^C by minimum s-t
/// cut (x = 1 terminals on the source side). Among minimizers, F vertices go
/// to the sink side (0) whenever possible.
L1Extension l1_extension_min(const Multigraph& g, const Partition& part, const Vector& x);

/// Level-set rounding of a fractional minimizer y in [0,1]^F: repeatedly sends
/// the smallest nonzero level to 0. ContractError if the objective rises,
/// i.e. y was not a minimizer.
Vector discretize_minimizer(const Multigraph& g, const Partition& part, const Vector& x, const Vector& y);

/// {a : x(a) > t}: an edge is cut iff min(x(a), x(b)) <= t < max(x(a), x(b)).
VertexSet random_threshold_cut(const Vector& x, double t);

struct ExpectedCut {
  double closed_form = 0.0;  // sum_e w |x(a) - x(b)|
  double integrated = 0.0;   // integral over t in [0,1] of the cut weight
};

/// E_t ||W B^T 1_{S_t}||_1 for t ~ U[0,1], computed two ways. x in [0,1]^V.
ExpectedCut expected_cut_l1(const Multigraph& g, const Vector& x);

struct MonteCarloEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  int samples = 0;
};

MonteCarloEstimate monte_carlo_cut_l1(const Multigraph& g, const Vector& x, int samples, std::uint64_t seed);

}  // namespace ohmlab
