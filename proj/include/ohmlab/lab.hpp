#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ohmlab/graph.hpp"
#include "ohmlab/linalg.hpp"
#include "ohmlab/routing.hpp"
#include "ohmlab/sparsify.hpp"

namespace ohmlab::lab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitOperational = 1;
inline constexpr int kExitViolation = 2;

/// Slack columns may dip this far below zero before a row counts as a violation.
inline constexpr double kSlackTolerance = 1e-6;

struct ExperimentConfig {
  std::string name;
  std::string graph_file;  // empty: use the regular-graph generator below
  std::vector<int> n_grid{10, 12, 16, 20};
  std::vector<int> d_grid{3, 4};
  std::vector<double> p_grid{1.0, 1.5, 2.0, 3.0, 4.0, 8.0, kInfinity};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::vector<int> k_grid{1, 2, 3, 4};
  double tol = 1e-10;
  int cap_edges = 4000;
  std::string output;  // empty: stdout
  bool timestamp = true;

  /// ArgumentError unless p >= 1, seeds nonempty, tol in (0, 1) and caps positive.
  void validate() const;
};

/// "# generated <UTC ISO-8601>" when cfg.timestamp is set.
void write_timestamp(std::ostream& out, const ExperimentConfig& cfg);

/// Columns: p, rho, bound, slack. Exit 2 when a slack is below -kSlackTolerance.
int cmd_report(std::ostream& out, const Multigraph& g, const ExperimentConfig& cfg);

/// One summary row per diagnosed edge (all edges when edge is empty). With a
/// single edge and a dump stream, the threshold profile is written there.
int cmd_diagnose(std::ostream& out, const Multigraph& g, std::optional<int> edge, const ExperimentConfig& cfg,
                 std::ostream* dump = nullptr);

/// Long-format CSV: quantity, index_a, index_b, value. x holds the terminal
/// values in the order of part.terminals().
int cmd_sparsify(std::ostream& out, const Multigraph& g, const Partition& part, const Vector& x,
                 const ExperimentConfig& cfg);

/// Boundary values for cmd_sparsify drawn uniformly from {0,1}^C.
Vector random_binary_boundary(const Partition& part, std::uint64_t seed);

/// min over y in {0,1}^F of the l1 objective by enumeration; |F| <= 20.
double brute_force_l1_min(const Multigraph& g, const Partition& part, const Vector& x);

int cmd_experiment_upperbound(std::ostream& out, const ExperimentConfig& cfg);
int cmd_experiment_interpolation(std::ostream& out, const ExperimentConfig& cfg);
int cmd_experiment_lowerbound(std::ostream& out, const ExperimentConfig& cfg);
int cmd_experiment_localization(std::ostream& out, const ExperimentConfig& cfg);

}  // namespace ohmlab::lab
