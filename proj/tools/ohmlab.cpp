#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ohmlab/errors.hpp"
#include "ohmlab/graph.hpp"
#include "ohmlab/lab.hpp"
#include "ohmlab/sparsify.hpp"

namespace {

using namespace ohmlab;

double parse_p(const std::string& s) {
  if (s == "inf" || s == "infinity") return kInfinity;
  std::size_t used = 0;
  double p = 0.0;
  try {
    p = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size()) throw ArgumentError("bad p value '" + s + "'");
  return p;
}

// Writes to --out when given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ArgumentError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Electrical-flow oblivious routing lab"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  lab::ExperimentConfig cfg;
  std::uint64_t seed = 1;
  bool no_timestamp = false;
  app.add_option("--tol", cfg.tol, "Laplacian solver relative residual tolerance")->capture_default_str();
  auto* seed_opt = app.add_option("--seed", seed, "Random seed")->capture_default_str();
  app.add_option("--cap-edges", cfg.cap_edges, "Largest edge count for dense matrices")->capture_default_str();
  app.add_option("--out", cfg.output, "Output file (default: stdout)");
  app.add_flag("--no-timestamp", no_timestamp, "Omit the '# generated' header line");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a graph file");
  gen->require_subcommand(1);
  int gen_n = 16;
  int gen_d = 3;
  std::string gen_base;
  int gen_k = 1;
  std::string gen_a;
  std::string gen_b;
  auto* gen_regular = gen->add_subcommand("regular", "Random d-regular simple graph (pairing model)");
  gen_regular->add_option("--n", gen_n, "Vertices")->required();
  gen_regular->add_option("--d", gen_d, "Degree")->required();
  auto* gen_gadget = gen->add_subcommand("gadget", "Replace each edge by k disjoint paths of length k");
  gen_gadget->add_option("--base", gen_base, "Base graph file")->required()->check(CLI::ExistingFile);
  gen_gadget->add_option("--k", gen_k, "Path count and length")->required();
  auto* gen_union = gen->add_subcommand("union", "Edge multiset union on shared vertex ids");
  gen_union->add_option("--a", gen_a, "First graph file")->required()->check(CLI::ExistingFile);
  gen_union->add_option("--b", gen_b, "Second graph file")->required()->check(CLI::ExistingFile);
  auto* gen_expand = gen->add_subcommand("expand", "Base graph united with its gadget subdivision");
  gen_expand->add_option("--base", gen_base, "Base graph file")->required()->check(CLI::ExistingFile);
  gen_expand->add_option("--k", gen_k, "Path count and length")->required();

  std::vector<std::string> p_text;
  std::string graph_file;

  // report
  auto* report = app.add_subcommand("report", "Competitive ratio per p against 3 ln(vol)/phi");
  report->add_option("--graph", graph_file, "Graph file")->required()->check(CLI::ExistingFile);
  report->add_option("--p", p_text, "p values (use 'inf' for infinity)")->delimiter(',');

  // diagnose
  auto* diagnose = app.add_subcommand("diagnose", "Threshold-cut diagnostics for unit edge demands");
  std::optional<int> diag_edge;
  std::string dump_file;
  diagnose->add_option("--graph", graph_file, "Graph file")->required()->check(CLI::ExistingFile);
  diagnose->add_option("--edge", diag_edge, "Edge id (default: every edge)");
  diagnose->add_option("--dump", dump_file, "Profile CSV for the chosen edge")->needs("--edge");

  // sparsify
  auto* sparsify = app.add_subcommand("sparsify", "Schur complement, extensions and rounding checks");
  std::string partition_file;
  std::vector<double> x_values;
  sparsify->add_option("--graph", graph_file, "Graph file")->required()->check(CLI::ExistingFile);
  sparsify->add_option("--partition", partition_file, "Partition file")->required()->check(CLI::ExistingFile);
  sparsify->add_option("--x", x_values, "Terminal values in increasing terminal id order (default: random 0/1)")
      ->delimiter(',');

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Batch experiments");
  experiment->require_subcommand(1);
  std::vector<std::uint64_t> seeds;
  auto add_grid = [&](CLI::App* sub) {
    sub->add_option("--graph", cfg.graph_file, "Graph file instead of generated graphs")->check(CLI::ExistingFile);
    sub->add_option("--p", p_text, "p values (use 'inf' for infinity)")->delimiter(',');
    sub->add_option("--seeds", seeds, "Generator seeds")->delimiter(',');
    sub->add_option("--n", cfg.n_grid, "Vertex counts")->delimiter(',');
    sub->add_option("--d", cfg.d_grid, "Degrees")->delimiter(',');
  };
  auto* upperbound = experiment->add_subcommand("upperbound", "rho_inf against 3 ln(vol)/phi on random regular graphs");
  add_grid(upperbound);
  auto* interpolation = experiment->add_subcommand("interpolation", "rho_p against interpolation bounds");
  add_grid(interpolation);
  auto* lowerbound = experiment->add_subcommand("lowerbound", "Base graph united with gadgets for each k");
  add_grid(lowerbound);  // base graph: first n, first d, first seed
  lowerbound->add_option("--k", cfg.k_grid, "Gadget parameters")->delimiter(',');
  auto* localization = experiment->add_subcommand("localization", "Average edge-flow l1 norm against rho_inf");
  add_grid(localization);

  CLI11_PARSE(app, argc, argv);

  try {
    cfg.timestamp = !no_timestamp;
    if (!p_text.empty()) {
      cfg.p_grid.clear();
      for (const auto& s : p_text) cfg.p_grid.push_back(parse_p(s));
    }
    if (!seeds.empty()) {
      cfg.seeds = seeds;
    } else if (seed_opt->count() > 0) {
      cfg.seeds = {seed};
    }
    cfg.validate();
    Sink sink(cfg.output);
    std::ostream& out = sink.stream();

    if (gen->parsed()) {
      Multigraph g;
      if (gen_regular->parsed()) {
        g = gen_random_regular(gen_n, gen_d, seed);
      } else if (gen_gadget->parsed()) {
        g = gadget_subdivide(read_graph_file(gen_base), gen_k);
      } else if (gen_union->parsed()) {
        g = graph_union(read_graph_file(gen_a), read_graph_file(gen_b));
      } else {
        Multigraph base = read_graph_file(gen_base);
        g = graph_union(base, gadget_subdivide(base, gen_k));
      }
      write_graph(out, g);
      return lab::kExitOk;
    }
    if (report->parsed()) {
      cfg.graph_file = graph_file;
      return lab::cmd_report(out, read_graph_file(graph_file), cfg);
    }
    if (diagnose->parsed()) {
      Multigraph g = read_graph_file(graph_file);
      if (dump_file.empty()) return lab::cmd_diagnose(out, g, diag_edge, cfg);
      std::ofstream dump(dump_file);
      if (!dump) throw ArgumentError("cannot open dump file '" + dump_file + "'");
      return lab::cmd_diagnose(out, g, diag_edge, cfg, &dump);
    }
    if (sparsify->parsed()) {
      Multigraph g = read_graph_file(graph_file);
      Partition part = read_partition_file(partition_file, g.num_vertices());
      Vector x = x_values.empty() ? lab::random_binary_boundary(part, seed)
                                  : Eigen::Map<const Vector>(x_values.data(), static_cast<Eigen::Index>(x_values.size()));
      return lab::cmd_sparsify(out, g, part, x, cfg);
    }
    if (upperbound->parsed()) return lab::cmd_experiment_upperbound(out, cfg);
    if (interpolation->parsed()) return lab::cmd_experiment_interpolation(out, cfg);
    if (lowerbound->parsed()) return lab::cmd_experiment_lowerbound(out, cfg);
    if (localization->parsed()) return lab::cmd_experiment_localization(out, cfg);
  } catch (const std::exception& e) {
    std::cerr << "ohmlab: " << e.what() << '\n';
    return lab::kExitOperational;
  }
  return lab::kExitOperational;
}
