#include "ohmlab/lab.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <ostream>
#include <random>

#include "ohmlab/csv.hpp"
#include "ohmlab/diagnostics.hpp"
#include "ohmlab/errors.hpp"
#include "ohmlab/parallel.hpp"
#include "ohmlab/routing.hpp"

namespace ohmlab::lab {

namespace {

using Row = std::vector<std::string>;

constexpr int kDiagnosticSamples = 50;
constexpr double kIntegralGap = 1e-10;
constexpr double kCrossingDeviation = 1e-8;

struct PhiInterval {
  double lower = 0.0;
  double upper = 0.0;
  bool exact = false;
};

PhiInterval measure_phi(const Multigraph& g) {
  GraphLimits limits;
  if (g.num_vertices() <= limits.max_exact_conductance_vertices) {
    double phi = conductance_exact(g, limits).phi;
    return {phi, phi, true};
  }
  ConductanceBounds b = conductance_bounds(g, limits);
  return {b.lower.phi, b.upper.phi, false};
}

std::string p_label(double p) { return std::isinf(p) ? "inf" : format_number(p); }

std::string regular_id(int n, int d, std::uint64_t seed) {
  return "regular-n" + std::to_string(n) + "-d" + std::to_string(d) + "-s" + std::to_string(seed);
}

struct GraphCell {
  std::string id;
  int n = 0;
  int d = 0;
  std::uint64_t seed = 0;
  Multigraph graph;
};

// The file graph if one is configured, else one regular graph per (n, d, seed).
std::vector<GraphCell> graph_cells(const ExperimentConfig& cfg) {
  std::vector<GraphCell> cells;
  if (!cfg.graph_file.empty()) {
    Multigraph g = read_graph_file(cfg.graph_file);
    cells.push_back({cfg.graph_file, g.num_vertices(), 0, 0, std::move(g)});
    return cells;
  }
  for (int n : cfg.n_grid) {
    for (int d : cfg.d_grid) {
      for (std::uint64_t seed : cfg.seeds) cells.push_back({regular_id(n, d, seed), n, d, seed, Multigraph()});
    }
  }
  parallel_for(cells.size(), [&](std::size_t i) {
    cells[i].graph = gen_random_regular(cells[i].n, cells[i].d, cells[i].seed);
  });
  return cells;
}

RoutingLimits routing_limits(const ExperimentConfig& cfg) { return RoutingLimits{cfg.cap_edges}; }

bool close_rel(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace

void ExperimentConfig::validate() const {
  for (double p : p_grid) {
    if (!(p >= 1.0)) throw ArgumentError("p grid values must lie in [1, inf]");
  }
  if (seeds.empty()) throw ArgumentError("at least one seed is required");
  if (!(tol > 0.0 && tol < 1.0)) throw ArgumentError("tolerance must lie in (0, 1)");
  if (cap_edges <= 0) throw ArgumentError("edge cap must be positive");
  for (int k : k_grid) {
    if (k < 1) throw ArgumentError("gadget parameter k must be at least 1");
  }
}

void write_timestamp(std::ostream& out, const ExperimentConfig& cfg) {
  if (!cfg.timestamp) return;
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  out << "# generated " << buf << '\n';
}

int cmd_report(std::ostream& out, const Multigraph& g, const ExperimentConfig& cfg) {
  cfg.validate();
  CompetitiveReport r = competitive_report(g, cfg.p_grid, cfg.tol, cfg.graph_file, routing_limits(cfg));
  write_timestamp(out, cfg);
  CsvWriter csv(out, {"p", "rho", "bound", "slack"});
  int status = kExitOk;
  for (double p : cfg.p_grid) {
    double rho = r.rho.at(p);
    double slack = r.bound - rho;
    if (slack < -kSlackTolerance) status = kExitViolation;
    csv.row({p_label(p), format_number(rho), format_number(r.bound), format_number(slack)});
  }
  return status;
}

int cmd_diagnose(std::ostream& out, const Multigraph& g, std::optional<int> edge, const ExperimentConfig& cfg,
                 std::ostream* dump) {
  cfg.validate();
  if (edge && (*edge < 0 || *edge >= g.num_edges())) {
    throw ArgumentError("edge id " + std::to_string(*edge) + " out of range");
  }
  PhiInterval phi = measure_phi(g);
  LaplacianSolver solver(g);
  std::vector<int> edges;
  if (edge) {
    edges.push_back(*edge);
  } else {
    for (int e = 0; e < g.num_edges(); ++e) edges.push_back(e);
  }
  struct Result {
    Row row;
    bool violated = false;
  };
  std::vector<Result> results(edges.size());
  std::vector<ThresholdProfile> profiles(edges.size());
  parallel_for(edges.size(), [&](std::size_t i) {
    int e = edges[i];
    Demand chi = Demand::across_edge(g, e);
    ThresholdProfile tp = threshold_profile(g, solver, chi, cfg.tol);
    IntegralIdentity id = check_integral_identity(tp);
    double gap = id.abs_gap / std::max(id.lhs, std::numeric_limits<double>::min());
    double deviation = check_unit_flow_across_cuts(tp, chi, kDiagnosticSamples);
    DeltaBoundReport bound = check_delta_bound(tp, phi.lower, kDiagnosticSamples);
    int cs = 0;
    int db = 0;
    for (const auto& v : bound.violations) (v.cauchy_schwarz ? cs : db) += 1;
    results[i].violated = gap > kIntegralGap || deviation > kCrossingDeviation || !bound.ok();
    results[i].row = {std::to_string(e), std::to_string(g.edge(e).tail), std::to_string(g.edge(e).head),
                      format_number(id.lhs), format_number(id.rhs), format_number(gap),
                      format_number(deviation), std::to_string(cs), std::to_string(db)};
    if (dump) profiles[i] = std::move(tp);
  });
  if (dump && edge) {
    write_timestamp(*dump, cfg);
    write_profile_csv(*dump, profiles.front());
  }
  write_timestamp(out, cfg);
  CsvWriter csv(out, {"edge", "tail", "head", "integral_lhs", "integral_rhs", "integral_gap",
                      "crossing_flow_deviation", "cs_violations", "delta_bound_violations"});
  int status = kExitOk;
  for (const Result& r : results) {
    csv.row(r.row);
    if (r.violated) status = kExitViolation;
  }
  return status;
}

Vector random_binary_boundary(const Partition& part, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Vector x(static_cast<Eigen::Index>(part.terminals().size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = static_cast<double>(rng() >> 63);
  return x;
}

double brute_force_l1_min(const Multigraph& g, const Partition& part, const Vector& x) {
  const auto nf = part.eliminated().size();
  if (nf > 20) throw SizeError("brute force over 2^|F| needs |F| <= 20");
  double best = std::numeric_limits<double>::infinity();
  Vector y(static_cast<Eigen::Index>(nf));
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << nf); ++mask) {
    for (std::size_t i = 0; i < nf; ++i) y(static_cast<Eigen::Index>(i)) = static_cast<double>((mask >> i) & 1U);
    best = std::min(best, l1_objective(g, part, x, y));
  }
  return best;
}

int cmd_sparsify(std::ostream& out, const Multigraph& g, const Partition& part, const Vector& x,
                 const ExperimentConfig& cfg) {
  cfg.validate();
  if (x.size() != static_cast<Eigen::Index>(part.terminals().size())) {
    throw ArgumentError("x needs one value per terminal");
  }
  const auto& c = part.terminals();
  const auto& f = part.eliminated();
  int status = kExitOk;
  std::vector<Row> rows;
  auto add = [&](const std::string& q, const std::string& a, const std::string& b, double v) {
    rows.push_back({q, a, b, format_number(v)});
  };

  SparseMatrix schur = schur_complement(g, part);
  for (const WeightedPair& w : laplacian_edges(schur)) {
    add("schur_weight", std::to_string(c[static_cast<std::size_t>(w.a)]),
        std::to_string(c[static_cast<std::size_t>(w.b)]), w.weight);
  }

  Vector y = harmonic_extension(g, part, x);
  for (std::size_t i = 0; i < f.size(); ++i) add("harmonic_y", std::to_string(f[i]), "", y(static_cast<Eigen::Index>(i)));
  double energy_extension = energy_objective(g, part, x, y);
  double energy_schur = x.dot(schur * x);
  add("energy_extension", "", "", energy_extension);
  add("energy_schur", "", "", energy_schur);
  if (!close_rel(energy_extension, energy_schur, 1e-10)) status = kExitViolation;

  bool binary = (x.array() == 0.0 || x.array() == 1.0).all();
  if (binary) {
    L1Extension best = l1_extension_min(g, part, x);
    add("l1_min", "", "", best.value);
    for (std::size_t i = 0; i < f.size(); ++i) {
      add("l1_minimizer", std::to_string(f[i]), "", best.y(static_cast<Eigen::Index>(i)));
    }
    if (f.size() <= 20) {
      double brute = brute_force_l1_min(g, part, x);
      add("l1_min_brute_force", "", "", brute);
      if (!close_rel(best.value, brute, 1e-12)) status = kExitViolation;
    }
  }

  Vector full = part.assemble(x, y);
  ExpectedCut expected = expected_cut_l1(g, full);
  MonteCarloEstimate mc = monte_carlo_cut_l1(g, full, 10000, cfg.seeds.front());
  add("expected_cut_closed_form", "", "", expected.closed_form);
  add("expected_cut_integrated", "", "", expected.integrated);
  add("expected_cut_monte_carlo", "", "", mc.mean);
  add("expected_cut_monte_carlo_stderr", "", "", mc.standard_error);
  if (!close_rel(expected.closed_form, expected.integrated, 1e-12)) status = kExitViolation;

  write_timestamp(out, cfg);
  CsvWriter csv(out, {"quantity", "index_a", "index_b", "value"});
  for (const Row& r : rows) csv.row(r);
  return status;
}

int cmd_experiment_upperbound(std::ostream& out, const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<GraphCell> cells = graph_cells(cfg);
  std::vector<Row> rows(cells.size());
  std::vector<char> violated(cells.size(), 0);
  parallel_for(cells.size(), [&](std::size_t i) {
    const Multigraph& g = cells[i].graph;
    PhiInterval phi = measure_phi(g);
    double vol = 2.0 * g.total_weight();
    double rho = rho_infinity(g, cfg.tol);
    double bound = upper_bound_formula(vol, phi.lower);
    double slack = bound - rho;
    violated[i] = slack < -kSlackTolerance * std::max(1.0, bound);
    rows[i] = {cells[i].id, std::to_string(cells[i].n), std::to_string(cells[i].d), std::to_string(cells[i].seed),
               std::to_string(g.num_edges()), format_number(vol), format_number(phi.lower),
               phi.exact ? "1" : "0", format_number(rho), format_number(bound), format_number(rho / bound),
               format_number(slack)};
  });
  write_timestamp(out, cfg);
  CsvWriter csv(out, {"graph", "n", "d", "seed", "m", "vol", "phi", "phi_exact", "rho_inf", "bound", "ratio",
                      "slack"});
  for (const Row& r : rows) csv.row(r);
  return std::any_of(violated.begin(), violated.end(), [](char v) { return v != 0; }) ? kExitViolation : kExitOk;
}

int cmd_experiment_interpolation(std::ostream& out, const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<GraphCell> cells = graph_cells(cfg);
  std::vector<std::vector<Row>> rows(cells.size());
  std::vector<char> violated(cells.size(), 0);
  parallel_for(cells.size(), [&](std::size_t i) {
    const Multigraph& g = cells[i].graph;
    if (!g.is_unit_weight()) throw ContractError("interpolation experiment needs a unit-weight graph");
    Eigen::MatrixXd pi = projection_matrix(g, cfg.tol, routing_limits(cfg));
    double rho1 = rho_from_projection(pi, 1.0);
    double rho2 = rho_from_projection(pi, 2.0);
    double rho_inf = rho_from_projection(pi, kInfinity);
    PhiInterval phi = measure_phi(g);
    double thm = upper_bound_formula(2.0 * g.total_weight(), phi.lower);
    for (double p : cfg.p_grid) {
      double rho = rho_from_projection(pi, p);
      double inv = std::isinf(p) ? 0.0 : 1.0 / p;
      double rt = std::pow(rho1, inv) * std::pow(rho_inf, 1.0 - inv);
      double loc = p >= 2.0 ? std::pow(rho2, 2.0 * inv) * std::pow(thm, 1.0 - 2.0 * inv)
                            : std::numeric_limits<double>::quiet_NaN();
      double best = p >= 2.0 ? std::min(rt, loc) : rt;
      double slack = best - rho;
      if (slack < -kSlackTolerance) violated[i] = 1;
      rows[i].push_back({cells[i].id, p_label(p), format_number(rho), format_number(rt), format_number(loc),
                         format_number(thm), format_number(slack)});
    }
  });
  write_timestamp(out, cfg);
  CsvWriter csv(out, {"graph", "p", "rho_p", "rt_bound", "loc_bound", "thm_bound", "slack"});
  for (const auto& group : rows) {
    for (const Row& r : group) csv.row(r);
  }
  return std::any_of(violated.begin(), violated.end(), [](char v) { return v != 0; }) ? kExitViolation : kExitOk;
}

int cmd_experiment_lowerbound(std::ostream& out, const ExperimentConfig& cfg) {
  cfg.validate();
  Multigraph base = cfg.graph_file.empty() ? gen_random_regular(cfg.n_grid.front(), cfg.d_grid.front(), cfg.seeds.front())
                                           : read_graph_file(cfg.graph_file);
  std::vector<double> finite_p;
  for (double p : cfg.p_grid) {
    if (!std::isinf(p)) finite_p.push_back(p);
  }
  std::vector<Row> rows(cfg.k_grid.size());
  std::vector<char> violated(cfg.k_grid.size(), 0);
  parallel_for(cfg.k_grid.size(), [&](std::size_t i) {
    int k = cfg.k_grid[i];
    Multigraph g = graph_union(base, gadget_subdivide(base, k));
    PhiInterval phi = measure_phi(g);
    double rho_inf = rho_infinity(g, cfg.tol);
    Row row{std::to_string(k), std::to_string(g.num_vertices()), std::to_string(g.num_edges()),
            format_number(phi.lower), format_number(phi.upper), format_number(rho_inf)};
    if (!finite_p.empty()) {
      if (g.num_edges() <= cfg.cap_edges) {
        Eigen::MatrixXd pi = projection_matrix(g, cfg.tol, routing_limits(cfg));
        for (double p : finite_p) row.push_back(format_number(rho_from_projection(pi, p)));
      } else {
        for (std::size_t j = 0; j < finite_p.size(); ++j) row.push_back("nan");
      }
    }
    LaplacianSolver solver(g);
    double r_min = std::numeric_limits<double>::infinity();
    double r_max = 0.0;
    for (const Edge& e : base.edges()) {
      Demand chi = Demand::pair(g.num_vertices(), e.tail, e.head);
      double r = chi.values().dot(electrical_voltages(solver, chi, cfg.tol).values);
      r_min = std::min(r_min, r);
      r_max = std::max(r_max, r);
    }
    double loc = localization(g, cfg.tol);
    violated[i] = rho_inf < 1.0 - kSlackTolerance || loc > rho_inf * (1.0 + kSlackTolerance);
    row.push_back(format_number(r_min));
    row.push_back(format_number(r_max));
    row.push_back(format_number(loc));
    rows[i] = std::move(row);
  });
  write_timestamp(out, cfg);
  std::vector<std::string> columns{"k", "n", "m", "phi_lower", "phi_upper", "rho_inf"};
  for (double p : finite_p) columns.push_back("rho_" + format_number(p));
  for (const char* c : {"eff_res_min", "eff_res_max", "localization"}) columns.emplace_back(c);
  CsvWriter csv(out, columns);
  for (const Row& r : rows) csv.row(r);
  return std::any_of(violated.begin(), violated.end(), [](char v) { return v != 0; }) ? kExitViolation : kExitOk;
}

int cmd_experiment_localization(std::ostream& out, const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<GraphCell> cells = graph_cells(cfg);
  std::vector<Row> rows(cells.size());
  std::vector<char> violated(cells.size(), 0);
  parallel_for(cells.size(), [&](std::size_t i) {
    const Multigraph& g = cells[i].graph;
    PhiInterval phi = measure_phi(g);
    double vol = 2.0 * g.total_weight();
    double loc = localization(g, cfg.tol);
    double rho = rho_infinity(g, cfg.tol);
    double thm = upper_bound_formula(vol, phi.lower);
    double log_n = std::log(static_cast<double>(g.num_vertices()));
    double slack = thm - loc;
    violated[i] = slack < -kSlackTolerance || loc > rho * (1.0 + kSlackTolerance);
    rows[i] = {cells[i].id, std::to_string(g.num_vertices()), std::to_string(g.num_edges()), format_number(vol),
               format_number(phi.lower), format_number(loc), format_number(rho), format_number(thm),
               format_number(log_n * log_n + 10.0), format_number(slack)};
  });
  write_timestamp(out, cfg);
  CsvWriter csv(out, {"graph", "n", "m", "vol", "phi", "localization", "rho_inf", "thm_bound", "log2_bound",
                      "slack"});
  for (const Row& r : rows) csv.row(r);
  return std::any_of(violated.begin(), violated.end(), [](char v) { return v != 0; }) ? kExitViolation : kExitOk;
}

}  // namespace ohmlab::lab
