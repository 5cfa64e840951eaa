#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>
#include <string>
#include <vector>

#include "ohmlab/csv.hpp"
#include "ohmlab/errors.hpp"
#include "ohmlab/lab.hpp"
#include "ohmlab/parallel.hpp"

using namespace ohmlab;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

lab::ExperimentConfig quiet() {
  lab::ExperimentConfig cfg;
  cfg.timestamp = false;
  return cfg;
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(kInfinity) == "inf");
  CHECK(format_number(-kInfinity) == "-inf");
  CHECK(format_number(std::nan("")) == "nan");
  std::ostringstream out;
  CsvWriter csv(out, {"a", "b"});
  CHECK_THROWS_AS(csv.row({"1"}), std::logic_error);
}

TEST_CASE("config validation") {
  lab::ExperimentConfig cfg;
  cfg.p_grid = {0.5};
  CHECK_THROWS_AS(cfg.validate(), ArgumentError);
  cfg = lab::ExperimentConfig{};
  cfg.seeds.clear();
  CHECK_THROWS_AS(cfg.validate(), ArgumentError);
  cfg = lab::ExperimentConfig{};
  cfg.k_grid = {0};
  CHECK_THROWS_AS(cfg.validate(), ArgumentError);
}

TEST_CASE("report on a single edge") {
  std::ostringstream out;
  CHECK(lab::cmd_report(out, complete_graph(2), quiet()) == lab::kExitOk);
  auto rows = parse_csv(out.str());
  REQUIRE(rows.size() == 1 + quiet().p_grid.size());
  CHECK(rows[0] == std::vector<std::string>{"p", "rho", "bound", "slack"});
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][1]) == doctest::Approx(1.0));
  CHECK(rows.back()[0] == "inf");
}

TEST_CASE("report on the four-cycle") {
  std::ostringstream out;
  lab::ExperimentConfig cfg = quiet();
  cfg.p_grid = {1.0, kInfinity};
  CHECK(lab::cmd_report(out, cycle_graph(4), cfg) == lab::kExitOk);
  auto rows = parse_csv(out.str());
  CHECK(std::stod(rows[1][1]) == doctest::Approx(1.5));
  CHECK(std::stod(rows[2][1]) == doctest::Approx(1.5));
  CHECK(std::stod(rows[1][3]) >= 0.0);
}

TEST_CASE("timestamps are the only nondeterminism") {
  lab::ExperimentConfig cfg;
  std::ostringstream stamped;
  lab::cmd_report(stamped, petersen_graph(), cfg);
  CHECK(stamped.str().rfind("# generated ", 0) == 0);
  std::ostringstream a;
  std::ostringstream b;
  lab::cmd_report(a, petersen_graph(), quiet());
  lab::cmd_report(b, petersen_graph(), quiet());
  CHECK(a.str() == b.str());
  CHECK(stamped.str().substr(stamped.str().find('\n') + 1) == a.str());
}

TEST_CASE("diagnose") {
  std::ostringstream summary;
  std::ostringstream dump;
  CHECK(lab::cmd_diagnose(summary, complete_graph(2), 0, quiet(), &dump) == lab::kExitOk);
  auto d = parse_csv(dump.str());
  CHECK(d.size() == 1 + 3);  // two breakpoints and their midpoint
  auto s = parse_csv(summary.str());
  REQUIRE(s.size() == 2);
  CHECK(s[0][5] == "integral_gap");
  CHECK(std::stod(s[1][5]) <= 1e-10);
  CHECK(std::stod(s[1][6]) <= 1e-8);

  std::ostringstream all;
  Multigraph g = gen_random_regular(10, 3, 2);
  CHECK(lab::cmd_diagnose(all, g, std::nullopt, quiet()) == lab::kExitOk);
  CHECK(parse_csv(all.str()).size() == 1 + static_cast<std::size_t>(g.num_edges()));
  CHECK_THROWS_AS(lab::cmd_diagnose(all, g, 99, quiet()), ArgumentError);
}

TEST_CASE("sparsify report") {
  std::ostringstream out;
  Vector x(2);
  x << 1.0, 0.0;
  CHECK(lab::cmd_sparsify(out, path_graph(3), Partition(3, {0, 2}, {1}), x, quiet()) == lab::kExitOk);
  auto rows = parse_csv(out.str());
  CHECK(rows[0] == std::vector<std::string>{"quantity", "index_a", "index_b", "value"});
  CHECK(rows[1] == std::vector<std::string>{"schur_weight", "0", "2", "0.5"});

  std::ostringstream ones;
  CHECK(lab::cmd_sparsify(ones, cycle_graph(6), Partition::from_terminals(6, {0, 3}), Vector::Ones(2), quiet()) ==
        lab::kExitOk);
  bool saw_min = false;
  for (const auto& r : parse_csv(ones.str())) {
    if (r[0] == "l1_min") {
      saw_min = true;
      CHECK(r[3] == "0");
    }
  }
  CHECK(saw_min);

  Multigraph g = gen_random_regular(12, 3, 5);
  Partition part = Partition::from_terminals(12, {0, 1, 2, 3, 4, 5});
  std::ostringstream random_case;
  CHECK(lab::cmd_sparsify(random_case, g, part, lab::random_binary_boundary(part, 5), quiet()) == lab::kExitOk);
  double min_cut = -1.0;
  double brute = -2.0;
  for (const auto& r : parse_csv(random_case.str())) {
    if (r[0] == "l1_min") min_cut = std::stod(r[3]);
    if (r[0] == "l1_min_brute_force") brute = std::stod(r[3]);
  }
  CHECK(min_cut == brute);
}

TEST_CASE("small experiment grids") {
  lab::ExperimentConfig cfg = quiet();
  cfg.n_grid = {10};
  cfg.d_grid = {3};
  cfg.seeds = {1, 2};

  std::ostringstream ub;
  CHECK(lab::cmd_experiment_upperbound(ub, cfg) == lab::kExitOk);
  auto rows = parse_csv(ub.str());
  CHECK(rows.size() == 3);
  CHECK(rows[0].back() == "slack");

  std::ostringstream ip;
  cfg.p_grid = {1.0, 2.0, 4.0, kInfinity};
  CHECK(lab::cmd_experiment_interpolation(ip, cfg) == lab::kExitOk);
  rows = parse_csv(ip.str());
  CHECK(rows.size() == 1 + 2 * 4);
  // p = 2: both bounds dominate; p = inf: the localization form is the theorem bound.
  CHECK(std::stod(rows[2][3]) >= std::stod(rows[2][2]) - 1e-9);
  CHECK(std::stod(rows[2][4]) >= std::stod(rows[2][2]) - 1e-9);
  CHECK(std::stod(rows[4][4]) == doctest::Approx(std::stod(rows[4][5])));

  std::ostringstream lb;
  cfg.k_grid = {1, 2};
  cfg.p_grid = {2.0, kInfinity};
  CHECK(lab::cmd_experiment_lowerbound(lb, cfg) == lab::kExitOk);
  rows = parse_csv(lb.str());
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::vector<std::string>{"k", "n", "m", "phi_lower", "phi_upper", "rho_inf", "rho_2",
                                            "eff_res_min", "eff_res_max", "localization"});
  CHECK(std::stod(rows[2][5]) > std::stod(rows[1][5]));

  std::ostringstream loc;
  CHECK(lab::cmd_experiment_localization(loc, cfg) == lab::kExitOk);
  CHECK(parse_csv(loc.str()).size() == 3);
}

TEST_CASE("output does not depend on the thread count") {
  lab::ExperimentConfig cfg = quiet();
  cfg.n_grid = {10, 12};
  cfg.seeds = {1, 2, 3};
  std::size_t saved = max_threads();
  set_max_threads(1);
  std::ostringstream serial;
  lab::cmd_experiment_upperbound(serial, cfg);
  set_max_threads(4);
  std::ostringstream threaded;
  lab::cmd_experiment_upperbound(threaded, cfg);
  std::vector<int> hits(100, 0);
  CHECK_THROWS_AS(parallel_for(hits.size(), [&](std::size_t i) {
                    hits[i] = 1;
                    if (i == 37) throw ArgumentError("worker failure");
                  }),
                  ArgumentError);
  set_max_threads(saved);
  CHECK(serial.str() == threaded.str());
}
