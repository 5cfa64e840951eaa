// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ohmlab/diagnostics.hpp"
#include "ohmlab/graph.hpp"
#include "ohmlab/routing.hpp"
#include "ohmlab/sparsify.hpp"
#include "oracles.hpp"

using namespace ohmlab;

namespace {

struct Named {
  std::string id;
  Multigraph g;
};

// Tolerances, pinned.
constexpr double kBoundSlackRel = 1e-6;
constexpr double kSymmetryRel = 1e-6;
constexpr double kOracleAbs = 1e-8;
constexpr double kInterpolationAbs = 1e-6;
constexpr double kIntegralGapRel = 1e-10;
constexpr double kCrossingAbs = 1e-8;
constexpr int kThresholdSamples = 50;
constexpr double kExpectationAbs = 1e-12;
constexpr double kHarmonicMargin = 1e-10;
constexpr double kSchurEnergyAbs = 1e-10;
constexpr double kSolverTol = 1e-10;
constexpr double kPinvRel = 1e-4;
constexpr double kGoldenAbs = 1e-8;

std::vector<Named> desk_scale_graphs() {
  std::vector<Named> out;
  for (int d : {3, 4}) {
    for (int n : {10, 12, 16, 20}) {
      for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        std::ostringstream id;
        id << "regular(n=" << n << ",d=" << d << ",seed=" << seed << ")";
        out.push_back({id.str(), gen_random_regular(n, d, seed)});
      }
    }
  }
  return out;
}

std::vector<Named> named_graphs() {
  return {{"C4", cycle_graph(4)}, {"K3", complete_graph(3)}, {"Petersen", petersen_graph()}};
}

double rel_gap(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

struct Outcome {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

int failures = 0;

void criterion(int number, const std::string& title, const std::function<Outcome()>& body) {
  auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!o.pass) ++failures;
  std::printf("%s criterion %d: %s [%.2fs]%s%s\n", o.pass ? "PASS" : "FAIL", number, title.c_str(), seconds,
              o.detail.empty() ? "" : " -- ", o.detail.c_str());
  std::fflush(stdout);
}

}  // namespace

int main() {
  const std::vector<Named> desk = desk_scale_graphs();
  std::vector<double> phi_exact;
  for (const Named& c : desk) phi_exact.push_back(conductance_exact(c.g).phi);

  criterion(1, "rho_inf <= 3 ln(vol)/phi on 40 random regular graphs", [&] {
    Outcome o;
    double worst = kInfinity;
    for (std::size_t i = 0; i < desk.size(); ++i) {
      const Multigraph& g = desk[i].g;
      double bound = upper_bound_formula(2.0 * g.total_weight(), phi_exact[i]);
      double slack = bound - rho_infinity(g, kSolverTol);
      worst = std::min(worst, slack / bound);
      if (slack < -kBoundSlackRel * bound) o.fail(desk[i].id + " slack " + std::to_string(slack));
    }
    if (o.pass) o.detail = "min relative slack " + std::to_string(worst);
    return o;
  });

  criterion(2, "rho_1 = rho_inf on unit-weight graphs", [&] {
    Outcome o;
    std::vector<Named> graphs = desk;
    for (Named& n : named_graphs()) graphs.push_back(std::move(n));
    for (const Named& c : graphs) {
      double r1 = rho_from_projection(projection_matrix(c.g, kSolverTol), 1.0);
      double rinf = rho_infinity(c.g, kSolverTol);
      if (rel_gap(r1, rinf) > kSymmetryRel) o.fail(c.id + ": " + std::to_string(r1) + " vs " + std::to_string(rinf));
    }
    return o;
  });

  criterion(3, "per-edge rho_inf equals dense ||abs(Pi)||_inf for m <= 30", [&] {
    Outcome o;
    std::vector<Named> graphs;
    for (const Named& c : desk) {
      if (c.g.num_edges() <= 30) graphs.push_back(c);
    }
    for (Named& n : named_graphs()) graphs.push_back(std::move(n));
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      graphs.push_back({"weighted(seed=" + std::to_string(seed) + ")", oracle::random_connected(10, 14, 4, seed)});
    }
    double worst = 0.0;
    for (const Named& c : graphs) {
      // |Pi W| row sums; Pi W is Pi on unit-weight graphs.
      Eigen::MatrixXd pi = oracle::projection(c.g) * oracle::weights(c.g).asDiagonal();
      double dense = pi.cwiseAbs().rowwise().sum().maxCoeff();
      double gap = std::abs(dense - rho_infinity(c.g, kSolverTol));
      worst = std::max(worst, gap);
      if (gap > kOracleAbs) o.fail(c.id + " gap " + std::to_string(gap));
    }
    if (o.pass) o.detail = std::to_string(graphs.size()) + " graphs, max gap " + std::to_string(worst);
    return o;
  });

  criterion(4, "Riesz-Thorin bounds for p in {1.5, 2, 3, 4, 8}", [&] {
    Outcome o;
    std::vector<Named> graphs;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      graphs.push_back({"regular(16,3," + std::to_string(seed) + ")", gen_random_regular(16, 3, seed)});
      graphs.push_back({"random(seed=" + std::to_string(seed) + ")", oracle::random_connected(14, 20 + 5 * static_cast<int>(seed), 1, 40 + seed)});
    }
    for (const Named& c : graphs) {
      if (c.g.num_edges() > 60) o.fail(c.id + " has more than 60 edges");
      Eigen::MatrixXd pi = projection_matrix(c.g, kSolverTol);
      double r1 = rho_from_projection(pi, 1.0);
      double r2 = rho_from_projection(pi, 2.0);
      double rinf = rho_from_projection(pi, kInfinity);
      for (double p : {1.5, 2.0, 3.0, 4.0, 8.0}) {
        double rp = rho_from_projection(pi, p);
        double rt = std::pow(r1, 1.0 / p) * std::pow(rinf, 1.0 - 1.0 / p);
        if (rp > rt + kInterpolationAbs) o.fail(c.id + " p=" + std::to_string(p) + " exceeds rho_1/rho_inf bound");
        if (p > 2.0) {
          double loc = std::pow(r2, 2.0 / p) * std::pow(rinf, 1.0 - 2.0 / p);
          if (rp > loc + kInterpolationAbs) o.fail(c.id + " p=" + std::to_string(p) + " exceeds rho_2/rho_inf bound");
        }
      }
    }
    return o;
  });

  criterion(5, "threshold-cut identities on every unit edge demand", [&] {
    Outcome o;
    int demands = 0;
    for (std::size_t i = 0; i < desk.size(); ++i) {
      const Multigraph& g = desk[i].g;
      LaplacianSolver solver(g);
      for (int e = 0; e < g.num_edges(); ++e) {
        ++demands;
        Demand chi = Demand::across_edge(g, e);
        ThresholdProfile tp = threshold_profile(g, solver, chi, kSolverTol);
        IntegralIdentity id = check_integral_identity(tp);
        if (id.abs_gap > kIntegralGapRel * id.lhs) o.fail(desk[i].id + " edge " + std::to_string(e) + " integral gap");
        if (check_unit_flow_across_cuts(tp, chi, kThresholdSamples) > kCrossingAbs) {
          o.fail(desk[i].id + " edge " + std::to_string(e) + " crossing flow");
        }
        DeltaBoundReport r = check_delta_bound(tp, phi_exact[i], kThresholdSamples);
        if (!r.ok()) {
          const auto& v = r.violations.front();
          o.fail(desk[i].id + " edge " + std::to_string(e) + (v.cauchy_schwarz ? " derivative" : " delta") +
                 " bound at t=" + std::to_string(v.t));
        }
      }
    }
    if (o.pass) o.detail = std::to_string(demands) + " demands";
    return o;
  });

  criterion(6, "gadget unions: rho_inf rises, resistances bounded, conductance falls", [&] {
    Outcome o;
    Multigraph base = gen_random_regular(10, 3, 1);
    double prev_rho = 0.0;
    double prev_phi = kInfinity;
    std::ostringstream trace;
    for (int k = 1; k <= 4; ++k) {
      Multigraph g = graph_union(base, gadget_subdivide(base, k));
      double rho = rho_infinity(g, kSolverTol);
      double phi_upper = g.num_vertices() <= GraphLimits{}.max_exact_conductance_vertices
                             ? conductance_exact(g).phi
                             : conductance_bounds(g).upper.phi;
      for (const Edge& e : base.edges()) {
        double r = effective_resistance(g, e.tail, e.head, kSolverTol);
        if (r < 0.2 || r > 2.0) o.fail("k=" + std::to_string(k) + " resistance " + std::to_string(r));
      }
      if (!(rho > prev_rho)) o.fail("rho_inf not increasing at k=" + std::to_string(k));
      if (!(phi_upper < prev_phi)) o.fail("conductance upper bound not decreasing at k=" + std::to_string(k));
      trace << (k > 1 ? "; " : "") << "k=" << k << " rho=" << rho << " phi<=" << phi_upper;
      prev_rho = rho;
      prev_phi = phi_upper;
    }
    if (o.pass) o.detail = trace.str();
    return o;
  });

  criterion(7, "localization <= rho_inf and <= min(3 ln(vol)/phi, ln(n)^2 + 10)", [&] {
    Outcome o;
    for (const Named& c : named_graphs()) {
      if (localization(c.g, kSolverTol) > rho_infinity(c.g, kSolverTol) * (1.0 + kSymmetryRel)) {
        o.fail(c.id + " localization above rho_inf");
      }
    }
    double worst_log = 0.0;
    for (std::size_t i = 0; i < desk.size(); ++i) {
      const Multigraph& g = desk[i].g;
      double loc = localization(g, kSolverTol);
      double rho = rho_infinity(g, kSolverTol);
      double thm = upper_bound_formula(2.0 * g.total_weight(), phi_exact[i]);
      double log_n = std::log(static_cast<double>(g.num_vertices()));
      double log_bound = log_n * log_n + 10.0;
      worst_log = std::max(worst_log, loc / log_bound);
      if (loc > rho * (1.0 + kSymmetryRel)) o.fail(desk[i].id + " localization above rho_inf");
      if (loc > std::min(thm, log_bound)) o.fail(desk[i].id + " localization above bound");
    }
    if (o.pass) o.detail = "max localization / (ln(n)^2 + 10) = " + std::to_string(worst_log);
    return o;
  });

  criterion(8, "appendix lemma suite", [&] {
    Outcome o;
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    // (a) expected threshold cut, two ways.
    for (int gi = 0; gi < 20; ++gi) {
      Multigraph g = oracle::random_connected(12, 14, 3, 1000 + static_cast<std::uint64_t>(gi));
      for (int xi = 0; xi < 10; ++xi) {
        Vector x(12);
        for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = unit(rng);
        ExpectedCut ec = expected_cut_l1(g, x);
        if (std::abs(ec.closed_form - ec.integrated) > kExpectationAbs * std::max(1.0, ec.closed_form)) {
          o.fail("(a) expectation mismatch on graph " + std::to_string(gi));
        }
      }
    }
    auto random_partition = [&](int n, int max_f) {
      std::vector<Vertex> f;
      for (int v = 0; v < n && static_cast<int>(f.size()) < max_f; ++v) {
        if (rng() % 2 == 0) f.push_back(v);
      }
      if (static_cast<int>(f.size()) == n) f.pop_back();
      VertexSet fs(n, f);
      return Partition(n, fs.complement().members(), f);
    };
    // (b) capping.
    std::uniform_real_distribution<double> wide(-1.0, 2.0);
    for (int t = 0; t < 1000; ++t) {
      Multigraph g = oracle::random_connected(8, 6, 3, 2000 + static_cast<std::uint64_t>(t));
      Partition part = random_partition(8, 8);
      Vector x(static_cast<Eigen::Index>(part.terminals().size()));
      for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = unit(rng);
      Vector y(static_cast<Eigen::Index>(part.eliminated().size()));
      for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = wide(rng);
      Vector capped = cap_to_unit_box(y);
      if (l1_objective(g, part, x, capped) > l1_objective(g, part, x, y) ||
          energy_objective(g, part, x, capped) > energy_objective(g, part, x, y)) {
        o.fail("(b) capping increased an objective in trial " + std::to_string(t));
      }
    }
    // (c) minimum cut against 2^|F| enumeration.
    for (int t = 0; t < 50; ++t) {
      Multigraph g = oracle::random_connected(10, 10, 3, 3000 + static_cast<std::uint64_t>(t));
      Partition part = random_partition(10, 6);
      Vector x(static_cast<Eigen::Index>(part.terminals().size()));
      for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = static_cast<double>(rng() & 1U);
      if (l1_extension_min(g, part, x).value != oracle::binary_l1_minimum(g, part, x).value) {
        o.fail("(c) min-cut value differs from brute force in instance " + std::to_string(t));
      }
    }
    // (d) harmonic extension box and Schur energy identity.
    for (int t = 0; t < 50; ++t) {
      Multigraph g = oracle::random_connected(12, 12, 4, 4000 + static_cast<std::uint64_t>(t));
      Partition part = random_partition(12, 8);
      Vector x(static_cast<Eigen::Index>(part.terminals().size()));
      for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = unit(rng);
      Vector y = harmonic_extension(g, part, x);
      if (y.size() > 0 && (y.minCoeff() < -kHarmonicMargin || y.maxCoeff() > 1.0 + kHarmonicMargin)) {
        o.fail("(d) harmonic extension left the box in instance " + std::to_string(t));
      }
      double gap = std::abs(energy_objective(g, part, x, y) - x.dot(schur_complement(g, part) * x));
      if (gap > kSchurEnergyAbs) o.fail("(d) Schur energy gap " + std::to_string(gap));
    }
    return o;
  });

  criterion(9, "Laplacian solver residual and pseudoinverse agreement", [&] {
    Outcome o;
    std::mt19937_64 rng(99);
    std::normal_distribution<double> normal;
    int dense_checks = 0;
    for (int t = 0; t < 100; ++t) {
      int n = 6 + t % 35;
      Multigraph g = oracle::random_connected(n, n / 2 + t % 7, 1 + t % 9, 5000 + static_cast<std::uint64_t>(t));
      Vector b(n);
      for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = normal(rng);
      b.array() -= b.mean();
      LaplacianSolver solver(g);
      Vector x = solver.solve(b, kSolverTol).solution;
      if ((solver.matrix() * x - b).norm() > kSolverTol * b.norm()) o.fail("residual above tol in pair " + std::to_string(t));
      if (n <= 12) {
        ++dense_checks;
        Vector ref = oracle::pinv(oracle::dense_laplacian(g)) * b;
        if ((x - ref).norm() > kPinvRel * ref.norm()) o.fail("pseudoinverse disagreement in pair " + std::to_string(t));
      }
    }
    if (o.pass) o.detail = std::to_string(dense_checks) + " dense comparisons";
    return o;
  });

  criterion(10, "golden values", [&] {
    Outcome o;
    if (std::abs(oracle::rho_infinity(complete_graph(3)) - 4.0 / 3.0) > kGoldenAbs) o.fail("oracle K3");
    if (std::abs(oracle::rho_infinity(cycle_graph(4)) - 1.5) > kGoldenAbs) o.fail("oracle C4");
    if (std::abs(rho_infinity(complete_graph(3)) - 4.0 / 3.0) > kGoldenAbs) o.fail("K3 rho_inf");
    if (std::abs(rho_infinity(cycle_graph(4)) - 1.5) > kGoldenAbs) o.fail("C4 rho_inf");
    auto pairs = laplacian_edges(schur_complement(path_graph(3), Partition(3, {0, 2}, {1})));
    if (pairs.size() != 1 || pairs[0].weight != 0.5) o.fail("path Schur weight is not exactly 1/2");
    return o;
  });

  std::printf("%s: %d of 10 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
