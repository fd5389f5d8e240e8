// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rbffd/error.hpp"
#include "rbffd/experiment.hpp"

using namespace rbffd;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("rbffd_test_experiment_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

std::size_t line_count(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n;
}

ExperimentConfig coarse(const fs::path& out) {
  ExperimentConfig c;
  c.h = 0.05;
  c.out_dir = out.string();
  return c;
}

bool agree_6_digits(double a, double b) {
  if (a == b) return true;
  return std::abs(a - b) <= 5e-7 * std::max(std::abs(a), std::abs(b));
}

}  // namespace

TEST_CASE("solve writes its artifacts") {
  const fs::path dir = scratch_dir("solve");
  const SolveResult r = run_solve(coarse(dir));
  CHECK(first_line(dir / "nodes.csv") == "x,y,boundary");
  CHECK(line_count(dir / "nodes.csv") == r.nodes.size() + 1);
  CHECK(first_line(dir / "signfield_n28.csv") == "x,y,e_poiss,e_lap,region");
  CHECK(line_count(dir / "signfield_n28.csv") == r.nodes.interior_count() + 1);

  const auto meta = nlohmann::json::parse(slurp(dir / "run.json"));
  CHECK(meta["command"] == "solve");
  CHECK(meta["version"] == kVersion);
  CHECK(meta["config"]["h"] == 0.05);
  CHECK(meta["node_count"] == r.nodes.size());
  CHECK(meta["timing"].contains("weights_s"));
  CHECK(r.evaluation.metrics.residual <= 1e-10);
}

TEST_CASE("dense and iterative solves give the same metrics") {
  ExperimentConfig c = coarse("");
  const Metrics it = run_solve(c).evaluation.metrics;
  c.solver = SolverKind::Dense;
  const Metrics dense = run_solve(c).evaluation.metrics;
  CHECK(agree_6_digits(it.e_poiss_max, dense.e_poiss_max));
  CHECK(agree_6_digits(it.e_poiss_avg, dense.e_poiss_avg));
  CHECK(agree_6_digits(it.e_lap_max, dense.e_lap_max));
  CHECK(agree_6_digits(it.e_lap_avg, dense.e_lap_avg));
  CHECK(agree_6_digits(it.dN_poiss, dense.dN_poiss));
  CHECK(agree_6_digits(it.dN_lap, dense.dN_lap));
}

TEST_CASE("a stencil below the basis size fails the solve") {
  ExperimentConfig c = coarse("");
  c.n = 9;
  try {
    (void)run_solve(c);
    FAIL("expected InsufficientStencil");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InsufficientStencil);
  }
}

TEST_CASE("sweep rows, schema and byte determinism") {
  const fs::path a = scratch_dir("sweep_a");
  const fs::path b = scratch_dir("sweep_b");
  ExperimentConfig c = coarse(a);
  c.n_min = 13;
  c.n_max = 22;
  const SweepResult r = run_sweep(c);
  CHECK(r.rows.size() == 10);
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    CHECK(r.rows[i].n == 13 + static_cast<int>(i));
    CHECK(r.rows[i].ok());
  }
  c.out_dir = b.string();
  (void)run_sweep(c);
  CHECK(first_line(a / "sweep.csv") == "n,e_poiss_max,e_poiss_avg,e_lap_max,e_lap_avg,dN_poiss,dN_lap,iters,residual");
  CHECK(line_count(a / "sweep.csv") == 11);
  CHECK(slurp(a / "sweep.csv") == slurp(b / "sweep.csv"));
  CHECK(slurp(a / "nodes.csv") == slurp(b / "nodes.csv"));
}

TEST_CASE("sweep records per-n failures and continues") {
  const fs::path dir = scratch_dir("sweep_fail");
  ExperimentConfig c = coarse(dir);
  c.h = 0.2;  // a handful of nodes, so large stencils cannot be formed
  c.n_min = 10;
  c.n_max = 40;
  const SweepResult r = run_sweep(c);
  REQUIRE(r.rows.size() == 31);
  CHECK(r.rows.front().ok());
  CHECK_FALSE(r.rows.back().ok());
  CHECK(r.rows.back().error->find("KTooLarge") == 0);
  CHECK(std::isnan(r.rows.back().e_poiss_max));
  const auto meta = nlohmann::json::parse(slurp(dir / "run.json"));
  CHECK(meta["errors"].size() > 0);
  CHECK(meta["errors"][0]["message"].get<std::string>().find("KTooLarge") == 0);
}

TEST_CASE("convergence requires three spacings") {
  ExperimentConfig c = coarse("");
  c.h_list = {0.05};
  try {
    (void)run_convergence(c);
    FAIL("expected TooFewPoints");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooFewPoints);
  }
}

TEST_CASE("convergence on coarse spacings") {
  const fs::path dir = scratch_dir("converge");
  ExperimentConfig c = coarse(dir);
  c.h_list = {0.1, 0.07, 0.05};
  c.n_list = {17, 28};
  c.seed = 5;
  const ConvergenceResult r = run_convergence(c);
  CHECK(r.rows.size() == 6);
  CHECK(r.seeds == std::vector<std::uint64_t>{5, 6, 7});
  REQUIRE(r.slopes.count(17) == 1);
  CHECK(r.slopes.at(17) > 0.5);
  CHECK(first_line(dir / "convergence.csv") == "h,n,e_poiss_max,e_poiss_avg,e_lap_avg,slope_note");
  CHECK(line_count(dir / "convergence.csv") == 7);
  const auto meta = nlohmann::json::parse(slurp(dir / "run.json"));
  CHECK(meta["node_sets"].size() == 3);
  CHECK(meta["node_sets"][1]["seed"] == 6);
}

TEST_CASE("log-log slope") {
  CHECK(log_log_slope({1, 2, 4}, {1, 4, 16}) == doctest::Approx(2.0));
  CHECK(log_log_slope({0.04, 0.02, 0.01}, {8e-3, 1e-3, 1.25e-4}) == doctest::Approx(3.0));
  CHECK_THROWS_AS((void)log_log_slope({1, 2}, {1, 2}), Error);
}

TEST_CASE("boundary split") {
  const fs::path dir = scratch_dir("split");
  ExperimentConfig c = coarse(dir);
  c.n_min = 26;
  c.n_max = 30;

  SUBCASE("requires a pinned region") {
    CHECK_THROWS_AS((void)run_boundary_split(c), Error);
  }
  SUBCASE("near-boundary pinned") {
    c.fixed_region = FixedRegion::NearBoundary;
    const SplitResult r = run_boundary_split(c);
    REQUIRE(r.rows.size() == 10);
    CHECK(r.near_count > 0);
    CHECK(r.far_count > 0);
    for (std::size_t k = 0; k < r.rows.size(); k += 2) {
      CHECK(r.rows[k].mode == "baseline");
      CHECK(r.rows[k + 1].mode == "near_fixed");
      CHECK(r.rows[k].metrics.n == r.rows[k + 1].metrics.n);
      if (r.rows[k].metrics.n == c.fixed_n) {
        CHECK(r.rows[k].metrics.e_poiss_max == r.rows[k + 1].metrics.e_poiss_max);
        CHECK(r.rows[k].metrics.dN_poiss == r.rows[k + 1].metrics.dN_poiss);
      } else {
        CHECK(r.rows[k].metrics.e_poiss_max != r.rows[k + 1].metrics.e_poiss_max);
      }
    }
    CHECK(first_line(dir / "split.csv") == "n,mode,e_poiss_max,e_poiss_avg,dN_poiss");
  }
  SUBCASE("far region pinned") {
    c.fixed_region = FixedRegion::Far;
    const SplitResult r = run_boundary_split(c);
    CHECK(r.rows[1].mode == "far_fixed");
  }
}

TEST_CASE("sign fields for several stencil sizes") {
  const fs::path dir = scratch_dir("signfield");
  ExperimentConfig c = coarse(dir);
  c.n_list = {17, 28};
  const SignFieldResult r = run_sign_field(c);
  CHECK(r.rows.size() == 2);
  CHECK(fs::exists(dir / "signfield_n17.csv"));
  CHECK(fs::exists(dir / "signfield_n28.csv"));
  CHECK(fs::exists(dir / "nodes.csv"));

  std::ifstream in(dir / "signfield_n17.csv");
  std::string line;
  std::getline(in, line);
  bool saw_near = false, saw_far = false;
  while (std::getline(in, line)) {
    const auto region = line.substr(line.rfind(',') + 1);
    CHECK((region == "near" || region == "far"));
    saw_near |= region == "near";
    saw_far |= region == "far";
  }
  CHECK(saw_near);
  CHECK(saw_far);
}

TEST_CASE("config JSON round trip and validation") {
  ExperimentConfig c;
  merge_json(nlohmann::json::parse(R"({"h": 0.02, "n_list": [10, 12], "solver": "dense",
                                       "fixed_region": "far", "center": [0, 1], "seed": 9})"),
             c);
  CHECK(c.h == 0.02);
  CHECK(c.n_list == std::vector<int>{10, 12});
  CHECK(c.solver == SolverKind::Dense);
  CHECK(c.fixed_region == FixedRegion::Far);
  CHECK(c.domain.center == Point2{0, 1});
  CHECK(c.seed == 9);
  CHECK(c.n == 28);  // untouched

  ExperimentConfig back;
  merge_json(nlohmann::json(c), back);
  CHECK(nlohmann::json(back) == nlohmann::json(c));

  CHECK_THROWS_AS(merge_json(nlohmann::json::parse(R"({"h": "x"})"), c), Error);
  CHECK_THROWS_AS(merge_json(nlohmann::json::parse(R"({"solver": "cg"})"), c), Error);

  ExperimentConfig bad;
  bad.n_min = 9;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = ExperimentConfig{};
  bad.r_split = 0.6;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = ExperimentConfig{};
  bad.h = 0.0;
  CHECK_THROWS_AS(bad.validate(), Error);
}
