// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rbffd/error_metrics.hpp"
#include "rbffd/linear_system.hpp"
#include "rbffd/nodes.hpp"

namespace rbffd {

inline constexpr const char* kVersion = "0.1.0";

enum class FixedRegion { None, NearBoundary, Far };

const char* to_string(FixedRegion region) noexcept;
FixedRegion fixed_region_from_string(const std::string& name);

struct ExperimentConfig {
  DiscDomain domain{};
  double h = 0.01;
  int n = 28;
  int n_min = 13;
  int n_max = 69;
  std::uint64_t seed = 0;
  int k_candidates = kDefaultCandidates;
  int degree = 3;
  SolverKind solver = SolverKind::Iterative;
  double tol = kDefaultTolerance;
  double r_split = 0.4;
  FixedRegion fixed_region = FixedRegion::None;
  int fixed_n = 28;
  std::vector<double> h_list{0.04, 0.02, 0.01};
  std::vector<int> n_list{17, 28, 35, 46};
  /// Empty disables all file output.
  std::string out_dir = ".";

  /// Throws InvalidArgument on violated invariants.
  void validate() const;
};

void to_json(nlohmann::json& j, const ExperimentConfig& c);
/// Keys absent from `j` keep their current value in `c`.
void merge_json(const nlohmann::json& j, ExperimentConfig& c);

/// Summary of one (node set, stencil-size map) evaluation.
struct Metrics {
  int n = 0;
  double h = 0.0;
  double e_poiss_max = 0.0;
  double e_poiss_avg = 0.0;
  double e_lap_max = 0.0;
  double e_lap_avg = 0.0;
  double dN_poiss = 0.0;
  double dN_lap = 0.0;
  int iterations = 0;
  double residual = 0.0;
  /// Set when this configuration failed; metrics are NaN then.
  std::optional<std::string> error;

  bool ok() const { return !error.has_value(); }
};

/// Everything produced by a single solve; kept for sign fields.
struct Evaluation {
  Metrics metrics;
  ErrorReport report;
  SolveReport solve;
};

/// Wall-clock seconds per pipeline stage, summed over a run.
struct StageTimes {
  double nodes = 0.0;
  double weights = 0.0;
  double solve = 0.0;
  double metrics = 0.0;
};

/// Builds weights for the given per-node stencil sizes, assembles and solves
/// the Poisson problem, and evaluates the error report.
Evaluation evaluate(const NodeSet& nodes, const NeighborIndex& index, const std::vector<int>& n_per_node,
                    const ExperimentConfig& config, StageTimes* times = nullptr);

struct SolveResult {
  NodeSet nodes;
  Evaluation evaluation;
};

struct SweepResult {
  std::vector<Metrics> rows;
  /// Stencil sizes at detected local extrema of e_poiss_max(n).
  std::vector<int> minima;
  std::vector<int> maxima;
  std::size_t node_count = 0;
  std::size_t interior_count = 0;
};

struct ConvergenceResult {
  std::vector<Metrics> rows;                  // grouped by n, then h in list order
  std::map<int, double> slopes;               // least-squares d log e_poiss_max / d log h
  std::vector<std::uint64_t> seeds;           // node seed per h
};

struct SplitRow {
  std::string mode;  // baseline, near_fixed or far_fixed
  Metrics metrics;
};

struct SplitResult {
  std::vector<SplitRow> rows;
  std::vector<int> baseline_minima;
  std::vector<int> fixed_minima;
  std::size_t near_count = 0;  // interior nodes per region
  std::size_t far_count = 0;
};

struct SignFieldResult {
  std::vector<Metrics> rows;  // one per entry of n_list
};

SolveResult run_solve(const ExperimentConfig& config);
SweepResult run_sweep(const ExperimentConfig& config);
ConvergenceResult run_convergence(const ExperimentConfig& config);
SplitResult run_boundary_split(const ExperimentConfig& config);
SignFieldResult run_sign_field(const ExperimentConfig& config);

/// Least-squares slope of log(y) against log(x). Throws TooFewPoints below
/// three samples.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Stencil sizes at the interior extrema of e_poiss_max over successful rows.
void curve_extrema(const std::vector<Metrics>& rows, std::vector<int>& minima, std::vector<int>& maxima);

}  // namespace rbffd
