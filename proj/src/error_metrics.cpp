// SPDX-License-Identifier: Apache-2.0
#include "rbffd/error_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rbffd/error.hpp"

namespace rbffd {

double exact_solution(Point2 p) {
  return std::sin(std::numbers::pi * p.x) * std::sin(std::numbers::pi * p.y);
}

double exact_rhs(Point2 p) {
  return -2.0 * std::numbers::pi * std::numbers::pi * exact_solution(p);
}

std::vector<double> signed_solution_error(std::span<const double> u_hat, const ScalarField& u_exact,
                                          const NodeSet& nodes) {
  std::vector<double> e;
  e.reserve(nodes.interior_count());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!nodes.boundary[i]) e.push_back(u_hat[i] - u_exact(nodes.points[i]));
  }
  return e;
}

std::vector<double> signed_laplacian_error(const StencilWeights& table, const ScalarField& u_exact,
                                           const ScalarField& f, const NodeSet& nodes) {
  std::vector<double> samples(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) samples[i] = u_exact(nodes.points[i]);

  std::vector<double> e;
  e.reserve(nodes.interior_count());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes.boundary[i]) continue;
    const auto& ids = table.stencils.ids[i];
    const auto& w = table.weights.w[i];
    double lap = 0.0;
    for (std::size_t k = 0; k < ids.size(); ++k) lap += w[k] * samples[ids[k]];
    e.push_back(lap - f(nodes.points[i]));
  }
  return e;
}

Aggregate aggregate(std::span<const double> errors) {
  if (errors.empty()) throw Error(ErrorCode::EmptyInterior, "no interior nodes to aggregate");
  Aggregate a;
  double sum = 0.0;
  for (double e : errors) {
    a.max = std::max(a.max, std::abs(e));
    sum += std::abs(e);
  }
  a.avg = sum / static_cast<double>(errors.size());
  return a;
}

double delta_n(std::span<const double> errors) {
  if (errors.empty()) throw Error(ErrorCode::EmptyInterior, "no interior nodes for delta N");
  long balance = 0;
  for (double e : errors) {
    if (e > 0.0) ++balance;
    else if (e < 0.0) --balance;
  }
  return static_cast<double>(balance) / static_cast<double>(errors.size());
}

Extrema detect_local_extrema(std::span<const double> values) {
  if (values.size() < 3) throw Error(ErrorCode::TooShort, "need at least 3 samples for extrema");

  // Collapse runs of equal values; a run is an extremum if both neighbouring
  // runs exist and lie on the same side of it.
  struct Run {
    std::size_t first;
    double value;
  };
  std::vector<Run> runs;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (runs.empty() || values[i] != runs.back().value) runs.push_back({i, values[i]});
  }

  Extrema out;
  for (std::size_t r = 1; r + 1 < runs.size(); ++r) {
    const double prev = runs[r - 1].value;
    const double here = runs[r].value;
    const double next = runs[r + 1].value;
    if (here < prev && here < next) out.minima.push_back(runs[r].first);
    if (here > prev && here > next) out.maxima.push_back(runs[r].first);
  }
  return out;
}

ErrorReport make_error_report(const NodeSet& nodes, const StencilWeights& table,
                              std::span<const double> u_hat) {
  ErrorReport report;
  report.h = nodes.h;
  report.e_poiss = signed_solution_error(u_hat, exact_solution, nodes);
  report.e_lap = signed_laplacian_error(table, exact_solution, exact_rhs, nodes);
  const Aggregate poiss = aggregate(report.e_poiss);
  const Aggregate lap = aggregate(report.e_lap);
  report.e_poiss_max = poiss.max;
  report.e_poiss_avg = poiss.avg;
  report.e_lap_max = lap.max;
  report.e_lap_avg = lap.avg;
  report.dN_poiss = delta_n(report.e_poiss);
  report.dN_lap = delta_n(report.e_lap);
  return report;
}

}  // namespace rbffd
