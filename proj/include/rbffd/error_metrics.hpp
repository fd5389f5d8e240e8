// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rbffd/linear_system.hpp"
#include "rbffd/nodes.hpp"
#include "rbffd/stencil_weights.hpp"

namespace rbffd {

/// Manufactured Poisson problem on the unit-diameter disc:
/// u = sin(pi x) sin(pi y), f = lap u = -2 pi^2 u.
double exact_solution(Point2 p);
double exact_rhs(Point2 p);

/// u_hat_i - u(x_i) for interior nodes, in node order.
std::vector<double> signed_solution_error(std::span<const double> u_hat, const ScalarField& u_exact,
                                          const NodeSet& nodes);

/// sum_j w_ij u(x_j) - f(x_i) for interior nodes, in node order.
std::vector<double> signed_laplacian_error(const StencilWeights& table, const ScalarField& u_exact,
                                           const ScalarField& f, const NodeSet& nodes);

struct Aggregate {
  double max = 0.0;
  double avg = 0.0;
};

/// max |e| and (1/N_int) sum |e|. Throws EmptyInterior when N_int = 0.
Aggregate aggregate(std::span<const double> errors);

/// (#{e > 0} - #{e < 0}) / N_int. Throws EmptyInterior when N_int = 0.
double delta_n(std::span<const double> errors);

struct Extrema {
  std::vector<std::size_t> minima;
  std::vector<std::size_t> maxima;
};

/// Strict interior extrema of a sampled curve. A plateau counts once, at its
/// first index; the end samples are never reported. Throws TooShort below
/// three samples.
Extrema detect_local_extrema(std::span<const double> values);

struct ErrorReport {
  std::vector<double> e_poiss;
  std::vector<double> e_lap;
  double e_poiss_max = 0.0;
  double e_poiss_avg = 0.0;
  double e_lap_max = 0.0;
  double e_lap_avg = 0.0;
  double dN_poiss = 0.0;
  double dN_lap = 0.0;
  double h = 0.0;
};

ErrorReport make_error_report(const NodeSet& nodes, const StencilWeights& table,
                              std::span<const double> u_hat);

}  // namespace rbffd
