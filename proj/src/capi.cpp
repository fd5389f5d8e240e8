// SPDX-License-Identifier: Apache-2.0
#include "rbffd/rbffd.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <memory>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "rbffd/error.hpp"
#include "rbffd/experiment.hpp"
#include "rbffd/nodes.hpp"
#include "rbffd/stencil_weights.hpp"

struct rbffd_nodes {
  rbffd::NodeSet nodes;
};

struct rbffd_config {
  rbffd::ExperimentConfig config;
};

struct rbffd_result {
  std::vector<rbffd_row> rows;
  std::vector<int> minima;
  std::vector<int> maxima;
  std::map<int, double> slopes;
  std::string summary;
};

namespace {

thread_local std::string last_error;

rbffd_status fail(rbffd_status status, const std::string& message) {
  last_error = message;
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <class F>
rbffd_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return RBFFD_OK;
  } catch (const rbffd::Error& e) {
    return fail(static_cast<rbffd_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(RBFFD_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(RBFFD_ERR_INTERNAL, e.what());
  }
}

rbffd_row to_row(const rbffd::Metrics& m, rbffd_row_mode mode) {
  rbffd_row r{};
  r.n = m.n;
  r.h = m.h;
  r.mode = mode;
  r.e_poiss_max = m.e_poiss_max;
  r.e_poiss_avg = m.e_poiss_avg;
  r.e_lap_max = m.e_lap_max;
  r.e_lap_avg = m.e_lap_avg;
  r.dN_poiss = m.dN_poiss;
  r.dN_lap = m.dN_lap;
  r.iterations = m.iterations;
  r.residual = m.residual;
  r.ok = m.ok() ? 1 : 0;
  return r;
}

const char* mode_name(int mode) {
  switch (mode) {
    case RBFFD_MODE_BASELINE: return "baseline";
    case RBFFD_MODE_NEAR_FIXED: return "near_fixed";
    case RBFFD_MODE_FAR_FIXED: return "far_fixed";
    default: return "uniform";
  }
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s.empty() ? "-" : s;
}

void append_rows(std::ostringstream& out, const std::vector<rbffd_row>& rows, bool with_mode) {
  char line[256];
  std::snprintf(line, sizeof line, "%-8s%-6s", "h", "n");
  out << line;
  if (with_mode) {
    std::snprintf(line, sizeof line, "%-12s", "mode");
    out << line;
  }
  std::snprintf(line, sizeof line, "%-13s%-13s%-13s%-13s%-9s%-9s%s\n", "e_poiss_max", "e_poiss_avg", "e_lap_max",
                "e_lap_avg", "dN_poiss", "dN_lap", "iters");
  out << line;
  for (const rbffd_row& r : rows) {
    std::snprintf(line, sizeof line, "%-8g%-6d", r.h, r.n);
    out << line;
    if (with_mode) {
      std::snprintf(line, sizeof line, "%-12s", mode_name(r.mode));
      out << line;
    }
    std::snprintf(line, sizeof line, "%-13.4e%-13.4e%-13.4e%-13.4e%-+9.3f%-+9.3f%d%s\n", r.e_poiss_max,
                  r.e_poiss_avg, r.e_lap_max, r.e_lap_avg, r.dN_poiss, r.dN_lap, r.iterations,
                  r.ok ? "" : "  FAILED");
    out << line;
  }
}

rbffd_result* make_result(const rbffd::ExperimentConfig& c, rbffd_experiment kind) {
  auto result = std::make_unique<rbffd_result>();
  std::ostringstream out;
  switch (kind) {
    case RBFFD_EXPERIMENT_SOLVE: {
      const auto r = rbffd::run_solve(c);
      result->rows.push_back(to_row(r.evaluation.metrics, RBFFD_MODE_UNIFORM));
      out << "nodes: " << r.nodes.size() << " (interior " << r.nodes.interior_count() << ")\n";
      out << "solver: " << rbffd::to_string(c.solver) << ", residual " << r.evaluation.metrics.residual << "\n";
      break;
    }
    case RBFFD_EXPERIMENT_SWEEP: {
      const auto r = rbffd::run_sweep(c);
      for (const auto& m : r.rows) result->rows.push_back(to_row(m, RBFFD_MODE_UNIFORM));
      result->minima = r.minima;
      result->maxima = r.maxima;
      out << "nodes: " << r.node_count << " (interior " << r.interior_count << ")\n";
      break;
    }
    case RBFFD_EXPERIMENT_CONVERGE: {
      const auto r = rbffd::run_convergence(c);
      for (const auto& m : r.rows) result->rows.push_back(to_row(m, RBFFD_MODE_UNIFORM));
      result->slopes = r.slopes;
      break;
    }
    case RBFFD_EXPERIMENT_SPLIT: {
      const auto r = rbffd::run_boundary_split(c);
      for (const auto& row : r.rows) {
        const rbffd_row_mode mode = row.mode == "baseline"     ? RBFFD_MODE_BASELINE
                                    : row.mode == "near_fixed" ? RBFFD_MODE_NEAR_FIXED
                                                               : RBFFD_MODE_FAR_FIXED;
        result->rows.push_back(to_row(row.metrics, mode));
      }
      result->minima = r.fixed_minima;
      out << "interior nodes: near " << r.near_count << ", far " << r.far_count << "\n";
      out << "baseline minima at n = " << join(r.baseline_minima) << "\n";
      break;
    }
    case RBFFD_EXPERIMENT_SIGNFIELD: {
      const auto r = rbffd::run_sign_field(c);
      for (const auto& m : r.rows) result->rows.push_back(to_row(m, RBFFD_MODE_UNIFORM));
      break;
    }
    default:
      throw rbffd::Error(rbffd::ErrorCode::InvalidArgument, "unknown experiment kind");
  }
  append_rows(out, result->rows, kind == RBFFD_EXPERIMENT_SPLIT);
  if (kind == RBFFD_EXPERIMENT_SWEEP) {
    out << "minima at n = " << join(result->minima) << "\nmaxima at n = " << join(result->maxima) << "\n";
  }
  if (kind == RBFFD_EXPERIMENT_SPLIT) out << "pinned-region minima at n = " << join(result->minima) << "\n";
  for (const auto& [n, s] : result->slopes) {
    char line[64];
    std::snprintf(line, sizeof line, "slope n=%d: %.4f\n", n, s);
    out << line;
  }
  result->summary = out.str();
  return result.release();
}

nlohmann::json parse_value(const std::string& key, const std::string& value) {
  auto split = [&](auto convert) {
    nlohmann::json arr = nlohmann::json::array();
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) arr.push_back(convert(item));
    }
    return arr;
  };
  try {
    if (key == "h" || key == "radius" || key == "tol" || key == "r_split") return std::stod(value);
    if (key == "n" || key == "n_min" || key == "n_max" || key == "k_candidates" || key == "degree" ||
        key == "fixed_n") {
      return std::stoi(value);
    }
    if (key == "seed") return std::stoull(value);
    if (key == "solver" || key == "fixed_region" || key == "out") return value;
    if (key == "h_list" || key == "center") return split([](const std::string& s) { return std::stod(s); });
    if (key == "n_list") return split([](const std::string& s) { return std::stoi(s); });
  } catch (const std::logic_error&) {
    throw rbffd::Error(rbffd::ErrorCode::InvalidArgument, "cannot parse value '" + value + "' for " + key);
  }
  throw rbffd::Error(rbffd::ErrorCode::InvalidArgument, "unknown configuration key '" + key + "'");
}

}  // namespace

extern "C" {

const char* rbffd_version(void) { return rbffd::kVersion; }

const char* rbffd_status_name(rbffd_status status) {
  if (status == RBFFD_OK) return "Ok";
  if (status == RBFFD_ERR_INTERNAL) return "Internal";
  return rbffd::to_string(static_cast<rbffd::ErrorCode>(status));
}

const char* rbffd_last_error(void) { return last_error.c_str(); }

rbffd_status rbffd_nodes_generate(double center_x, double center_y, double radius, double h, uint64_t seed,
                                  int k_candidates, rbffd_nodes** out) {
  if (!out) return fail(RBFFD_ERR_INVALID_ARGUMENT, "null output handle");
  *out = nullptr;
  return guarded([&] {
    const rbffd::DiscDomain domain{{center_x, center_y}, radius};
    *out = new rbffd_nodes{rbffd::discretize_disc(domain, h, seed, k_candidates)};
  });
}

void rbffd_nodes_free(rbffd_nodes* nodes) { delete nodes; }

size_t rbffd_nodes_count(const rbffd_nodes* nodes) { return nodes ? nodes->nodes.size() : 0; }

size_t rbffd_nodes_interior_count(const rbffd_nodes* nodes) {
  return nodes ? nodes->nodes.interior_count() : 0;
}

rbffd_status rbffd_nodes_point(const rbffd_nodes* nodes, size_t index, double* x, double* y, int* boundary) {
  if (!nodes || index >= nodes->nodes.size()) return fail(RBFFD_ERR_INVALID_ARGUMENT, "node index out of range");
  if (x) *x = nodes->nodes.points[index].x;
  if (y) *y = nodes->nodes.points[index].y;
  if (boundary) *boundary = nodes->nodes.boundary[index] ? 1 : 0;
  last_error.clear();
  return RBFFD_OK;
}

rbffd_status rbffd_nodes_write_csv(const rbffd_nodes* nodes, const char* path) {
  if (!nodes || !path) return fail(RBFFD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw rbffd::Error(rbffd::ErrorCode::Io, std::string("cannot open ") + path);
    rbffd::write_nodes_csv(out, nodes->nodes);
  });
}

rbffd_status rbffd_laplacian_weights(const double* xs, const double* ys, size_t count, double center_x,
                                     double center_y, int degree, double* weights) {
  if (!xs || !ys || !weights) return fail(RBFFD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    std::vector<rbffd::Point2> points(count);
    for (size_t i = 0; i < count; ++i) points[i] = {xs[i], ys[i]};
    const auto w = rbffd::compute_laplacian_weights(points, {center_x, center_y}, rbffd::MonomialBasis(degree));
    std::copy(w.begin(), w.end(), weights);
  });
}

rbffd_status rbffd_config_create(rbffd_config** out) {
  if (!out) return fail(RBFFD_ERR_INVALID_ARGUMENT, "null output handle");
  return guarded([&] { *out = new rbffd_config{}; });
}

void rbffd_config_free(rbffd_config* config) { delete config; }

rbffd_status rbffd_config_merge_json(rbffd_config* config, const char* json) {
  if (!config || !json) return fail(RBFFD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(json);
    } catch (const nlohmann::json::parse_error& e) {
      throw rbffd::Error(rbffd::ErrorCode::InvalidArgument, std::string("invalid JSON: ") + e.what());
    }
    rbffd::ExperimentConfig updated = config->config;
    rbffd::merge_json(j, updated);
    config->config = updated;
  });
}

rbffd_status rbffd_config_set(rbffd_config* config, const char* key, const char* value) {
  if (!config || !key || !value) return fail(RBFFD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    rbffd::ExperimentConfig updated = config->config;
    rbffd::merge_json({{key, parse_value(key, value)}}, updated);
    config->config = updated;
  });
}

rbffd_status rbffd_config_to_json(const rbffd_config* config, char** out) {
  if (!config || !out) return fail(RBFFD_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const std::string text = nlohmann::json(config->config).dump(2);
    char* buf = new char[text.size() + 1];
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *out = buf;
  });
}

void rbffd_string_free(char* text) { delete[] text; }

rbffd_status rbffd_run(const rbffd_config* config, rbffd_experiment kind, rbffd_result** out) {
  if (!config || !out) return fail(RBFFD_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = make_result(config->config, kind); });
}

void rbffd_result_free(rbffd_result* result) { delete result; }

size_t rbffd_result_row_count(const rbffd_result* result) { return result ? result->rows.size() : 0; }

rbffd_status rbffd_result_row(const rbffd_result* result, size_t index, rbffd_row* out) {
  if (!result || !out || index >= result->rows.size()) {
    return fail(RBFFD_ERR_INVALID_ARGUMENT, "row index out of range");
  }
  *out = result->rows[index];
  last_error.clear();
  return RBFFD_OK;
}

size_t rbffd_result_minima(const rbffd_result* result, int* ns, size_t capacity) {
  if (!result) return 0;
  for (size_t i = 0; ns && i < capacity && i < result->minima.size(); ++i) ns[i] = result->minima[i];
  return result->minima.size();
}

size_t rbffd_result_maxima(const rbffd_result* result, int* ns, size_t capacity) {
  if (!result) return 0;
  for (size_t i = 0; ns && i < capacity && i < result->maxima.size(); ++i) ns[i] = result->maxima[i];
  return result->maxima.size();
}

rbffd_status rbffd_result_slope(const rbffd_result* result, int n, double* slope) {
  if (!result || !slope) return fail(RBFFD_ERR_INVALID_ARGUMENT, "null argument");
  const auto it = result->slopes.find(n);
  if (it == result->slopes.end()) return fail(RBFFD_ERR_INVALID_ARGUMENT, "no slope for n=" + std::to_string(n));
  *slope = it->second;
  last_error.clear();
  return RBFFD_OK;
}

const char* rbffd_result_summary(const rbffd_result* result) { return result ? result->summary.c_str() : ""; }

}  // extern "C"
