// SPDX-License-Identifier: Apache-2.0
#include "rbffd/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "rbffd/error.hpp"
#include "rbffd/spatial_index.hpp"

namespace rbffd {

namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

class Stopwatch {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

std::string fmt_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Metrics failed_metrics(int n, double h, const std::string& what) {
  Metrics m;
  m.n = n;
  m.h = h;
  m.e_poiss_max = m.e_poiss_avg = m.e_lap_max = m.e_lap_avg = kNaN;
  m.dN_poiss = m.dN_lap = m.residual = kNaN;
  m.error = what;
  return m;
}

nlohmann::json metrics_json(const Metrics& m) {
  nlohmann::json j = {{"n", m.n},
                      {"h", m.h},
                      {"e_poiss_max", m.e_poiss_max},
                      {"e_poiss_avg", m.e_poiss_avg},
                      {"e_lap_max", m.e_lap_max},
                      {"e_lap_avg", m.e_lap_avg},
                      {"dN_poiss", m.dN_poiss},
                      {"dN_lap", m.dN_lap},
                      {"iterations", m.iterations},
                      {"residual", m.residual}};
  if (m.error) j["error"] = *m.error;
  return j;
}

nlohmann::json errors_json(const std::vector<Metrics>& rows) {
  nlohmann::json errors = nlohmann::json::array();
  for (const Metrics& m : rows) {
    if (m.error) errors.push_back({{"n", m.n}, {"h", m.h}, {"message", *m.error}});
  }
  return errors;
}

nlohmann::json times_json(const StageTimes& t) {
  return {{"nodes_s", t.nodes}, {"weights_s", t.weights}, {"solve_s", t.solve}, {"metrics_s", t.metrics}};
}

bool writes_files(const ExperimentConfig& c) { return !c.out_dir.empty(); }

std::ofstream open_output(const ExperimentConfig& c, const std::string& name) {
  std::error_code ec;
  fs::create_directories(c.out_dir, ec);
  const fs::path path = fs::path(c.out_dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  return out;
}

void write_run_json(const ExperimentConfig& c, const std::string& command, nlohmann::json extra) {
  if (!writes_files(c)) return;
  nlohmann::json j;
  j["command"] = command;
  j["version"] = kVersion;
  j["config"] = c;
  j["seed"] = c.seed;
  for (auto& [key, value] : extra.items()) j[key] = value;
  auto out = open_output(c, "run.json");
  out << j.dump(2) << '\n';
}

void write_nodes(const ExperimentConfig& c, const NodeSet& nodes) {
  if (!writes_files(c)) return;
  auto out = open_output(c, "nodes.csv");
  write_nodes_csv(out, nodes);
}

void write_sign_field(const ExperimentConfig& c, int n, const NodeSet& nodes,
                      const std::vector<Region>& regions, const ErrorReport& report) {
  if (!writes_files(c)) return;
  auto out = open_output(c, "signfield_n" + std::to_string(n) + ".csv");
  out << "x,y,e_poiss,e_lap,region\n";
  std::size_t k = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes.boundary[i]) continue;
    out << fmt_real(nodes.points[i].x) << ',' << fmt_real(nodes.points[i].y) << ','
        << fmt_real(report.e_poiss[k]) << ',' << fmt_real(report.e_lap[k]) << ',' << to_string(regions[i])
        << '\n';
    ++k;
  }
}

NodeSet generate_nodes(const ExperimentConfig& c, double h, std::uint64_t seed, StageTimes& times) {
  Stopwatch sw;
  NodeSet nodes = discretize_disc(c.domain, h, seed, c.k_candidates);
  times.nodes += sw.lap();
  return nodes;
}

Metrics evaluate_or_record(const NodeSet& nodes, const NeighborIndex& index, const std::vector<int>& sizes,
                           const ExperimentConfig& c, int n, StageTimes& times) {
  try {
    Metrics m = evaluate(nodes, index, sizes, c, &times).metrics;
    m.n = n;
    return m;
  } catch (const Error& e) {
    return failed_metrics(n, nodes.h, std::string(to_string(e.code())) + ": " + e.what());
  }
}

}  // namespace

const char* to_string(FixedRegion region) noexcept {
  switch (region) {
    case FixedRegion::NearBoundary: return "near";
    case FixedRegion::Far: return "far";
    case FixedRegion::None: break;
  }
  return "none";
}

FixedRegion fixed_region_from_string(const std::string& name) {
  if (name == "none") return FixedRegion::None;
  if (name == "near") return FixedRegion::NearBoundary;
  if (name == "far") return FixedRegion::Far;
  throw Error(ErrorCode::InvalidArgument, "unknown fixed region '" + name + "'");
}

void ExperimentConfig::validate() const {
  auto require = [](bool cond, const std::string& what) {
    if (!cond) throw Error(ErrorCode::InvalidArgument, what);
  };
  const int q = (degree + 1) * (degree + 2) / 2;
  require(domain.radius > 0.0, "radius must be positive");
  require(h > 0.0, "h must be positive");
  require(degree >= 0, "degree must be >= 0");
  require(n_min >= q, "n_min must be at least " + std::to_string(q));
  require(n_max >= n_min, "n_max must not be below n_min");
  require(r_split > 0.0 && r_split < domain.radius, "r_split must lie in (0, radius)");
  require(tol > 0.0, "tol must be positive");
  require(k_candidates >= 1, "k_candidates must be >= 1");
  for (double v : h_list) require(v > 0.0, "h_list entries must be positive");
}

void to_json(nlohmann::json& j, const ExperimentConfig& c) {
  j = {{"center", {c.domain.center.x, c.domain.center.y}},
       {"radius", c.domain.radius},
       {"h", c.h},
       {"n", c.n},
       {"n_min", c.n_min},
       {"n_max", c.n_max},
       {"seed", c.seed},
       {"k_candidates", c.k_candidates},
       {"degree", c.degree},
       {"solver", to_string(c.solver)},
       {"tol", c.tol},
       {"r_split", c.r_split},
       {"fixed_region", to_string(c.fixed_region)},
       {"fixed_n", c.fixed_n},
       {"h_list", c.h_list},
       {"n_list", c.n_list},
       {"out", c.out_dir}};
}

void merge_json(const nlohmann::json& j, ExperimentConfig& c) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "config must be a JSON object");
  try {
    if (j.contains("center")) {
      const auto& center = j.at("center");
      c.domain.center = {center.at(0).get<double>(), center.at(1).get<double>()};
    }
    if (j.contains("radius")) c.domain.radius = j.at("radius").get<double>();
    if (j.contains("h")) c.h = j.at("h").get<double>();
    if (j.contains("n")) c.n = j.at("n").get<int>();
    if (j.contains("n_min")) c.n_min = j.at("n_min").get<int>();
    if (j.contains("n_max")) c.n_max = j.at("n_max").get<int>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("k_candidates")) c.k_candidates = j.at("k_candidates").get<int>();
    if (j.contains("degree")) c.degree = j.at("degree").get<int>();
    if (j.contains("solver")) c.solver = solver_from_string(j.at("solver").get<std::string>());
    if (j.contains("tol")) c.tol = j.at("tol").get<double>();
    if (j.contains("r_split")) c.r_split = j.at("r_split").get<double>();
    if (j.contains("fixed_region")) c.fixed_region = fixed_region_from_string(j.at("fixed_region").get<std::string>());
    if (j.contains("fixed_n")) c.fixed_n = j.at("fixed_n").get<int>();
    if (j.contains("h_list")) c.h_list = j.at("h_list").get<std::vector<double>>();
    if (j.contains("n_list")) c.n_list = j.at("n_list").get<std::vector<int>>();
    if (j.contains("out")) c.out_dir = j.at("out").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("bad config value: ") + e.what());
  }
}

Evaluation evaluate(const NodeSet& nodes, const NeighborIndex& index, const std::vector<int>& n_per_node,
                    const ExperimentConfig& config, StageTimes* times) {
  StageTimes local;
  StageTimes& t = times ? *times : local;
  Stopwatch sw;

  const MonomialBasis basis(config.degree);
  const StencilWeights table = build_weight_table(nodes, index, n_per_node, basis);
  t.weights += sw.lap();

  const LinearSystem system = assemble(nodes, table, exact_rhs, exact_solution);
  Evaluation out;
  out.solve = solve(system, config.solver, config.tol);
  t.solve += sw.lap();

  out.report = make_error_report(nodes, table, out.solve.solution);
  t.metrics += sw.lap();

  Metrics& m = out.metrics;
  m.h = nodes.h;
  m.e_poiss_max = out.report.e_poiss_max;
  m.e_poiss_avg = out.report.e_poiss_avg;
  m.e_lap_max = out.report.e_lap_max;
  m.e_lap_avg = out.report.e_lap_avg;
  m.dN_poiss = out.report.dN_poiss;
  m.dN_lap = out.report.dN_lap;
  m.iterations = out.solve.iterations;
  m.residual = out.solve.relative_residual;
  return out;
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw Error(ErrorCode::InvalidArgument, "slope inputs differ in length");
  if (x.size() < 3) throw Error(ErrorCode::TooFewPoints, "need at least 3 samples for a slope");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (!(sxx > 0.0)) throw Error(ErrorCode::TooFewPoints, "slope needs at least two distinct abscissae");
  return sxy / sxx;
}

void curve_extrema(const std::vector<Metrics>& rows, std::vector<int>& minima, std::vector<int>& maxima) {
  minima.clear();
  maxima.clear();
  std::vector<double> values;
  std::vector<int> ns;
  for (const Metrics& m : rows) {
    if (!m.ok()) continue;
    values.push_back(m.e_poiss_max);
    ns.push_back(m.n);
  }
  if (values.size() < 3) return;
  const Extrema ext = detect_local_extrema(values);
  for (std::size_t i : ext.minima) minima.push_back(ns[i]);
  for (std::size_t i : ext.maxima) maxima.push_back(ns[i]);
}

SolveResult run_solve(const ExperimentConfig& config) {
  config.validate();
  StageTimes times;
  SolveResult out;
  out.nodes = generate_nodes(config, config.h, config.seed, times);
  const NeighborIndex index(out.nodes.points);
  const std::vector<int> sizes(out.nodes.size(), config.n);
  out.evaluation = evaluate(out.nodes, index, sizes, config, &times);
  out.evaluation.metrics.n = config.n;

  write_nodes(config, out.nodes);
  write_sign_field(config, config.n, out.nodes, split_regions(out.nodes, config.domain, config.r_split),
                   out.evaluation.report);
  write_run_json(config, "solve",
                 {{"node_count", out.nodes.size()},
                  {"interior_count", out.nodes.interior_count()},
                  {"timing", times_json(times)},
                  {"result", metrics_json(out.evaluation.metrics)}});
  return out;
}

SweepResult run_sweep(const ExperimentConfig& config) {
  config.validate();
  StageTimes times;
  const NodeSet nodes = generate_nodes(config, config.h, config.seed, times);
  const NeighborIndex index(nodes.points);

  SweepResult out;
  out.node_count = nodes.size();
  out.interior_count = nodes.interior_count();
  for (int n = config.n_min; n <= config.n_max; ++n) {
    const std::vector<int> sizes(nodes.size(), n);
    out.rows.push_back(evaluate_or_record(nodes, index, sizes, config, n, times));
  }
  curve_extrema(out.rows, out.minima, out.maxima);

  if (writes_files(config)) {
    write_nodes(config, nodes);
    auto csv = open_output(config, "sweep.csv");
    csv << "n,e_poiss_max,e_poiss_avg,e_lap_max,e_lap_avg,dN_poiss,dN_lap,iters,residual\n";
    for (const Metrics& m : out.rows) {
      csv << m.n << ',' << fmt_real(m.e_poiss_max) << ',' << fmt_real(m.e_poiss_avg) << ','
          << fmt_real(m.e_lap_max) << ',' << fmt_real(m.e_lap_avg) << ',' << fmt_real(m.dN_poiss) << ','
          << fmt_real(m.dN_lap) << ',' << m.iterations << ',' << fmt_real(m.residual) << '\n';
    }
  }
  write_run_json(config, "sweep",
                 {{"node_count", out.node_count},
                  {"interior_count", out.interior_count},
                  {"minima", out.minima},
                  {"maxima", out.maxima},
                  {"errors", errors_json(out.rows)},
                  {"timing", times_json(times)}});
  return out;
}

ConvergenceResult run_convergence(const ExperimentConfig& config) {
  config.validate();
  if (config.h_list.size() < 3) {
    throw Error(ErrorCode::TooFewPoints, "convergence needs at least 3 h values, got " +
                                             std::to_string(config.h_list.size()));
  }
  StageTimes times;
  ConvergenceResult out;

  std::vector<NodeSet> node_sets;
  std::vector<NeighborIndex> indices;
  for (std::size_t k = 0; k < config.h_list.size(); ++k) {
    const std::uint64_t seed = config.seed + k;
    out.seeds.push_back(seed);
    node_sets.push_back(generate_nodes(config, config.h_list[k], seed, times));
    indices.emplace_back(node_sets.back().points);
  }

  std::vector<nlohmann::json> node_counts;
  for (const NodeSet& nodes : node_sets) {
    node_counts.push_back({{"h", nodes.h}, {"seed", nodes.seed}, {"node_count", nodes.size()},
                           {"interior_count", nodes.interior_count()}});
  }

  for (int n : config.n_list) {
    std::vector<double> hs, errs;
    for (std::size_t k = 0; k < node_sets.size(); ++k) {
      const std::vector<int> sizes(node_sets[k].size(), n);
      Metrics m = evaluate_or_record(node_sets[k], indices[k], sizes, config, n, times);
      if (m.ok()) {
        hs.push_back(m.h);
        errs.push_back(m.e_poiss_max);
      }
      out.rows.push_back(std::move(m));
    }
    out.slopes[n] = hs.size() >= 3 ? log_log_slope(hs, errs) : kNaN;
  }

  if (writes_files(config)) {
    auto csv = open_output(config, "convergence.csv");
    csv << "h,n,e_poiss_max,e_poiss_avg,e_lap_avg,slope_note\n";
    for (const Metrics& m : out.rows) {
      csv << fmt_real(m.h) << ',' << m.n << ',' << fmt_real(m.e_poiss_max) << ',' << fmt_real(m.e_poiss_avg)
          << ',' << fmt_real(m.e_lap_avg) << ",slope=" << fmt_real(out.slopes.at(m.n)) << '\n';
    }
  }
  nlohmann::json slopes = nlohmann::json::object();
  for (const auto& [n, s] : out.slopes) slopes[std::to_string(n)] = s;
  write_run_json(config, "converge",
                 {{"node_sets", node_counts},
                  {"slopes", slopes},
                  {"errors", errors_json(out.rows)},
                  {"timing", times_json(times)}});
  return out;
}

SplitResult run_boundary_split(const ExperimentConfig& config) {
  config.validate();
  if (config.fixed_region == FixedRegion::None) {
    throw Error(ErrorCode::InvalidArgument, "split requires --fixed-region near or far");
  }
  StageTimes times;
  const NodeSet nodes = generate_nodes(config, config.h, config.seed, times);
  const NeighborIndex index(nodes.points);
  const std::vector<Region> regions = split_regions(nodes, config.domain, config.r_split);
  const Region pinned = config.fixed_region == FixedRegion::NearBoundary ? Region::NearBoundary : Region::Far;
  const std::string fixed_mode = config.fixed_region == FixedRegion::NearBoundary ? "near_fixed" : "far_fixed";

  SplitResult out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes.boundary[i]) continue;
    (regions[i] == Region::NearBoundary ? out.near_count : out.far_count)++;
  }

  std::vector<Metrics> baseline, fixed;
  for (int n = config.n_min; n <= config.n_max; ++n) {
    const std::vector<int> uniform(nodes.size(), n);
    baseline.push_back(evaluate_or_record(nodes, index, uniform, config, n, times));
    std::vector<int> mixed(nodes.size(), n);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (regions[i] == pinned) mixed[i] = config.fixed_n;
    }
    fixed.push_back(evaluate_or_record(nodes, index, mixed, config, n, times));
  }
  for (std::size_t k = 0; k < baseline.size(); ++k) {
    out.rows.push_back({"baseline", baseline[k]});
    out.rows.push_back({fixed_mode, fixed[k]});
  }
  std::vector<int> unused;
  curve_extrema(baseline, out.baseline_minima, unused);
  curve_extrema(fixed, out.fixed_minima, unused);

  if (writes_files(config)) {
    write_nodes(config, nodes);
    auto csv = open_output(config, "split.csv");
    csv << "n,mode,e_poiss_max,e_poiss_avg,dN_poiss\n";
    for (const SplitRow& r : out.rows) {
      csv << r.metrics.n << ',' << r.mode << ',' << fmt_real(r.metrics.e_poiss_max) << ','
          << fmt_real(r.metrics.e_poiss_avg) << ',' << fmt_real(r.metrics.dN_poiss) << '\n';
    }
  }
  std::vector<Metrics> all = baseline;
  all.insert(all.end(), fixed.begin(), fixed.end());
  write_run_json(config, "split",
                 {{"node_count", nodes.size()},
                  {"interior_count", nodes.interior_count()},
                  {"near_interior_count", out.near_count},
                  {"far_interior_count", out.far_count},
                  {"baseline_minima", out.baseline_minima},
                  {"fixed_minima", out.fixed_minima},
                  {"errors", errors_json(all)},
                  {"timing", times_json(times)}});
  return out;
}

SignFieldResult run_sign_field(const ExperimentConfig& config) {
  config.validate();
  if (config.n_list.empty()) throw Error(ErrorCode::InvalidArgument, "signfield needs at least one n");
  StageTimes times;
  const NodeSet nodes = generate_nodes(config, config.h, config.seed, times);
  const NeighborIndex index(nodes.points);
  const std::vector<Region> regions = split_regions(nodes, config.domain, config.r_split);

  SignFieldResult out;
  for (int n : config.n_list) {
    const std::vector<int> sizes(nodes.size(), n);
    try {
      Evaluation ev = evaluate(nodes, index, sizes, config, &times);
      ev.metrics.n = n;
      write_sign_field(config, n, nodes, regions, ev.report);
      out.rows.push_back(ev.metrics);
    } catch (const Error& e) {
      out.rows.push_back(failed_metrics(n, nodes.h, std::string(to_string(e.code())) + ": " + e.what()));
    }
  }
  write_nodes(config, nodes);
  nlohmann::json results = nlohmann::json::array();
  for (const Metrics& m : out.rows) results.push_back(metrics_json(m));
  write_run_json(config, "signfield",
                 {{"node_count", nodes.size()},
                  {"interior_count", nodes.interior_count()},
                  {"results", results},
                  {"errors", errors_json(out.rows)},
                  {"timing", times_json(times)}});
  return out;
}

}  // namespace rbffd
