// SPDX-License-Identifier: Apache-2.0
// Command-line front end. Talks to the solver exclusively through rbffd.h.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "rbffd/rbffd.h"

namespace {

struct Flag {
  const char* name;  // command-line flag
  const char* key;   // configuration key
  const char* help;
  std::string value;
  CLI::Option* option = nullptr;
};

int report_failure(rbffd_status status) {
  std::cerr << "error: " << rbffd_status_name(status) << ": " << rbffd_last_error() << '\n';
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RBF-FD Poisson solver and stencil-size experiments"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(rbffd_version()));

  std::vector<Flag> flags = {
      {"--h", "h", "nominal node spacing"},
      {"--n", "n", "stencil size (solve)"},
      {"--n-min", "n_min", "smallest swept stencil size"},
      {"--n-max", "n_max", "largest swept stencil size"},
      {"--seed", "seed", "node generation seed"},
      {"--solver", "solver", "iterative | dense"},
      {"--tol", "tol", "relative residual tolerance of the iterative solver"},
      {"--r-split", "r_split", "radius separating near-boundary and far regions"},
      {"--fixed-region", "fixed_region", "none | near | far (split)"},
      {"--fixed-n", "fixed_n", "stencil size of the pinned region (split)"},
      {"--h-list", "h_list", "comma-separated spacings (converge)"},
      {"--n-list", "n_list", "comma-separated stencil sizes (converge, signfield)"},
      {"--k-candidates", "k_candidates", "fill candidates per front node"},
      {"--out", "out", "output directory"},
  };
  for (Flag& f : flags) f.option = app.add_option(f.name, f.value, f.help);

  std::string config_path;
  app.add_option("--config", config_path, "JSON configuration file; flags override it")->check(CLI::ExistingFile);

  const std::vector<std::pair<const char*, rbffd_experiment>> commands = {
      {"solve", RBFFD_EXPERIMENT_SOLVE},
      {"sweep", RBFFD_EXPERIMENT_SWEEP},
      {"converge", RBFFD_EXPERIMENT_CONVERGE},
      {"split", RBFFD_EXPERIMENT_SPLIT},
      {"signfield", RBFFD_EXPERIMENT_SIGNFIELD},
  };
  const char* descriptions[] = {
      "solve once at a single stencil size",
      "sweep the stencil size over [n-min, n-max]",
      "refinement study over --h-list for each stencil size in --n-list",
      "sweep with one region pinned at --fixed-n",
      "signed error fields for each stencil size in --n-list",
  };
  std::vector<CLI::App*> subcommands;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    subcommands.push_back(app.add_subcommand(commands[i].first, descriptions[i]));
  }

  CLI11_PARSE(app, argc, argv);

  rbffd_config* config = nullptr;
  if (rbffd_status s = rbffd_config_create(&config); s != RBFFD_OK) return report_failure(s);

  auto run = [&]() -> int {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      std::stringstream text;
      text << in.rdbuf();
      if (rbffd_status s = rbffd_config_merge_json(config, text.str().c_str()); s != RBFFD_OK) {
        return report_failure(s);
      }
    }
    for (const Flag& f : flags) {
      if (f.option->count() == 0) continue;
      if (rbffd_status s = rbffd_config_set(config, f.key, f.value.c_str()); s != RBFFD_OK) {
        return report_failure(s);
      }
    }

    rbffd_experiment kind = RBFFD_EXPERIMENT_SOLVE;
    for (std::size_t i = 0; i < commands.size(); ++i) {
      if (subcommands[i]->parsed()) kind = commands[i].second;
    }

    rbffd_result* result = nullptr;
    if (rbffd_status s = rbffd_run(config, kind, &result); s != RBFFD_OK) return report_failure(s);
    std::cout << rbffd_result_summary(result);

    int failed = 0;
    for (std::size_t i = 0; i < rbffd_result_row_count(result); ++i) {
      rbffd_row row;
      if (rbffd_result_row(result, i, &row) == RBFFD_OK && !row.ok) ++failed;
    }
    rbffd_result_free(result);
    if (failed > 0) std::cerr << failed << " configuration(s) failed; see run.json\n";
    return 0;
  };

  const int code = run();
  rbffd_config_free(config);
  return code;
}
