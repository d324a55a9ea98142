// Copyright 2026 The mecwpt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end; talks to the solver only through the C API.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mecwpt/mecwpt.h"

namespace {

struct CliError {
  int status;
};

void check(int status) {
  if (status != MECWPT_OK) {
    std::fprintf(stderr, "error: %s: %s\n", mecwpt_status_name(status), mecwpt_last_error());
    throw CliError{status};
  }
}

template <typename T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(p); }
};

using Params = Handle<mecwpt_params, mecwpt_params_free>;
using Scen = Handle<mecwpt_scenario, mecwpt_scenario_free>;
using Report = Handle<mecwpt_report, mecwpt_report_free>;
using Experiment = Handle<mecwpt_experiment, mecwpt_experiment_free>;

struct Common {
  std::string config;
  std::uint64_t seed = 1;
  double area = 0.0;
  std::vector<std::string> sets;
};

void load_params(const Common& c, Params& params) {
  if (c.config.empty()) check(mecwpt_params_default(&params.p));
  else check(mecwpt_params_from_file(c.config.c_str(), &params.p));
  for (const std::string& kv : c.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "error: --set expects KEY=VALUE, got '%s'\n", kv.c_str());
      throw CliError{MECWPT_ERR_INVALID_ARGUMENT};
    }
    check(mecwpt_params_set(params.p, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()));
  }
  if (c.area > 0.0) check(mecwpt_params_set(params.p, "area", std::to_string(c.area).c_str()));
}

void emit_json(const mecwpt_report* r, const std::string& out) {
  char* json = nullptr;
  check(mecwpt_report_json(r, &json));
  if (out.empty() || out == "-") {
    std::cout << json << '\n';
  } else {
    std::FILE* f = std::fopen(out.c_str(), "wb");
    if (!f) {
      mecwpt_string_free(json);
      std::fprintf(stderr, "error: cannot write %s\n", out.c_str());
      throw CliError{MECWPT_ERR_IO};
    }
    std::fprintf(f, "%s\n", json);
    std::fclose(f);
  }
  mecwpt_string_free(json);
}

void report_failures(const mecwpt_experiment* ex) {
  int n = 0;
  check(mecwpt_experiment_failures(ex, &n));
  for (int i = 0; i < n; ++i) std::fprintf(stderr, "warning: %s\n", mecwpt_experiment_failure(ex, i));
  if (n) std::fprintf(stderr, "%d realization failures\n", n);
}

std::string join(const std::vector<std::string>& xs) {
  std::string s;
  for (const auto& x : xs) s += (s.empty() ? "" : ",") + x;
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MEC + wireless power transfer energy minimization"};
  app.set_version_flag("--version", std::string(mecwpt_version()));
  app.require_subcommand(1);
  app.fallthrough();

  Common c;
  app.add_option("--config", c.config, "Configuration file (key = value lines)");
  app.add_option("--seed", c.seed, "Random seed");
  app.add_option("--area", c.area, "Side of the square deployment area [m]");
  app.add_option("--set", c.sets, "Override a parameter, KEY=VALUE (repeatable)");

  auto* solve = app.add_subcommand("solve", "Nested solve of one cell");
  int cell = 0;
  std::string out, trace, beams, channels, load_channels;
  bool charging_only = false;
  solve->add_option("--cell", cell, "Cell index");
  solve->add_option("--out", out, "JSON report path (default stdout)");
  solve->add_option("--dump-trace", trace, "Time-allocation trace CSV");
  solve->add_option("--beams", beams, "Beam report CSV");
  solve->add_option("--dump-channels", channels, "Channel CSV of the cell");
  solve->add_option("--channels", load_channels, "Replace the cell's channels from CSV")
      ->check(CLI::ExistingFile);
  solve->add_flag("--charging-only", charging_only, "No computation, charge over T_d");

  auto* base = app.add_subcommand("baseline", "Comparison charging scheme");
  std::string scheme;
  base->add_option("--scheme", scheme, "isotropic or equal_k")
      ->required()
      ->check(CLI::IsMember({"isotropic", "equal_k"}));
  base->add_option("--cell", cell, "Cell index");
  base->add_option("--out", out, "JSON report path (default stdout)");
  base->add_option("--beams", beams, "Beam report CSV");

  auto* mc = app.add_subcommand("mc", "Monte-Carlo experiment from a spec file");
  std::string spec_path;
  int workers = -1;
  mc->add_option("--spec", spec_path, "Experiment spec (flat TOML)")
      ->required()
      ->check(CLI::ExistingFile);
  mc->add_option("--out", out, "Metrics CSV")->required();
  mc->add_option("--workers", workers, "Worker threads (0: all cores)");

  auto* sweep = app.add_subcommand("sweep", "Monte-Carlo sweep of one variable");
  std::string var, values;
  int realizations = 100;
  std::vector<std::string> schemes = {"integrated", "isotropic", "equal_k"};
  sweep->add_option("--var", var, "K, N, L, area or requests")
      ->required()
      ->check(CLI::IsMember({"K", "N", "L", "area", "requests"}));
  sweep->add_option("--values", values, "Comma-separated values")->required();
  sweep->add_option("--realizations", realizations, "Realizations per value");
  sweep->add_option("--schemes", schemes, "Schemes")->delimiter(',');
  sweep->add_option("--out", out, "Metrics CSV")->required();
  sweep->add_option("--workers", workers, "Worker threads (0: all cores)");

  CLI11_PARSE(app, argc, argv);

  try {
    Params params;
    load_params(c, params);
    if (*solve || *base) {
      Scen sc;
      check(mecwpt_scenario_create(params.p, 0.0, c.seed, &sc.p));
      if (!load_channels.empty())
        check(mecwpt_scenario_read_channels_csv(sc.p, cell, load_channels.c_str()));
      if (!channels.empty())
        check(mecwpt_scenario_write_channels_csv(sc.p, cell, channels.c_str()));
      Report r;
      if (*base) check(mecwpt_baseline(params.p, sc.p, cell, scheme.c_str(), &r.p));
      else if (charging_only) check(mecwpt_solve_charging_only(params.p, sc.p, cell, &r.p));
      else check(mecwpt_solve(params.p, sc.p, cell, &r.p));
      if (!trace.empty()) check(mecwpt_report_write_trace_csv(r.p, trace.c_str()));
      if (!beams.empty()) check(mecwpt_report_write_beams_csv(r.p, beams.c_str()));
      emit_json(r.p, out);
    } else {
      Experiment ex;
      check(mecwpt_experiment_create(params.p, &ex.p));
      check(mecwpt_experiment_set(ex.p, "seed", std::to_string(c.seed).c_str()));
      if (*mc) {
        check(mecwpt_experiment_load_file(ex.p, spec_path.c_str()));
        // An explicit --seed on the command line wins over the file.
        if (app.count("--seed"))
          check(mecwpt_experiment_set(ex.p, "seed", std::to_string(c.seed).c_str()));
      } else {
        check(mecwpt_experiment_set(ex.p, "sweep_var", var.c_str()));
        check(mecwpt_experiment_set(ex.p, "values", values.c_str()));
        check(mecwpt_experiment_set(ex.p, "realizations", std::to_string(realizations).c_str()));
        check(mecwpt_experiment_set(ex.p, "schemes", join(schemes).c_str()));
      }
      if (workers >= 0)
        check(mecwpt_experiment_set(ex.p, "workers", std::to_string(workers).c_str()));
      check(mecwpt_experiment_run(ex.p, out.c_str()));
      report_failures(ex.p);
    }
  } catch (const CliError& e) {
    return e.status;
  }
  return 0;
}
