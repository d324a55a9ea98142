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

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "mecwpt/channel.hpp"
#include "mecwpt/orchestrator.hpp"
#include "mecwpt/params.hpp"

namespace mecwpt {

// Sweep variables: "K", "N", "L", "area" (side in m) and "requests"
// (multiplier on the request range).
struct ExperimentSpec {
  std::string sweep_var = "K";
  std::vector<double> values;
  int realizations = 100;
  std::vector<std::string> schemes = {"integrated", "isotropic", "equal_k"};
  std::uint64_t seed_base = 1;
  int workers = 0;  // 0: hardware concurrency
};

// Flat TOML subset: `key = value` lines, quoted strings, `[a, b]` arrays,
// `#` comments and ignored `[section]` headers. Experiment keys are
// sweep_var, values, realizations, schemes, seed, workers; anything else is
// a system parameter.
void load_experiment(std::string_view text, ExperimentSpec& spec,
                     SystemParams& params);
// Full check before a run. validate_fields skips the "values given" rule so
// a spec can be assembled one key at a time.
void validate(const ExperimentSpec& spec);
void validate_fields(const ExperimentSpec& spec);

enum class ChargingMode { kChargingOnly, kDataAndCharging };

// charging_only: u = s = 0, T_c = T_d, beamforming alone.
// data_and_charging: the full nested solve.
SolveReport charging_modes(ChargingMode mode, const CellProblem& cell,
                           const SystemParams& params);

// Per-cell sample for one scheme.
struct SchemeSample {
  double E_total = 0.0;
  double E_charge = 0.0;
  double sum_received = 0.0;
  double efficiency = 0.0;  // mean_i received_i / e_i, in percent
  double active_beams = 0.0;
  double outer_iterations = 0.0;
};

// Pluggable schemes beyond the built-in ones. The integrated report of the
// same cell is passed in (baselines charge over its T_c).
using SchemeFn = std::function<SchemeSample(const CellProblem&, const SystemParams&,
                                            const SolveReport& integrated)>;
void register_scheme(const std::string& name, SchemeFn fn);
bool scheme_known(const std::string& name);

struct MetricsRow {
  std::string sweep_var;
  double sweep_value = 0.0;
  std::string scheme;
  std::string metric;
  double mean = 0.0;
  double std = 0.0;
  int n = 0;
};

struct ExperimentResult {
  std::vector<MetricsRow> rows;
  std::vector<std::string> failures;  // "value=.. realization=.. cell=..: message"
  int attempted_cells = 0;
};

inline constexpr double kActiveBeamFraction = 1e-3;  // of P

ExperimentResult run_experiment(const ExperimentSpec& spec, const SystemParams& params);

// Columns: sweep_var,sweep_value,scheme,metric,mean,std,n
void write_metrics_csv(std::ostream& os, const std::vector<MetricsRow>& rows);

SchemeSample sample_of(const SolveReport& report, const CellProblem& cell,
                       const SystemParams& params);
int active_beams(const Eigen::VectorXd& lambda_q, const SystemParams& params);

}  // namespace mecwpt
