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

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mecwpt/channel.hpp"
#include "mecwpt/charging.hpp"
#include "mecwpt/energy.hpp"
#include "mecwpt/offload.hpp"
#include "mecwpt/params.hpp"

namespace mecwpt {

struct OuterTraceRow {
  int iter = 0;
  double objective = 0.0;
  double step = 0.0;       // accepted line-search factor
  double decrement = 0.0;  // Newton decrement lambda^2 / 2
  Eigen::VectorXd s;
};

struct SolveReport {
  Allocation allocation;
  EnergyBreakdown energies;
  Eigen::VectorXd received;
  Eigen::VectorXd alpha;
  ImpliedPowers powers;
  P2Solution p2;
  BeamSolution beams;
  int outer_iterations = 0;
  int inner_iterations = 0;
  bool converged = false;
  std::vector<std::string> active_constraints;
  double wall_time = 0.0;
  std::vector<OuterTraceRow> trace;
};

// Evaluation of the nested objective at fixed s: time allocation, then
// beamforming over the leftover charging time.
struct NestedPoint {
  Eigen::VectorXd s;
  P2Solution p2;
  BeamSolution beams;
  Allocation allocation;
  EnergyBreakdown energies;
  double objective = 0.0;  // E_total
};

// `basis` (optional) skips the T_c-independent part of the charging solve.
NestedPoint evaluate_nested(const Eigen::VectorXd& s, const CellProblem& cell,
                            const SystemParams& params,
                            const ChargingBasis* basis = nullptr);

// Offload range keeping every user within the latency budget:
// lower bound from local computing time, upper from MEC computing time.
// Throws InfeasibleError if the range is empty for some user.
std::pair<Eigen::VectorXd, Eigen::VectorXd> offload_bounds(
    const CellProblem& cell, const SystemParams& params);

// Diagonal Newton step -grad / max(hess, floor), projected so s + ds stays
// in [lo, hi].
Eigen::VectorXd outer_step(const Eigen::VectorXd& s, const Eigen::VectorXd& grad,
                           const Eigen::VectorXd& hess,
                           const Eigen::VectorXd& floor,
                           const Eigen::VectorXd& lo, const Eigen::VectorXd& hi);

// Nested solve of one cell: outer latency-aware diagonal Newton on s with
// Armijo backtracking; each objective evaluation runs the offloading and
// charging subproblems in sequence.
SolveReport solve_pint(const CellProblem& cell, const SystemParams& params);

// Charging without computation: u = s = 0, T_c = T_d.
SolveReport solve_charging_only(const CellProblem& cell,
                                const SystemParams& params);

// Checks (c)-(j) on a finished report; returns human-readable violations.
std::vector<std::string> check_feasibility(const SolveReport& report,
                                           const CellProblem& cell,
                                           const SystemParams& params);

void write_outer_trace_csv(std::ostream& os, const std::vector<OuterTraceRow>& trace);

}  // namespace mecwpt
