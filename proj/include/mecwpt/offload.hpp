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
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mecwpt/channel.hpp"
#include "mecwpt/params.hpp"

namespace mecwpt {

// Multipliers of the offloading subproblem:
//   lambda1  total latency        T1 + T2 + T3 <= T_d
//   beta_i   uplink phase         t_u,i <= T1
//   xi_dual  per-user latency     c_i q_i / f_u + t_u,i <= T_d
//   phi_i    downlink phase       t_d,i <= T3
struct OffloadDuals {
  double lambda1 = 0.0;
  Eigen::VectorXd beta;
  Eigen::VectorXd xi_dual;
  Eigen::VectorXd phi;

  static OffloadDuals zeros(int k);
};

struct P2TraceRow {
  int iter = 0;
  double dual_value = 0.0;
  double grad_norm = 0.0;
  double T1 = 0.0;
  double T3 = 0.0;
};

struct P2Solution {
  Eigen::VectorXd t_u;
  Eigen::VectorXd t_d;
  double T1 = 0.0;
  double T2 = 0.0;
  double T3 = 0.0;
  OffloadDuals duals;
  double dual_value = 0.0;    // best dual value seen
  double primal_value = 0.0;  // (1-w) E_u + w E_m1 at the returned times
  double constant = 0.0;      // part fixed by s alone (computing energy)
  double link_primal = 0.0;   // transmission energy at the returned times
  double link_dual = 0.0;     // dual value minus the constant
  bool converged = false;
  bool repaired = false;
  int iterations = 0;
  std::vector<P2TraceRow> trace;

  double relative_gap() const;
  // Gap relative to the transmission part only; far stricter when the
  // computing energy dominates.
  double link_relative_gap() const;
};

// Time-allocation closed form: the per-user minimizer of the Lagrangian in
// t_u,i and t_d,i through the principal Lambert-W branch. Users with s_i = 0
// get zero times; a zero multiplier sends the time to the latency cap T_d.
std::pair<Eigen::VectorXd, Eigen::VectorXd> primal_times(
    const OffloadDuals& duals, const Eigen::VectorXd& s,
    const CellProblem& cell, const SystemParams& params);

// (1-w) E_u + w E_m1 for given offload split and times.
double p2_objective(const Eigen::VectorXd& s, const Eigen::VectorXd& t_u,
                    const Eigen::VectorXd& t_d, const CellProblem& cell,
                    const SystemParams& params);

// Lagrangian of the offloading subproblem at (t, T1, T3; duals).
double p2_lagrangian(const Eigen::VectorXd& s, const Eigen::VectorXd& t_u,
                     const Eigen::VectorXd& t_d, double T1, double T3,
                     const OffloadDuals& duals, const CellProblem& cell,
                     const SystemParams& params);

// The MEC computing time, closed form max_i d_m s_i / f_m.
double mec_time(const Eigen::VectorXd& s, const SystemParams& params);

// Dual subgradient solve of the time allocation at fixed s. Throws
// InfeasibleError when the per-user or total latency budget cannot host s.
P2Solution solve_p2(const Eigen::VectorXd& s, const CellProblem& cell,
                    const SystemParams& params);

// CSV: iter,dual_value,grad_norm,T1,T3
void write_p2_trace_csv(std::ostream& os, const std::vector<P2TraceRow>& trace);

}  // namespace mecwpt
