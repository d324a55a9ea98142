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

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mecwpt/channel.hpp"
#include "mecwpt/params.hpp"

namespace mecwpt {

// Decision variables for one cell. Users with s_i = 0 carry t_u,i = t_d,i = 0.
struct Allocation {
  Eigen::VectorXd s;    // offloaded bits
  Eigen::VectorXd t_u;  // uplink time [s]
  Eigen::VectorXd t_d;  // downlink time [s]
  double T1 = 0.0, T2 = 0.0, T3 = 0.0, T_c = 0.0;
  Eigen::MatrixXcd W_q;   // charging covariance [W]
  Eigen::VectorXd alpha;  // energy ratios

  static Allocation zeros(int n_users, int n_antennas);
};

struct EnergyBreakdown {
  double E_offload = 0.0;
  double E_local = 0.0;
  double E_mec_compute = 0.0;
  double E_download = 0.0;
  double E_charge = 0.0;
  double E_u = 0.0;
  double E_m = 0.0;
  double E_total = 0.0;
  Eigen::VectorXd harvested;  // xi T_c h_i^* W_q h_i [J]
  Eigen::VectorXd received;   // harvested capped at the request e_i [J]
};

// Noise-to-array-gain terms that the rate expressions divide by:
// Gamma1 sigma1^2 / (N gamma) and Gamma2 sigma2^2 / (N gamma).
double uplink_noise(const CellProblem& cell, const SystemParams& p, int i);
double downlink_noise(const CellProblem& cell, const SystemParams& p, int i);

// r = nu log2(1 + N gamma p / (Gamma1 sigma1^2))  [bit/s/Hz]
double uplink_rate(double power, const CellProblem& cell,
                   const SystemParams& params, int i);
// r = log2(1 + N P gamma eta / (Gamma2 sigma2^2))  [bit/s/Hz]
double downlink_rate(double eta, const CellProblem& cell,
                     const SystemParams& params, int i);

// Energy of pushing `bits` through a link in time `t`:
//   t * noise * (2^(bits / (scale t)) - 1)
// with scale = nu B (uplink) or B (downlink). Zero bits cost nothing.
double link_energy(double bits, double t, double scale, double noise);

struct ImpliedPowers {
  Eigen::VectorXd p;    // uplink transmit power [W]
  Eigen::VectorXd eta;  // downlink power fraction
  bool p_exceeds_max = false;
  bool eta_exceeds_one = false;
};

ImpliedPowers implied_powers(const Allocation& alloc, const CellProblem& cell,
                             const SystemParams& params);

EnergyBreakdown energy_breakdown(const Allocation& alloc,
                                 const CellProblem& cell,
                                 const SystemParams& params);

// xi T_c h_i^* W h_i per user.
Eigen::VectorXd harvested_energy(const Eigen::MatrixXcd& W, double T_c,
                                 const CellProblem& cell,
                                 const SystemParams& params);

struct Violation {
  std::string constraint;  // "c", "d", "e", "f", "g"
  int user = -1;           // -1 for cell-wide constraints
  double slack = 0.0;      // rhs - lhs, negative when violated
};

// Checks latency constraints (c)-(g). `tol` is absolute seconds; a
// constraint is reported only if violated by more than tol.
std::vector<Violation> latency_check(const Allocation& alloc,
                                     const CellProblem& cell,
                                     const SystemParams& params,
                                     double tol = -1.0);

}  // namespace mecwpt
