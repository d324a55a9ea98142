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
#include <vector>

#include <Eigen/Dense>

#include "mecwpt/channel.hpp"
#include "mecwpt/params.hpp"

namespace mecwpt {

// psi_i prices the received-energy constraint of user i, lambda5 the AP
// power cap.
struct ChargingDuals {
  Eigen::VectorXd psi;
  double lambda5 = 0.0;
};

struct BeamSolution {
  Eigen::MatrixXcd U_B;       // beam directions, N x N, ascending B order
  Eigen::VectorXd lambda_q;   // K beam powers [W], descending
  Eigen::VectorXd alpha;      // energy ratios in [0, 1]
  Eigen::MatrixXcd W_q;       // U_B diag(lambda_q, 0...) U_B^*
  Eigen::MatrixXcd B_matrix;
  Eigen::VectorXd harvested;  // xi T_c h_i^* W_q h_i [J]
  Eigen::VectorXd received;   // harvested capped at e_i [J]
  ChargingDuals duals;
  std::vector<int> relaxed_users;  // rows dropped from the LP (alpha = 0)
  int iterations = 0;
  bool converged = false;
  bool disabled = false;  // T_c <= 0
  bool fallback_directions = false;

  double charge_power() const { return W_q.trace().real(); }
};

// B = (T_c + lambda5) I - xi T_c sum_i psi_i alpha_i h_i h_i^*.
// Throws ChargingDisabled if T_c <= 0.
Eigen::MatrixXcd build_B(const ChargingDuals& duals,
                         const Eigen::VectorXd& alpha, const CellProblem& cell,
                         double T_c, const SystemParams& params);

struct BeamPowers {
  Eigen::VectorXd lambda_q;
  Eigen::VectorXd alpha;
  Eigen::MatrixXd A;       // A(i, j) = |h_i^* u_j|^2
  Eigen::VectorXd b;       // e_i / (xi T_c)
  double unscaled_sum = 0.0;
  std::vector<int> relaxed_users;
};

// Beam-power LP over the first K columns of `U_B`: minimize sum(lambda)
// subject to A lambda >= b and lambda_1 >= ... >= lambda_K >= 0, solved
// without the power cap; if the sum exceeds P the powers are scaled onto the
// cap and alpha_i = min(1, (A lambda)_i / b_i), otherwise alpha = 1.
BeamPowers solve_p4(const Eigen::MatrixXcd& U_B, const CellProblem& cell,
                    double T_c, const SystemParams& params);

// Prices and beam atoms of the power-minimization dual. They do not depend
// on T_c (only the scale of B and of the powers does), so one basis serves
// every charging time of a cell.
struct ChargingBasis {
  Eigen::VectorXd y;  // y_i = xi psi_i
  std::vector<Eigen::VectorXcd> beam_dirs;
  std::vector<double> beam_pow;
  int iterations = 0;
  bool converged = false;
};

// Cutting planes on the dual, then the master LP over the cut directions.
ChargingBasis charging_basis(const CellProblem& cell, const SystemParams& params);

// Charging-energy minimization: builds B from the basis prices, orders its
// eigenvectors and solves the beam-power LP for this T_c.
BeamSolution solve_p3(const ChargingBasis& basis, const CellProblem& cell,
                      double T_c, const SystemParams& params);
BeamSolution solve_p3(const CellProblem& cell, double T_c,
                      const SystemParams& params);

// Beam index, power, then |h_i^* u_j|^2 for every user.
void write_beam_report_csv(std::ostream& os, const BeamSolution& sol,
                           const CellProblem& cell);

}  // namespace mecwpt
