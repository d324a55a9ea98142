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

#include "mecwpt/baselines.hpp"

#include <algorithm>

#include "mecwpt/energy.hpp"
#include "mecwpt/error.hpp"

namespace mecwpt {

BaselineKind parse_baseline(std::string_view tag) {
  if (tag == "isotropic") return BaselineKind::kIsotropic;
  if (tag == "equal_k") return BaselineKind::kEqualK;
  throw ValidationError("unknown baseline scheme '" + std::string(tag) + "'");
}

std::string to_string(BaselineKind kind) {
  return kind == BaselineKind::kIsotropic ? "isotropic" : "equal_k";
}

BeamSolution baseline_covariance(BaselineKind kind, const CellProblem& cell,
                                 double T_c, const SystemParams& params,
                                 const Eigen::MatrixXcd& directions) {
  if (T_c <= 0.0) throw ChargingDisabled("charging time is zero");
  const int n = cell.n_antennas;
  const int k = cell.n_users;
  const double P = params.p_ap_max;

  BeamSolution sol;
  sol.duals.psi = Eigen::VectorXd::Zero(k);
  if (kind == BaselineKind::kIsotropic) {
    sol.U_B = Eigen::MatrixXcd::Identity(n, n);
    sol.lambda_q = Eigen::VectorXd::Constant(n, P / n);
    sol.W_q = Eigen::MatrixXcd::Identity(n, n) * (P / n);
  } else {
    sol.U_B = directions.size() > 0 ? directions : solve_p3(cell, T_c, params).U_B;
    if (sol.U_B.rows() != n || sol.U_B.cols() < k) {
      throw ValidationError("equal_k needs at least K beam directions");
    }
    const int beams = std::min(k, n);
    sol.lambda_q = Eigen::VectorXd::Constant(beams, P / beams);
    const Eigen::MatrixXcd U = sol.U_B.leftCols(beams);
    sol.W_q = U * sol.lambda_q.asDiagonal() * U.adjoint();
  }

  const Eigen::VectorXd raw = harvested_energy(sol.W_q, T_c, cell, params);
  double c = 1.0;
  for (int i = 0; i < k; ++i) {
    if (raw(i) > cell.requests(i)) c = std::min(c, cell.requests(i) / raw(i));
  }
  sol.lambda_q *= c;
  sol.W_q *= c;
  sol.harvested = raw * c;
  sol.received = sol.harvested.cwiseMin(cell.requests);
  sol.alpha.resize(k);
  for (int i = 0; i < k; ++i) {
    sol.alpha(i) = cell.requests(i) > 0.0
                       ? std::min(1.0, sol.received(i) / cell.requests(i))
                       : 1.0;
  }
  sol.converged = true;
  return sol;
}

}  // namespace mecwpt
