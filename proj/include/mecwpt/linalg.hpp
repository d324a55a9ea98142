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

#include <vector>

#include <Eigen/Dense>

namespace mecwpt {

struct EigenDecomposition {
  Eigen::VectorXd values;    // ascending
  Eigen::MatrixXcd vectors;  // orthonormal columns, matching `values`
  int sweeps = 0;
};

// Cyclic Jacobi for complex Hermitian matrices. Sweeps until the
// off-diagonal Frobenius norm falls below 1e-11 * ||M||_F. Throws
// Error(kNotConverged) after `max_sweeps`, DomainError if `m` is not
// Hermitian within 1e-10 * ||M||_F.
EigenDecomposition eigh_ascending(const Eigen::MatrixXcd& m,
                                  int max_sweeps = 100);

// --- dense LP ---------------------------------------------------------------

enum class Sense { kLessEq, kGreaterEq, kEqual };

struct LpConstraint {
  Eigen::VectorXd coeffs;
  Sense sense = Sense::kLessEq;
  double rhs = 0.0;
};

// minimize c^T x  subject to the constraints and x >= 0.
struct LpProblem {
  Eigen::VectorXd cost;
  std::vector<LpConstraint> constraints;
};

struct LpSolution {
  Eigen::VectorXd x;
  double objective = 0.0;
  int pivots = 0;
};

// Two-phase tableau simplex with Bland's rule. Throws Error(kLpInfeasible)
// or Error(kLpUnbounded).
LpSolution solve_lp(const LpProblem& problem);

}  // namespace mecwpt
