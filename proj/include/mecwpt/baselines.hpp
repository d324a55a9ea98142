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

#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "mecwpt/channel.hpp"
#include "mecwpt/charging.hpp"
#include "mecwpt/params.hpp"

namespace mecwpt {

enum class BaselineKind { kIsotropic, kEqualK };

BaselineKind parse_baseline(std::string_view tag);  // "isotropic" | "equal_k"
std::string to_string(BaselineKind kind);

// Comparison covariances, scaled by one global factor c in (0, 1] chosen as
// large as possible with no user harvesting more than its request.
// equal_k spreads P/K over the first K columns of `directions`; when none
// are given the integrated charging solver is run to obtain them.
BeamSolution baseline_covariance(BaselineKind kind, const CellProblem& cell,
                                 double T_c, const SystemParams& params,
                                 const Eigen::MatrixXcd& directions = {});

}  // namespace mecwpt
