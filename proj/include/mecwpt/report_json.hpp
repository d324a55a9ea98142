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

#include "mecwpt/orchestrator.hpp"

namespace mecwpt {

// Flat JSON object, SI units throughout. `cell` supplies the task sizes and
// requests echoed next to the solution.
std::string report_to_json(const SolveReport& report, const CellProblem& cell,
                           const SystemParams& params, int indent = 2);

}  // namespace mecwpt
