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

#include "doctest.h"
#include "fixtures.hpp"
#include "json.hpp"
#include "mecwpt/report_json.hpp"

using namespace mecwpt;
using namespace mecwpt::testing;

TEST_SUITE("report") {

TEST_CASE("json report carries the whole solve") {
  const SystemParams p = cell_params(16, 2);
  const CellProblem c = random_cell(p, 4);
  const SolveReport r = solve_pint(c, p);
  const auto j = nlohmann::json::parse(report_to_json(r, c, p));
  for (const char* key :
       {"E_total", "E_u", "E_m", "E_offload", "E_local", "E_mec_compute",
        "E_download", "E_charge", "T1", "T2", "T3", "T_c", "tasks", "requests",
        "s", "t_u", "t_d", "p", "eta", "alpha", "harvested", "received",
        "beam_powers", "charge_power", "outer_iterations", "inner_iterations",
        "converged", "offload_duality_gap", "active_constraints", "wall_time"})
    CHECK_MESSAGE(j.contains(key), key);
  CHECK(j["E_total"].get<double>() == r.energies.E_total);
  CHECK(j["T_c"].get<double>() == r.allocation.T_c);
  CHECK(j["s"].size() == 2);
  CHECK(j["s"][1].get<double>() == r.allocation.s(1));
  CHECK(j["converged"].get<bool>() == r.converged);
  CHECK(j["active_constraints"].is_array());
}

}  // TEST_SUITE
