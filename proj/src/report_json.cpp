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

#include "mecwpt/report_json.hpp"

#include <vector>

#include "json.hpp"

namespace mecwpt {
namespace {

std::vector<double> vec(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace

std::string report_to_json(const SolveReport& r, const CellProblem& cell,
                           const SystemParams& params, int indent) {
  const Allocation& a = r.allocation;
  const EnergyBreakdown& e = r.energies;
  nlohmann::ordered_json j;
  j["E_total"] = e.E_total;
  j["E_u"] = e.E_u;
  j["E_m"] = e.E_m;
  j["E_offload"] = e.E_offload;
  j["E_local"] = e.E_local;
  j["E_mec_compute"] = e.E_mec_compute;
  j["E_download"] = e.E_download;
  j["E_charge"] = e.E_charge;
  j["T1"] = a.T1;
  j["T2"] = a.T2;
  j["T3"] = a.T3;
  j["T_c"] = a.T_c;
  j["tasks"] = vec(cell.tasks);
  j["requests"] = vec(cell.requests);
  j["s"] = vec(a.s);
  j["t_u"] = vec(a.t_u);
  j["t_d"] = vec(a.t_d);
  j["p"] = vec(r.powers.p);
  j["eta"] = vec(r.powers.eta);
  j["p_exceeds_max"] = r.powers.p_exceeds_max;
  j["eta_exceeds_one"] = r.powers.eta_exceeds_one;
  j["alpha"] = vec(r.alpha);
  j["harvested"] = vec(e.harvested);
  j["received"] = vec(r.received);
  j["beam_powers"] = vec(r.beams.lambda_q);
  j["charge_power"] = a.W_q.size() ? a.W_q.trace().real() : 0.0;
  j["ap_power_max"] = params.p_ap_max;
  j["outer_iterations"] = r.outer_iterations;
  j["inner_iterations"] = r.inner_iterations;
  j["converged"] = r.converged;
  j["offload_converged"] = r.p2.converged;
  j["offload_duality_gap"] = r.p2.relative_gap();
  j["offload_link_duality_gap"] = r.p2.link_relative_gap();
  j["charging_converged"] = r.beams.converged;
  j["charging_iterations"] = r.beams.iterations;
  j["charging_disabled"] = r.beams.disabled;
  j["active_constraints"] = r.active_constraints;
  j["wall_time"] = r.wall_time;
  return j.dump(indent);
}

}  // namespace mecwpt
