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

#include <cstdint>

#include "mecwpt/channel.hpp"
#include "mecwpt/params.hpp"

namespace mecwpt::testing {

inline SystemParams cell_params(int n, int k, int l = 1) {
  SystemParams p;
  p.n_antennas = n;
  p.n_users = k;
  p.n_cells = l;
  return p;
}

// Cell 0 of a fresh layout and channel draw.
inline CellProblem random_cell(const SystemParams& p, std::uint64_t seed) {
  const Scenario sc = generate_scenario(p, p.area_side, seed);
  const ChannelRealization ch = draw_channels(sc, p, seed + 7919);
  return make_cell(sc, ch, 0);
}

// Offload enough that local computing fits in the deadline with margin.
inline Eigen::VectorXd feasible_s(const CellProblem& c, const SystemParams& p,
                                  double frac) {
  const double local_cap = 0.5 * p.latency * p.freq_user / p.cycles_user;
  Eigen::VectorXd s(c.n_users);
  for (int i = 0; i < c.n_users; ++i) {
    const double lo = std::max(0.0, c.tasks(i) - local_cap);
    s(i) = lo + frac * (c.tasks(i) - lo);
  }
  return s;
}

}  // namespace mecwpt::testing
