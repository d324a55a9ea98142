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

#include <cmath>
#include <random>

#include "mecwpt/error.hpp"
#include "mecwpt/params.hpp"

namespace mecwpt {

Scenario generate_scenario(const SystemParams& params, double area_side,
                           std::uint64_t seed) {
  validate(params);
  if (!(area_side > 0.0)) throw ValidationError("area_side > 0");

  const int n_cells = params.n_cells;
  const int k = params.n_users;
  const int cols = static_cast<int>(std::ceil(std::sqrt(double(n_cells))));
  const int rows = (n_cells + cols - 1) / cols;
  const double cw = area_side / cols;
  const double ch = area_side / rows;

  Scenario sc;
  sc.area_side = area_side;
  sc.rng_seed = seed;
  sc.users_per_cell = k;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (int l = 0; l < n_cells; ++l) {
    const int r = l / cols;
    const int c = l % cols;
    sc.ap_positions.push_back({(c + 0.5) * cw, (r + 0.5) * ch});
  }
  for (int l = 0; l < n_cells; ++l) {
    const int r = l / cols;
    const int c = l % cols;
    for (int i = 0; i < k; ++i) {
      const double x = (c + unit(rng)) * cw;
      const double y = (r + unit(rng)) * ch;
      sc.user_positions.push_back({x, y});
      sc.user_cell.push_back(l);
      sc.tasks.push_back(params.task_min +
                         (params.task_max - params.task_min) * unit(rng));
      sc.requests.push_back(params.request_min +
                            (params.request_max - params.request_min) *
                                unit(rng));
    }
  }
  return sc;
}

}  // namespace mecwpt
