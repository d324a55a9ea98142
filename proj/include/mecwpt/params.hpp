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
#include <string>
#include <string_view>
#include <vector>

namespace mecwpt {

// System constants. Everything is stored in SI units (bits, s, Hz, W, J, F).
// The config reader accepts human units and converts on the way in.
struct SystemParams {
  int n_antennas = 100;          // N
  int n_users = 4;               // K, users per AP
  int n_cells = 4;               // L
  double bandwidth = 5e6;        // B [Hz]
  double latency = 20e-3;        // T_d [s]
  double weight = 1e-3;          // w, MEC share of the objective
  double gap_ul = 1.25;          // Gamma_1
  double gap_dl = 1.25;          // Gamma_2
  double result_ratio = 2.0;     // mu, result bits per offloaded bit
  double pilot_fraction = 0.0;   // nu; 0 means derive as 1 - K / (B T_d)
  double efficiency = 0.5;       // xi, RF-to-DC conversion
  double kappa_user = 0.5e-12;   // [F]
  double kappa_mec = 5e-12;      // [F]
  double cycles_user = 1000.0;   // c_i [cycles/bit]
  double cycles_mec = 500.0;     // d_m [cycles/bit]
  double freq_user = 1.8e9;      // f_u [Hz]
  double freq_mec = 0.0;         // f_m [Hz]; 0 means 24 cores * 3.4 GHz / K
  double p_user_max = 0.19952623149688797;  // 23 dBm [W]
  double p_ap_max = 39.810717055349734;     // 46 dBm [W]
  double noise_ul = 1.9952623149688828e-16;  // -127 dBm [W]
  double noise_dl = 6.309573444801943e-16;   // -122 dBm [W]
  double pathloss_exp = 2.2;
  double shadow_std_db = 2.7;
  double chan_gain_scale = 1.0;  // gamma = scale * beta
  double eps1 = 1e-4;            // outer relative objective tolerance
  double eps2 = 1e-6;            // inner subgradient-change tolerance
  int p2_max_iters = 5000;
  int p3_max_iters = 2000;
  int outer_max_iters = 200;
  double area_side = 20.0;       // [m]
  double task_min = 100e3;       // u_i range [bits]
  double task_max = 300e3;
  double request_min = 1e-3;     // e_i range [J]
  double request_max = 10e-3;

  // Derived quantities honoring the "0 means derive" conventions.
  double nu() const;
  double mec_freq() const;

  bool operator==(const SystemParams&) const = default;
};

// Throws ValidationError naming the first violated invariant.
void validate(const SystemParams& params);

// Parses a flat `key = value [unit]` document. Missing keys keep defaults.
// Throws ParseError (with line number) or ValidationError.
SystemParams load_params(std::string_view config_text);

// Applies one `key = value` assignment on top of existing params.
void apply_setting(SystemParams& params, std::string_view key,
                   std::string_view value, int line = 0);

// Emits canonical keys with SI values; load_params(serialize(p)) == p.
std::string serialize(const SystemParams& params);

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct Scenario {
  double area_side = 0.0;
  std::uint64_t rng_seed = 0;
  int users_per_cell = 0;
  std::vector<Point> ap_positions;
  std::vector<Point> user_positions;  // cell-major: user k of cell l at l*K+k
  std::vector<int> user_cell;
  std::vector<double> tasks;          // u_i [bits]
  std::vector<double> requests;       // e_i [J]

  int n_cells() const { return static_cast<int>(ap_positions.size()); }
  int n_users_total() const { return static_cast<int>(user_positions.size()); }
  int user_index(int cell, int k) const { return cell * users_per_cell + k; }
};

// APs at the centers of a regular grid over the square area; K users per AP
// drawn uniformly inside that AP's grid cell. Pure in (params, side, seed).
Scenario generate_scenario(const SystemParams& params, double area_side,
                           std::uint64_t seed);

}  // namespace mecwpt
