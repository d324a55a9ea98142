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
#include <iosfwd>
#include <utility>

#include <Eigen/Dense>

#include "mecwpt/params.hpp"

namespace mecwpt {

// One draw of large- and small-scale fading for every (AP, user) pair.
//
// `h` holds the channel from each user's serving AP to that user (column j
// for global user j). `beta(l, j)` is the large-scale gain between AP l and
// user j, for all pairs, which feeds the interference model.
struct ChannelRealization {
  Eigen::MatrixXcd h;          // N x (L*K)
  Eigen::MatrixXd beta;        // L x (L*K)
  Eigen::VectorXd chan_gain;   // gamma_i, per user
  Eigen::VectorXd sigma1_sq;   // uplink interference + noise [W]
  Eigen::VectorXd sigma2_sq;   // downlink interference + noise [W]
};

inline constexpr double kReferenceDistance = 1.0;  // [m]
inline constexpr double kMinDistance = 0.5;        // [m]

// Path loss relative to 1 m with log-normal shadowing given in dB.
double large_scale_gain(double distance, double pathloss_exp,
                        double shadow_db);

// Draws beta, h_i = sqrt(beta_i) g_i with g_i ~ CN(0, I), sets
// chan_gain = scale * beta and fills the interference powers.
ChannelRealization draw_channels(const Scenario& scenario,
                                 const SystemParams& params,
                                 std::uint64_t seed);

// Worst-case interference model: users at p_max, interfering APs split P
// evenly over their K users.
//
//   sigma1(i) = noise_ul + sum_{l' != l} beta(l, i'_{l'}) p_max
//                        + sum_{l' != l} sum_j beta(l, j_{l'}) p_max / N
//   sigma2(i) = noise_dl + sum_{l' != l} beta(l', i) P/K
//                        + sum_{l' != l} K * beta(l', i) (P/K) / N
//
// where i'_{l'} is the user sharing i's pilot index in cell l'. This is a
// simplified stand-in for the full massive-MIMO expressions.
std::pair<Eigen::VectorXd, Eigen::VectorXd> interference_powers(
    const ChannelRealization& realization, const Scenario& scenario,
    const SystemParams& params);

// Per-cell view consumed by the solvers. Columns of `h` are the cell's users.
struct CellProblem {
  int n_antennas = 0;
  int n_users = 0;
  Eigen::MatrixXcd h;
  Eigen::VectorXd chan_gain;
  Eigen::VectorXd sigma1_sq;
  Eigen::VectorXd sigma2_sq;
  Eigen::VectorXd tasks;     // u_i [bits]
  Eigen::VectorXd requests;  // e_i [J]
};

CellProblem make_cell(const Scenario& scenario,
                      const ChannelRealization& realization, int cell);

// CSV channel dump: one row per user, columns re0,im0,re1,im1,...
void write_channels_csv(std::ostream& os, const Eigen::MatrixXcd& h);
Eigen::MatrixXcd read_channels_csv(std::istream& is);

}  // namespace mecwpt
