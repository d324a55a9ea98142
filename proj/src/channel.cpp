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

#include "mecwpt/channel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mecwpt/error.hpp"

namespace mecwpt {

double large_scale_gain(double distance, double pathloss_exp,
                        double shadow_db) {
  const double d = std::max(distance, kMinDistance) / kReferenceDistance;
  return std::pow(d, -pathloss_exp) * std::pow(10.0, shadow_db / 10.0);
}

ChannelRealization draw_channels(const Scenario& scenario,
                                 const SystemParams& params,
                                 std::uint64_t seed) {
  const int n = params.n_antennas;
  const int n_cells = scenario.n_cells();
  const int n_users = scenario.n_users_total();

  ChannelRealization ch;
  ch.beta.resize(n_cells, n_users);
  ch.h.resize(n, n_users);
  ch.chan_gain.resize(n_users);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> shadow(0.0, params.shadow_std_db);
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));

  for (int l = 0; l < n_cells; ++l) {
    const Point ap = scenario.ap_positions[l];
    for (int j = 0; j < n_users; ++j) {
      const Point u = scenario.user_positions[j];
      const double d = std::hypot(u.x - ap.x, u.y - ap.y);
      const double s = params.shadow_std_db > 0.0 ? shadow(rng) : 0.0;
      ch.beta(l, j) = large_scale_gain(d, params.pathloss_exp, s);
    }
  }
  for (int j = 0; j < n_users; ++j) {
    const double b = ch.beta(scenario.user_cell[j], j);
    const double amp = std::sqrt(b);
    for (int a = 0; a < n; ++a) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      ch.h(a, j) = amp * std::complex<double>(re, im);
    }
    ch.chan_gain(j) = params.chan_gain_scale * b;
  }
  auto [s1, s2] = interference_powers(ch, scenario, params);
  ch.sigma1_sq = std::move(s1);
  ch.sigma2_sq = std::move(s2);
  return ch;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> interference_powers(
    const ChannelRealization& ch, const Scenario& scenario,
    const SystemParams& params) {
  const int n_cells = scenario.n_cells();
  const int k = scenario.users_per_cell;
  const double n = params.n_antennas;
  const double p_dl_share = params.p_ap_max / k;
  Eigen::VectorXd s1 = Eigen::VectorXd::Constant(n_cells * k, params.noise_ul);
  Eigen::VectorXd s2 = Eigen::VectorXd::Constant(n_cells * k, params.noise_dl);

  for (int l = 0; l < n_cells; ++l) {
    for (int i = 0; i < k; ++i) {
      const int self = scenario.user_index(l, i);
      for (int lp = 0; lp < n_cells; ++lp) {
        if (lp == l) continue;
        const int twin = scenario.user_index(lp, i);
        s1(self) += ch.beta(l, twin) * params.p_user_max;
        for (int j = 0; j < k; ++j)
          s1(self) += ch.beta(l, scenario.user_index(lp, j)) *
                      params.p_user_max / n;
        s2(self) += ch.beta(lp, self) * p_dl_share;
        s2(self) += k * ch.beta(lp, self) * p_dl_share / n;
      }
    }
  }
  return {s1, s2};
}

CellProblem make_cell(const Scenario& scenario, const ChannelRealization& ch,
                      int cell) {
  const int k = scenario.users_per_cell;
  const int first = scenario.user_index(cell, 0);
  CellProblem c;
  c.n_antennas = static_cast<int>(ch.h.rows());
  c.n_users = k;
  c.h = ch.h.middleCols(first, k);
  c.chan_gain = ch.chan_gain.segment(first, k);
  c.sigma1_sq = ch.sigma1_sq.segment(first, k);
  c.sigma2_sq = ch.sigma2_sq.segment(first, k);
  c.tasks = Eigen::Map<const Eigen::VectorXd>(scenario.tasks.data() + first, k);
  c.requests =
      Eigen::Map<const Eigen::VectorXd>(scenario.requests.data() + first, k);
  return c;
}

void write_channels_csv(std::ostream& os, const Eigen::MatrixXcd& h) {
  char buf[64];
  for (Eigen::Index j = 0; j < h.cols(); ++j) {
    for (Eigen::Index a = 0; a < h.rows(); ++a) {
      std::snprintf(buf, sizeof buf, "%s%.17g,%.17g", a == 0 ? "" : ",",
                    h(a, j).real(), h(a, j).imag());
      os << buf;
    }
    os << '\n';
  }
}

Eigen::MatrixXcd read_channels_csv(std::istream& is) {
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        vals.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ParseError(line_no, "bad number '" + cell + "'");
      }
    }
    if (vals.size() % 2 != 0)
      throw ParseError(line_no, "odd column count, expected re/im pairs");
    if (!rows.empty() && vals.size() != rows.front().size())
      throw ParseError(line_no, "ragged row");
    rows.push_back(std::move(vals));
  }
  if (rows.empty()) return {};
  const auto n = static_cast<Eigen::Index>(rows.front().size() / 2);
  Eigen::MatrixXcd h(n, static_cast<Eigen::Index>(rows.size()));
  for (size_t j = 0; j < rows.size(); ++j)
    for (Eigen::Index a = 0; a < n; ++a)
      h(a, static_cast<Eigen::Index>(j)) = {rows[j][2 * a], rows[j][2 * a + 1]};
  return h;
}

}  // namespace mecwpt
