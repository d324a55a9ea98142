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

#include "mecwpt/energy.hpp"

#include <algorithm>
#include <cmath>

namespace mecwpt {

Allocation Allocation::zeros(int k, int n) {
  Allocation a;
  a.s = Eigen::VectorXd::Zero(k);
  a.t_u = Eigen::VectorXd::Zero(k);
  a.t_d = Eigen::VectorXd::Zero(k);
  a.W_q = Eigen::MatrixXcd::Zero(n, n);
  a.alpha = Eigen::VectorXd::Zero(k);
  return a;
}

double uplink_noise(const CellProblem& c, const SystemParams& p, int i) {
  return p.gap_ul * c.sigma1_sq(i) / (c.n_antennas * c.chan_gain(i));
}

double downlink_noise(const CellProblem& c, const SystemParams& p, int i) {
  return p.gap_dl * c.sigma2_sq(i) / (c.n_antennas * c.chan_gain(i));
}

double uplink_rate(double power, const CellProblem& c, const SystemParams& p,
                   int i) {
  return p.nu() * std::log2(1.0 + power / uplink_noise(c, p, i));
}

double downlink_rate(double eta, const CellProblem& c, const SystemParams& p,
                     int i) {
  return std::log2(1.0 + p.p_ap_max * eta / downlink_noise(c, p, i));
}

double link_energy(double bits, double t, double scale, double noise) {
  if (bits <= 0.0) return 0.0;
  if (t <= 0.0) return HUGE_VAL;
  return t * noise * std::expm1(std::log(2.0) * bits / (scale * t));
}

ImpliedPowers implied_powers(const Allocation& a, const CellProblem& c,
                             const SystemParams& p) {
  const int k = c.n_users;
  ImpliedPowers out;
  out.p = Eigen::VectorXd::Zero(k);
  out.eta = Eigen::VectorXd::Zero(k);
  const double nu_b = p.nu() * p.bandwidth;
  for (int i = 0; i < k; ++i) {
    if (a.s(i) <= 0.0) continue;
    out.p(i) = link_energy(a.s(i), a.t_u(i), nu_b, uplink_noise(c, p, i)) /
               a.t_u(i);
    out.eta(i) = link_energy(p.result_ratio * a.s(i), a.t_d(i), p.bandwidth,
                             downlink_noise(c, p, i)) /
                 (a.t_d(i) * p.p_ap_max);
  }
  out.p_exceeds_max = (out.p.array() > p.p_user_max).any();
  out.eta_exceeds_one = out.eta.sum() > 1.0;
  return out;
}

Eigen::VectorXd harvested_energy(const Eigen::MatrixXcd& W, double T_c,
                                 const CellProblem& c, const SystemParams& p) {
  Eigen::VectorXd e(c.n_users);
  for (int i = 0; i < c.n_users; ++i) {
    const auto hi = c.h.col(i);
    e(i) = p.efficiency * T_c * std::max(0.0, (hi.adjoint() * W * hi)(0, 0).real());
  }
  return e;
}

EnergyBreakdown energy_breakdown(const Allocation& a, const CellProblem& c,
                                 const SystemParams& p) {
  EnergyBreakdown e;
  const double nu_b = p.nu() * p.bandwidth;
  const double fu2 = p.freq_user * p.freq_user;
  const double fm = p.mec_freq();
  for (int i = 0; i < c.n_users; ++i) {
    const double s = a.s(i);
    e.E_offload += link_energy(s, a.t_u(i), nu_b, uplink_noise(c, p, i));
    e.E_download += link_energy(p.result_ratio * s, a.t_d(i), p.bandwidth,
                                downlink_noise(c, p, i));
    e.E_local += p.kappa_user * p.cycles_user * (c.tasks(i) - s) * fu2;
    e.E_mec_compute += p.kappa_mec * p.cycles_mec * fm * fm * s;
  }
  e.E_charge = a.T_c * a.W_q.trace().real();
  e.E_u = e.E_offload + e.E_local;
  e.E_m = e.E_mec_compute + e.E_download + e.E_charge;
  e.E_total = (1.0 - p.weight) * e.E_u + p.weight * e.E_m;
  e.harvested = harvested_energy(a.W_q, a.T_c, c, p);
  e.received = e.harvested.cwiseMin(c.requests);
  return e;
}

std::vector<Violation> latency_check(const Allocation& a, const CellProblem& c,
                                     const SystemParams& p, double tol) {
  if (tol < 0.0) tol = 1e-9 * p.latency;
  std::vector<Violation> out;
  auto check = [&](const char* name, int user, double slack) {
    if (slack < -tol) out.push_back({name, user, slack});
  };
  const double fm = p.mec_freq();
  check("c", -1, p.latency - (a.T1 + a.T2 + a.T3));
  for (int i = 0; i < c.n_users; ++i) {
    check("d", i,
          p.latency - (p.cycles_user * (c.tasks(i) - a.s(i)) / p.freq_user +
                       a.t_u(i)));
    check("e", i, a.T1 - a.t_u(i));
    check("f", i, a.T3 - a.t_d(i));
    check("g", i, a.T2 - p.cycles_mec * a.s(i) / fm);
  }
  return out;
}

}  // namespace mecwpt
