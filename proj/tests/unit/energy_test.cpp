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

#include "doctest.h"
#include "mecwpt/energy.hpp"

using namespace mecwpt;
using cd = std::complex<double>;

namespace {

CellProblem unit_cell(int n, int k) {
  CellProblem c;
  c.n_antennas = n;
  c.n_users = k;
  c.h = Eigen::MatrixXcd::Zero(n, k);
  for (int i = 0; i < k; ++i)
    for (int a = 0; a < n; ++a)
      c.h(a, i) = cd(std::cos(0.3 * a * (i + 1)), std::sin(0.7 * a + i));
  c.chan_gain = Eigen::VectorXd::Ones(k);
  c.sigma1_sq = Eigen::VectorXd::Ones(k);
  c.sigma2_sq = Eigen::VectorXd::Ones(k);
  c.tasks = Eigen::VectorXd::Constant(k, 1e5);
  c.requests = Eigen::VectorXd::Constant(k, 1e-3);
  return c;
}

SystemParams rate_params() {
  SystemParams p;
  p.n_antennas = 100;
  p.n_users = 1;
  p.gap_ul = 1.25;
  p.gap_dl = 1.25;
  p.pilot_fraction = 1.0;
  return p;
}

}  // namespace

TEST_SUITE("energy") {

TEST_CASE("uplink rate direct evaluation") {
  const SystemParams p = rate_params();
  const CellProblem c = unit_cell(100, 1);
  CHECK(uplink_rate(1.0, c, p, 0) == doctest::Approx(std::log2(81.0)).epsilon(1e-14));
  CHECK(uplink_rate(1.0, c, p, 0) == doctest::Approx(6.3399).epsilon(1e-4));
  CHECK(uplink_rate(0.0, c, p, 0) == 0.0);
  CellProblem big = unit_cell(200, 1);
  CHECK(uplink_rate(1.0, big, p, 0) > uplink_rate(1.0, c, p, 0));
}

TEST_CASE("downlink rate direct evaluation") {
  SystemParams p = rate_params();
  p.p_ap_max = 1.0;
  const CellProblem c = unit_cell(100, 1);
  CHECK(downlink_rate(1.0, c, p, 0) == doctest::Approx(std::log2(81.0)).epsilon(1e-14));
  CHECK(downlink_rate(0.0, c, p, 0) == 0.0);
  CHECK(downlink_rate(0.5, unit_cell(200, 1), p, 0) > downlink_rate(0.5, c, p, 0));
}

TEST_CASE("implied powers invert the rates") {
  SystemParams p;
  p.n_antennas = 16;
  p.n_users = 2;
  const CellProblem c = unit_cell(16, 2);
  Allocation a = Allocation::zeros(2, 16);
  a.s << 0.0, 4e4;
  a.t_u << 0.0, 3e-3;
  a.t_d << 0.0, 2e-3;
  const auto ip = implied_powers(a, c, p);
  CHECK(ip.p(0) == 0.0);
  CHECK(ip.eta(0) == 0.0);
  const double r_u = uplink_rate(ip.p(1), c, p, 1) / p.nu();
  CHECK(r_u == doctest::Approx(a.s(1) / (p.nu() * a.t_u(1) * p.bandwidth)).epsilon(1e-12));
  const double r_d = downlink_rate(ip.eta(1), c, p, 1);
  CHECK(r_d == doctest::Approx(p.result_ratio * a.s(1) / (a.t_d(1) * p.bandwidth)).epsilon(1e-12));
  Allocation faster = a;
  faster.t_u(1) *= 0.5;
  CHECK(implied_powers(faster, c, p).p(1) > ip.p(1));
}

TEST_CASE("local-only mode") {
  SystemParams p;
  p.n_antennas = 8;
  p.n_users = 3;
  const CellProblem c = unit_cell(8, 3);
  const Allocation a = Allocation::zeros(3, 8);
  const auto e = energy_breakdown(a, c, p);
  CHECK(e.E_m == 0.0);
  const double expect =
      3 * p.kappa_user * p.cycles_user * 1e5 * p.freq_user * p.freq_user;
  CHECK(e.E_u == doctest::Approx(expect).epsilon(1e-14));
  CHECK(e.E_total == doctest::Approx((1 - p.weight) * expect).epsilon(1e-14));
}

TEST_CASE("isotropic charging identity") {
  SystemParams p;
  p.n_antennas = 8;
  p.n_users = 3;
  const CellProblem c = unit_cell(8, 3);
  Allocation a = Allocation::zeros(3, 8);
  a.T_c = 5e-3;
  a.W_q = Eigen::MatrixXcd::Identity(8, 8) * (p.p_ap_max / 8);
  const auto e = energy_breakdown(a, c, p);
  CHECK(e.E_charge == doctest::Approx(a.T_c * p.p_ap_max).epsilon(1e-14));
  for (int i = 0; i < 3; ++i) {
    const double power = p.efficiency * p.p_ap_max / 8 * c.h.col(i).squaredNorm();
    CHECK(e.harvested(i) == doctest::Approx(a.T_c * power).epsilon(1e-13));
    CHECK(e.received(i) == doctest::Approx(std::min(e.harvested(i), c.requests(i))));
  }
}

TEST_CASE("single user matches a hand evaluation") {
  SystemParams p;
  p.n_antennas = 10;
  p.n_users = 1;
  CellProblem c = unit_cell(10, 1);
  c.chan_gain(0) = 2e-6;
  c.sigma1_sq(0) = 3e-15;
  c.sigma2_sq(0) = 7e-15;
  c.tasks(0) = 2e5;
  Allocation a = Allocation::zeros(1, 10);
  a.s(0) = 1.2e5;
  a.t_u(0) = 4e-3;
  a.t_d(0) = 6e-3;
  a.T1 = 4e-3;
  a.T3 = 6e-3;
  a.T2 = p.cycles_mec * a.s(0) / p.mec_freq();
  a.T_c = 0.0;

  // written out longhand
  const double nu = 1.0 - 1.0 / (5e6 * 20e-3);
  const double nup = 1.25 * 3e-15 / (10 * 2e-6);
  const double ndn = 1.25 * 7e-15 / (10 * 2e-6);
  const double e_up = 4e-3 * nup * (std::pow(2.0, 1.2e5 / (nu * 5e6 * 4e-3)) - 1);
  const double e_dn = 6e-3 * ndn * (std::pow(2.0, 2 * 1.2e5 / (5e6 * 6e-3)) - 1);
  const double e_loc = 0.5e-12 * 1000 * 0.8e5 * 1.8e9 * 1.8e9;
  const double fm = 24 * 3.4e9;
  const double e_mec = 5e-12 * 500 * fm * fm * 1.2e5;
  const double total = (1 - 1e-3) * (e_up + e_loc) + 1e-3 * (e_mec + e_dn);

  const auto e = energy_breakdown(a, c, p);
  CHECK(e.E_offload == doctest::Approx(e_up).epsilon(1e-10));
  CHECK(e.E_download == doctest::Approx(e_dn).epsilon(1e-10));
  CHECK(e.E_local == doctest::Approx(e_loc).epsilon(1e-10));
  CHECK(e.E_mec_compute == doctest::Approx(e_mec).epsilon(1e-10));
  CHECK(e.E_total == doctest::Approx(total).epsilon(1e-10));
  CHECK(e.E_total == doctest::Approx((1 - p.weight) * e.E_u + p.weight * e.E_m).epsilon(1e-14));
}

TEST_CASE("latency check examples") {
  SystemParams p;
  p.n_antennas = 8;
  p.n_users = 2;
  const CellProblem c = unit_cell(8, 2);
  Allocation a = Allocation::zeros(2, 8);
  a.s << 9.8e4, 9.9e4;
  a.T2 = p.cycles_mec * 9.9e4 / p.mec_freq();
  a.t_u << 3e-3, 4e-3;
  a.t_d << 2e-3, 1e-3;
  a.T1 = 4e-3;
  a.T3 = 2e-3;
  CHECK(latency_check(a, c, p).empty());

  // g is tight at the closed-form T2
  CHECK(latency_check(a, c, p, 0.0).empty());

  Allocation b = a;
  b.s = c.tasks;
  b.t_u.setConstant(p.latency);
  b.T1 = p.latency;
  b.T2 = p.cycles_mec * c.tasks.maxCoeff() / p.mec_freq();
  const auto v = latency_check(b, c, p);
  bool has_c = false;
  for (const auto& x : v) has_c |= x.constraint == "c";
  CHECK(has_c);

  Allocation d = a;
  d.T1 = 1e-3;
  const auto vd = latency_check(d, c, p);
  REQUIRE(vd.size() == 2);
  CHECK(vd[0].constraint == "e");
  CHECK(vd[0].slack == doctest::Approx(-2e-3));
}

TEST_CASE("harvested energy is linear in the covariance") {
  SystemParams p;
  p.n_antennas = 6;
  p.n_users = 3;
  const CellProblem c = unit_cell(6, 3);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  auto psd = [&] {
    Eigen::MatrixXcd a(6, 6);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) a(i, j) = cd(g(rng), g(rng));
    return Eigen::MatrixXcd(a * a.adjoint());
  };
  for (int t = 0; t < 20; ++t) {
    const auto w1 = psd();
    const auto w2 = psd();
    const double x = std::abs(g(rng)), y = std::abs(g(rng));
    const auto lhs = harvested_energy(x * w1 + y * w2, 1e-3, c, p);
    const Eigen::VectorXd rhs = x * harvested_energy(w1, 1e-3, c, p) +
                     y * harvested_energy(w2, 1e-3, c, p);
    for (int i = 0; i < 3; ++i)
      CHECK(lhs(i) == doctest::Approx(rhs(i)).epsilon(1e-12));
  }
}

TEST_CASE("product of time and power has convex superlevel sets") {
  // -T1 tr(W) is quasiconvex on the positive orthant
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double level = -0.1;
  int tested = 0;
  for (int t = 0; t < 5000; ++t) {
    const double a1 = u(rng), b1 = u(rng) * 5, a2 = u(rng), b2 = u(rng) * 5;
    if (-a1 * b1 > level || -a2 * b2 > level) continue;
    const double th = u(rng);
    const double a = th * a1 + (1 - th) * a2, b = th * b1 + (1 - th) * b2;
    CHECK(-a * b <= level + 1e-15);
    ++tested;
  }
  CHECK(tested > 500);
}

TEST_CASE("objective grows with offloaded bits when the premise holds") {
  SystemParams p;
  p.n_antennas = 16;
  p.n_users = 2;
  // cheap local computing so offloading has a positive marginal cost
  p.kappa_user = 1e-32;
  CellProblem c = unit_cell(16, 2);
  c.chan_gain.setConstant(1e-6);
  c.sigma1_sq.setConstant(1e-15);
  c.sigma2_sq.setConstant(1e-15);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  for (int t = 0; t < 200; ++t) {
    Allocation a = Allocation::zeros(2, 16);
    a.t_u << 1e-3 + 5e-3 * u(rng), 1e-3 + 5e-3 * u(rng);
    a.t_d << 1e-3 + 5e-3 * u(rng), 1e-3 + 5e-3 * u(rng);
    auto obj = [&](const Eigen::VectorXd& s) {
      Allocation b = a;
      b.s = s;
      return energy_breakdown(b, c, p).E_total;
    };
    const int i = t % 2;
    const double h = 10.0;
    Eigen::VectorXd zero = Eigen::VectorXd::Zero(2), step = zero;
    step(i) = h;
    if (!(obj(step) > obj(zero))) continue;  // premise
    Eigen::VectorXd s(2);
    s << 1e5 * u(rng), 1e5 * u(rng);
    Eigen::VectorXd s2 = s;
    s2(i) += h;
    CHECK(obj(s2) >= obj(s));
    ++checked;
  }
  CHECK(checked > 100);
}

}  // TEST_SUITE
