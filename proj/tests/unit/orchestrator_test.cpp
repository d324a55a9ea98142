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
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "mecwpt/error.hpp"
#include "mecwpt/orchestrator.hpp"

using namespace mecwpt;
using namespace mecwpt::testing;

namespace {

// Whole objective for one user with the download filling the remaining time
// and single-beam charging over T_c = T_d - t_u - t_d, written longhand.
double single_user_objective(const CellProblem& c, const SystemParams& p,
                             double s, double t_u) {
  const double w = p.weight;
  const double fm = p.mec_freq();
  const double T2 = p.cycles_mec * s / fm;
  const double t_d = p.latency - T2 - t_u;
  if (t_d <= 0) return HUGE_VAL;
  const double nup = p.gap_ul * c.sigma1_sq(0) / (c.n_antennas * c.chan_gain(0));
  const double ndn = p.gap_dl * c.sigma2_sq(0) / (c.n_antennas * c.chan_gain(0));
  const double e_up = t_u * nup * (std::pow(2.0, s / (p.nu() * p.bandwidth * t_u)) - 1);
  const double e_dn =
      t_d * ndn * (std::pow(2.0, p.result_ratio * s / (p.bandwidth * t_d)) - 1);
  const double e_loc = p.kappa_user * p.cycles_user * (c.tasks(0) - s) *
                       p.freq_user * p.freq_user;
  const double e_mec = p.kappa_mec * p.cycles_mec * fm * fm * s;
  const double T_c = T2;
  double e_chg = 0.0;
  if (T_c > 0) {
    const double lam = c.requests(0) /
                       (p.efficiency * T_c * c.h.col(0).squaredNorm());
    e_chg = T_c * std::min(lam, p.p_ap_max);
  }
  return (1 - w) * (e_up + e_loc) + w * (e_mec + e_dn + e_chg);
}

}  // namespace

TEST_SUITE("orchestrator") {

TEST_CASE("step examples") {
  const Eigen::VectorXd s = Eigen::Vector2d(5.0, 0.0);
  const Eigen::VectorXd lo = Eigen::Vector2d(0.0, 0.0);
  const Eigen::VectorXd hi = Eigen::Vector2d(10.0, 10.0);
  const Eigen::VectorXd one = Eigen::Vector2d(1.0, 1.0);
  const Eigen::VectorXd tiny = Eigen::Vector2d(1e-12, 1e-12);
  CHECK(outer_step(s, Eigen::Vector2d::Zero(), one, tiny, lo, hi).isZero());
  // positive gradient at the lower edge is projected away
  const auto ds = outer_step(s, Eigen::Vector2d(0.0, 3.0), one, tiny, lo, hi);
  CHECK(ds(1) == 0.0);
  // floor prevents blowups on flat curvature
  const auto dz = outer_step(s, Eigen::Vector2d(-1.0, 0.0), Eigen::Vector2d::Zero(),
                             Eigen::Vector2d(1.0, 1.0), lo, hi);
  CHECK(dz(0) == doctest::Approx(1.0));
}

TEST_CASE("diagonal quadratic is solved in one step") {
  const Eigen::VectorXd a = Eigen::Vector3d(2.0, 0.5, 7.0);
  const Eigen::VectorXd c = Eigen::Vector3d(3.0, -1.0, 4.5);
  const Eigen::VectorXd s = Eigen::Vector3d(9.0, 2.0, 0.1);
  const Eigen::VectorXd lo = Eigen::Vector3d::Constant(-10.0);
  const Eigen::VectorXd hi = Eigen::Vector3d::Constant(10.0);
  const Eigen::VectorXd grad = 2 * a.cwiseProduct(s - c);
  const Eigen::VectorXd hess = 2 * a;
  const Eigen::VectorXd next =
      s + outer_step(s, grad, hess, Eigen::Vector3d::Constant(1e-12), lo, hi);
  CHECK((next - c).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("user-energy dominated weight offloads everything") {
  SystemParams p = cell_params(32, 3);
  p.weight = 1e-6;
  for (std::uint64_t seed : {1ull, 2ull}) {
    const CellProblem c = random_cell(p, seed);
    const auto [lo, hi] = offload_bounds(c, p);
    const auto r = solve_pint(c, p);
    const double full = evaluate_nested(hi, c, p).objective;
    const double least = evaluate_nested(lo + 0.5 * (hi - lo), c, p).objective;
    REQUIRE(full < least);  // endpoint oracle
    for (int i = 0; i < 3; ++i)
      CHECK(r.allocation.s(i) >= hi(i) - 1e-3 * c.tasks(i));
    CHECK(r.energies.E_total <= full * (1 + 1e-9));
  }
}

TEST_CASE("cheap local computing and poor channels keep tasks local") {
  SystemParams p = cell_params(32, 3);
  p.freq_user = 1.8e11;
  p.kappa_user = 1e-40;
  p.chan_gain_scale = 1e-4;
  for (std::uint64_t seed : {3ull, 4ull}) {
    const CellProblem c = random_cell(p, seed);
    const auto [lo, hi] = offload_bounds(c, p);
    REQUIRE(lo.isZero());
    const auto r = solve_pint(c, p);
    const double none = evaluate_nested(lo, c, p).objective;
    const double all = evaluate_nested(hi, c, p).objective;
    REQUIRE(none < all);  // endpoint oracle
    for (int i = 0; i < 3; ++i) CHECK(r.allocation.s(i) <= 1e-3 * c.tasks(i));
    CHECK(r.energies.E_total <= none * (1 + 1e-9));
  }
}

TEST_CASE("single user beats an exhaustive grid") {
  for (std::uint64_t seed : {5ull, 6ull, 7ull}) {
    const SystemParams p = cell_params(32, 1);
    const CellProblem c = random_cell(p, seed);
    const auto [lo, hi] = offload_bounds(c, p);
    double best = HUGE_VAL;
    for (int a = 0; a < 50; ++a) {
      const double s = lo(0) + (hi(0) - lo(0)) * a / 49.0;
      const double cap =
          p.latency - p.cycles_user * (c.tasks(0) - s) / p.freq_user;
      for (int b = 0; b < 50; ++b) {
        const double t_u = 1e-6 * std::pow(cap / 1e-6, b / 49.0);
        best = std::min(best, single_user_objective(c, p, s, t_u));
      }
    }
    const auto r = solve_pint(c, p);
    CHECK(r.energies.E_total <= best * (1 + 1e-3));
  }
}

TEST_CASE("descent, feasibility and energy consistency") {
  for (int trial = 0; trial < 8; ++trial) {
    const int k = 1 + trial % 4;
    SystemParams p = cell_params(32, k, trial % 2 ? 2 : 1);
    const CellProblem c = random_cell(p, 40 + trial);
    const auto r = solve_pint(c, p);
    for (size_t j = 1; j < r.trace.size(); ++j)
      CHECK(r.trace[j].objective <=
            r.trace[j - 1].objective + 1e-12 * std::abs(r.trace[j - 1].objective));
    const auto problems = check_feasibility(r, c, p);
    CHECK(problems.empty());
    for (const auto& msg : problems) MESSAGE(msg);
    const auto e = energy_breakdown(r.allocation, c, p);
    CHECK(e.E_total == doctest::Approx(r.energies.E_total).epsilon(1e-10));
    CHECK(r.allocation.T_c == doctest::Approx(
                                  std::max(0.0, p.latency - r.allocation.T1 -
                                                    r.allocation.T3))
                                  .epsilon(1e-12));
    CHECK(r.outer_iterations >= 1);
  }
}

TEST_CASE("a shorter deadline never lowers the optimum") {
  for (std::uint64_t seed = 60; seed < 66; ++seed) {
    const SystemParams p = cell_params(32, 2);
    SystemParams tight = p;
    tight.latency = 15e-3;
    const CellProblem c = random_cell(p, seed);
    const double loose = solve_pint(c, p).energies.E_total;
    const double strict = solve_pint(c, tight).energies.E_total;
    CHECK(strict >= loose * (1 - 1e-9));
  }
}

TEST_CASE("impossible deadlines are reported") {
  SystemParams p = cell_params(8, 2);
  const CellProblem c = random_cell(p, 1);
  p.latency = 1e-6;
  CHECK_THROWS_AS(offload_bounds(c, p), InfeasibleError);
  CHECK_THROWS_AS(solve_pint(c, p), InfeasibleError);
}

TEST_CASE("charging-only mode uses the whole frame") {
  const SystemParams p = cell_params(16, 2);
  const CellProblem c = random_cell(p, 2);
  const auto r = solve_charging_only(c, p);
  CHECK(r.allocation.T_c == p.latency);
  CHECK(r.allocation.s.isZero());
  CHECK(r.energies.E_charge == doctest::Approx(p.latency * r.beams.charge_power()));
}

TEST_CASE("outer trace CSV") {
  const SystemParams p = cell_params(16, 2);
  const CellProblem c = random_cell(p, 2);
  const auto r = solve_pint(c, p);
  std::ostringstream os;
  write_outer_trace_csv(os, r.trace);
  const std::string text = os.str();
  CHECK(text.find("iter,objective") == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') ==
        1 + static_cast<long>(r.trace.size()));
}

}  // TEST_SUITE
