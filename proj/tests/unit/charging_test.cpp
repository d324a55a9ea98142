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

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "mecwpt/charging.hpp"
#include "mecwpt/error.hpp"
#include "mecwpt/linalg.hpp"

using namespace mecwpt;
using namespace mecwpt::testing;
using cd = std::complex<double>;

namespace {

constexpr double kTc = 7e-3;

Eigen::MatrixXcd random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = cd(g(rng), g(rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  return qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
}

double min_eig(const Eigen::MatrixXcd& w) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(w);
  return es.eigenvalues().minCoeff();
}

}  // namespace

TEST_SUITE("charging") {

TEST_CASE("zero prices give a scaled identity") {
  const SystemParams p = cell_params(8, 3);
  const CellProblem c = random_cell(p, 1);
  ChargingDuals d;
  d.psi = Eigen::VectorXd::Zero(3);
  d.lambda5 = 0.25;
  const auto B = build_B(d, Eigen::VectorXd::Ones(3), c, kTc, p);
  CHECK((B - (kTc + 0.25) * Eigen::MatrixXcd::Identity(8, 8)).norm() == 0.0);
}

TEST_CASE("hermitian by construction") {
  const SystemParams p = cell_params(12, 4);
  const CellProblem c = random_cell(p, 2);
  ChargingDuals d;
  d.psi = Eigen::VectorXd::LinSpaced(4, 1.0, 4.0) * 1e3;
  const auto B = build_B(d, Eigen::VectorXd::Constant(4, 0.7), c, kTc, p);
  CHECK((B - B.adjoint()).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(build_B(d, Eigen::VectorXd::Ones(4), c, 0.0, p),
                  ChargingDisabled);
}

TEST_CASE("single user: rank-one update points along the channel") {
  const SystemParams p = cell_params(8, 1);
  const CellProblem c = random_cell(p, 3);
  ChargingDuals d;
  d.psi = Eigen::VectorXd::Constant(1, 1.0 / (p.efficiency * c.h.squaredNorm()));
  const auto B = build_B(d, Eigen::VectorXd::Ones(1), c, kTc, p);
  const auto eig = eigh_ascending(B);
  const double cosine =
      std::abs(eig.vectors.col(0).dot(c.h.col(0))) / c.h.col(0).norm();
  CHECK(cosine == doctest::Approx(1.0).epsilon(1e-12));
  // the smallest eigenvalue is T_c (1 - xi psi |h|^2) = 0 here
  CHECK(std::abs(eig.values(0)) < 1e-12 * kTc);
  for (int j = 1; j < 8; ++j) CHECK(eig.values(j) == doctest::Approx(kTc));
}

TEST_CASE("single user beam power in closed form") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const SystemParams p = cell_params(16, 1);
    const CellProblem c = random_cell(p, seed);
    const double expect =
        c.requests(0) / (p.efficiency * kTc * c.h.col(0).squaredNorm());
    REQUIRE(expect < p.p_ap_max);
    const auto sol = solve_p3(c, kTc, p);
    CHECK(sol.lambda_q(0) == doctest::Approx(expect).epsilon(1e-9));
    CHECK(sol.alpha(0) == 1.0);
    CHECK(sol.received(0) == doctest::Approx(c.requests(0)).epsilon(1e-9));
    const double cosine = (c.h.col(0).adjoint() * sol.W_q * c.h.col(0))(0, 0).real() /
                          (c.h.col(0).squaredNorm() * sol.charge_power());
    CHECK(cosine >= 1 - 1e-9);
    // P4 alone with the channel direction first
    std::mt19937_64 rng(seed);
    Eigen::MatrixXcd basis = random_unitary(16, rng);
    basis.col(0) = c.h.col(0);
    const Eigen::MatrixXcd U = basis.householderQr().householderQ() *
                               Eigen::MatrixXcd::Identity(16, 16);
    const auto bp = solve_p4(U, c, kTc, p);
    CHECK(bp.lambda_q(0) == doctest::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("full charge branch and power cap branch") {
  SystemParams p = cell_params(32, 4);
  p.request_min = 1e-6;
  p.request_max = 1e-5;
  const CellProblem c = random_cell(p, 4);
  const auto easy = solve_p3(c, kTc, p);
  CHECK(easy.alpha == Eigen::VectorXd::Ones(4));
  CHECK(easy.charge_power() < p.p_ap_max);
  for (int i = 0; i < 4; ++i)
    CHECK(easy.received(i) == doctest::Approx(c.requests(i)).epsilon(1e-9));

  SystemParams tight = p;
  tight.p_ap_max = 1e-4;
  const auto capped = solve_p3(c, kTc, tight);
  CHECK(capped.charge_power() == doctest::Approx(tight.p_ap_max).epsilon(1e-12));
  CHECK(capped.alpha.minCoeff() < 1.0);
  for (int i = 0; i < 4; ++i) {
    CHECK(capped.received(i) >= capped.alpha(i) * c.requests(i) * (1 - 1e-9));
    CHECK(capped.received(i) <= c.requests(i) * (1 + 1e-9));
  }
}

TEST_CASE("no requests means no beams") {
  const SystemParams p = cell_params(8, 3);
  CellProblem c = random_cell(p, 5);
  c.requests.setZero();
  const auto sol = solve_p3(c, kTc, p);
  CHECK(sol.lambda_q.isZero());
  CHECK(sol.W_q.isZero());
  CHECK(sol.alpha == Eigen::VectorXd::Ones(3));
}

TEST_CASE("vanishing power budget") {
  SystemParams p = cell_params(16, 3);
  p.p_ap_max = 1e-12;
  const CellProblem c = random_cell(p, 6);
  const auto sol = solve_p3(c, kTc, p);
  CHECK(sol.alpha.maxCoeff() < 1e-6);
  CHECK(sol.charge_power() <= p.p_ap_max * (1 + 1e-12));
}

TEST_CASE("no charging time") {
  const SystemParams p = cell_params(8, 2);
  const CellProblem c = random_cell(p, 6);
  const auto sol = solve_p3(c, 0.0, p);
  CHECK(sol.disabled);
  CHECK(sol.W_q.isZero());
  CHECK(sol.alpha.isZero());
  CHECK_THROWS_AS(solve_p4(Eigen::MatrixXcd::Identity(8, 8), c, 0.0, p),
                  ChargingDisabled);
}

TEST_CASE("doubling requests under a binding cap halves the ratios") {
  SystemParams p = cell_params(32, 4);
  p.p_ap_max = 1e-3;
  const CellProblem c = random_cell(p, 7);
  CellProblem twice = c;
  twice.requests *= 2.0;
  const auto a = solve_p3(c, kTc, p);
  const auto b = solve_p3(twice, kTc, p);
  REQUIRE(a.alpha.maxCoeff() < 0.5);
  CHECK((a.W_q - b.W_q).norm() <= 1e-9 * a.W_q.norm());
  for (int i = 0; i < 4; ++i)
    CHECK(b.alpha(i) == doctest::Approx(a.alpha(i) / 2).epsilon(1e-9));
}

TEST_CASE("ascending eigenvalues against descending powers minimise the trace") {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 2; n <= 6; ++n) {
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::MatrixXcd a(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = cd(g(rng), g(rng));
      const Eigen::MatrixXcd B = (a + a.adjoint()) / 2.0;
      const auto eig = eigh_ascending(B);
      std::vector<double> lam(n);
      for (auto& x : lam) x = u(rng);
      std::sort(lam.rbegin(), lam.rend());
      auto value = [&](const Eigen::MatrixXcd& U, const std::vector<double>& l) {
        Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(l.data(), n);
        return (B * U * d.cast<cd>().asDiagonal() * U.adjoint()).trace().real();
      };
      const double best = value(eig.vectors, lam);
      std::vector<double> perm = lam;
      std::sort(perm.begin(), perm.end());
      do {
        CHECK(best <= value(eig.vectors, perm) + 1e-12);
      } while (std::next_permutation(perm.begin(), perm.end()));
      for (int r = 0; r < 200; ++r)
        CHECK(best <= value(random_unitary(n, rng), lam) + 1e-12);
    }
  }
}

TEST_CASE("invariants on random cells") {
  for (int trial = 0; trial < 30; ++trial) {
    const int k = 1 + trial % 6;
    SystemParams p = cell_params(k <= 3 ? 16 : 32, k);
    if (trial % 3 == 0) p.p_ap_max = 0.05;  // cap binds
    const CellProblem c = random_cell(p, 900 + trial);
    const auto sol = solve_p3(c, kTc, p);
    const double tr = sol.charge_power();
    CHECK(tr <= p.p_ap_max * (1 + 1e-12));
    CHECK(min_eig(sol.W_q) >= -1e-9 * std::max(tr, 1e-300));
    int beams = 0;
    for (int j = 0; j < sol.lambda_q.size(); ++j)
      beams += sol.lambda_q(j) > 1e-9 * p.p_ap_max;
    CHECK(beams <= k);
    for (int j = 1; j < sol.lambda_q.size(); ++j)
      CHECK(sol.lambda_q(j) <= sol.lambda_q(j - 1) * (1 + 1e-12));
    for (int i = 0; i < k; ++i) {
      CHECK(sol.received(i) <= c.requests(i) * (1 + 1e-9));
      CHECK(sol.received(i) >= sol.alpha(i) * c.requests(i) * (1 - 1e-9));
      CHECK(sol.alpha(i) >= 0.0);
      CHECK(sol.alpha(i) <= 1.0);
    }
    CHECK(sol.converged);
  }
}

TEST_CASE("one basis serves every charging time") {
  SystemParams p = cell_params(8, 3);
  p.request_min = 1e-6;
  p.request_max = 1e-5;
  const CellProblem c = random_cell(p, 21);
  const ChargingBasis basis = charging_basis(c, p);
  const auto ref = solve_p3(c, 1e-3, p);
  for (double T : {1e-3, 4e-3, 1.5e-2}) {
    const auto fresh = solve_p3(c, T, p);
    const auto reused = solve_p3(basis, c, T, p);
    CHECK((fresh.W_q - reused.W_q).norm() <= 1e-12 * fresh.W_q.norm());
    // uncapped: charging energy T * tr(W) does not move with T
    REQUIRE(ref.charge_power() < p.p_ap_max);
    CHECK(T * reused.charge_power() == doctest::Approx(1e-3 * ref.charge_power()).epsilon(1e-9));
  }
  SystemParams other = cell_params(8, 2);
  CHECK_THROWS(solve_p3(basis, random_cell(other, 21), 1e-3, other));
}

TEST_CASE("beam report lists one row per beam") {
  const SystemParams p = cell_params(8, 2);
  const CellProblem c = random_cell(p, 8);
  const auto sol = solve_p3(c, kTc, p);
  std::ostringstream os;
  write_beam_report_csv(os, sol, c);
  const std::string text = os.str();
  CHECK(text.rfind("beam,power,gain_user0,gain_user1\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') ==
        1 + static_cast<long>(sol.lambda_q.size()));
}

}  // TEST_SUITE
