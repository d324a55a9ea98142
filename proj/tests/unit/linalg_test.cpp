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

#include <complex>
#include <random>

#include "doctest.h"
#include "mecwpt/error.hpp"
#include "mecwpt/linalg.hpp"

using namespace mecwpt;
using cd = std::complex<double>;

namespace {

Eigen::MatrixXcd random_hermitian(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = cd(g(rng), g(rng));
  return (a + a.adjoint()) / 2.0;
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("identity") {
  const auto d = eigh_ascending(Eigen::MatrixXcd::Identity(5, 5));
  for (int i = 0; i < 5; ++i) CHECK(d.values(i) == doctest::Approx(1.0));
  const Eigen::MatrixXcd g = d.vectors.adjoint() * d.vectors;
  CHECK((g - Eigen::MatrixXcd::Identity(5, 5)).norm() < 1e-12);
}

TEST_CASE("diagonal is sorted ascending") {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(3, 3);
  m(0, 0) = 3.0;
  m(1, 1) = 1.0;
  m(2, 2) = 2.0;
  const auto d = eigh_ascending(m);
  CHECK(d.values(0) == doctest::Approx(1.0));
  CHECK(d.values(1) == doctest::Approx(2.0));
  CHECK(d.values(2) == doctest::Approx(3.0));
  CHECK(std::abs(d.vectors(1, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(d.vectors(2, 1)) == doctest::Approx(1.0));
  CHECK(std::abs(d.vectors(0, 2)) == doctest::Approx(1.0));
}

TEST_CASE("random hermitian reconstruction and reference") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto m = random_hermitian(8, seed);
    const auto d = eigh_ascending(m);
    const Eigen::MatrixXcd rec =
        d.vectors * d.values.cast<cd>().asDiagonal() * d.vectors.adjoint();
    CHECK((rec - m).norm() < 1e-10 * std::max(1.0, m.norm()));
    for (int i = 1; i < 8; ++i) CHECK(d.values(i) >= d.values(i - 1));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ref(m);
    CHECK((ref.eigenvalues() - d.values).norm() < 1e-10 * m.norm());
  }
}

TEST_CASE("rejects non-square and non-hermitian") {
  CHECK_THROWS_AS(eigh_ascending(Eigen::MatrixXcd::Zero(2, 3)), DomainError);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(eigh_ascending(m), DomainError);
}

}  // TEST_SUITE
