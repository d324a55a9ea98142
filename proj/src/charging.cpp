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

#include "mecwpt/charging.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "mecwpt/energy.hpp"
#include "mecwpt/error.hpp"
#include "mecwpt/linalg.hpp"

namespace mecwpt {

namespace {

BeamSolution zero_solution(const CellProblem& c, double alpha_value) {
  const int n = c.n_antennas, k = c.n_users;
  BeamSolution s;
  s.U_B = Eigen::MatrixXcd::Identity(n, n);
  s.lambda_q = Eigen::VectorXd::Zero(k);
  s.alpha = Eigen::VectorXd::Constant(k, alpha_value);
  s.W_q = Eigen::MatrixXcd::Zero(n, n);
  s.B_matrix = Eigen::MatrixXcd::Zero(n, n);
  s.harvested = Eigen::VectorXd::Zero(k);
  s.received = Eigen::VectorXd::Zero(k);
  s.duals.psi = Eigen::VectorXd::Zero(k);
  s.converged = true;
  return s;
}

Eigen::MatrixXcd covariance(const Eigen::MatrixXcd& U, const Eigen::VectorXd& lam) {
  const auto k = lam.size();
  const Eigen::MatrixXcd Uk = U.leftCols(k);
  return Uk * lam.cast<std::complex<double>>().asDiagonal() * Uk.adjoint();
}

}  // namespace

Eigen::MatrixXcd build_B(const ChargingDuals& d, const Eigen::VectorXd& alpha,
                         const CellProblem& c, double T_c,
                         const SystemParams& p) {
  if (!(T_c > 0.0)) throw ChargingDisabled("no charging time left (T_c <= 0)");
  const int n = c.n_antennas;
  Eigen::MatrixXcd B = Eigen::MatrixXcd::Identity(n, n) * (T_c + d.lambda5);
  for (int i = 0; i < c.n_users; ++i) {
    const double wgt = p.efficiency * T_c * d.psi(i) * alpha(i);
    if (wgt != 0.0) B.noalias() -= wgt * c.h.col(i) * c.h.col(i).adjoint();
  }
  // Exact Hermitian symmetry.
  return 0.5 * (B + B.adjoint());
}

BeamPowers solve_p4(const Eigen::MatrixXcd& U_B, const CellProblem& c,
                    double T_c, const SystemParams& p) {
  if (!(T_c > 0.0)) throw ChargingDisabled("no charging time left (T_c <= 0)");
  const int k = c.n_users;
  BeamPowers out;
  out.A = (c.h.adjoint() * U_B.leftCols(k)).cwiseAbs2();
  out.b = c.requests / (p.efficiency * T_c);
  out.alpha = Eigen::VectorXd::Ones(k);
  out.lambda_q = Eigen::VectorXd::Zero(k);

  const double a_max = out.A.maxCoeff();
  std::vector<int> rows;
  for (int i = 0; i < k; ++i) {
    if (out.b(i) <= 0.0) continue;
    if (out.A.row(i).maxCoeff() <= 1e-12 * a_max || a_max <= 0.0) {
      out.relaxed_users.push_back(i);
      out.alpha(i) = 0.0;
      continue;
    }
    rows.push_back(i);
  }
  if (rows.empty()) return out;

  // Difference variables d_m >= 0 with lambda_j = sum_{m >= j} d_m keep the
  // powers descending.
  LpProblem lp;
  lp.cost.resize(k);
  for (int m = 0; m < k; ++m) lp.cost(m) = m + 1;
  for (int i : rows) {
    LpConstraint con;
    con.coeffs.resize(k);
    double acc = 0.0;
    for (int m = 0; m < k; ++m) {
      acc += out.A(i, m);
      con.coeffs(m) = acc;
    }
    con.sense = Sense::kGreaterEq;
    con.rhs = out.b(i);
    lp.constraints.push_back(std::move(con));
  }
  const LpSolution sol = solve_lp(lp);
  for (int j = k - 1; j >= 0; --j)
    out.lambda_q(j) = sol.x(j) + (j + 1 < k ? out.lambda_q(j + 1) : 0.0);

  out.unscaled_sum = out.lambda_q.sum();
  if (out.unscaled_sum > p.p_ap_max) {
    out.lambda_q *= p.p_ap_max / out.unscaled_sum;
    const Eigen::VectorXd got = out.A * out.lambda_q;
    for (int i : rows) out.alpha(i) = std::min(1.0, got(i) / out.b(i));
  }
  return out;
}

ChargingBasis charging_basis(const CellProblem& c, const SystemParams& p) {
  const int k = c.n_users;

  // Prices y_i = xi psi_i for users that ask for energy over a nonzero
  // channel. With full ratios the dual of the beamforming problem reads
  //   max sum_i y_i b_i  s.t.  sum_i y_i h_i h_i^* <= I,
  // solved here by cutting planes: every unit vector v gives the linear cut
  // sum_i y_i |h_i^* v|^2 <= 1, and the top eigenvectors of the current
  // price-weighted channel covariance supply the deepest ones.
  std::vector<int> S;
  const double gain_max = c.h.colwise().squaredNorm().maxCoeff();
  for (int i = 0; i < k; ++i)
    if (c.requests(i) > 0.0 && c.h.col(i).squaredNorm() > 1e-24 * gain_max) S.push_back(i);

  ChargingBasis out;
  Eigen::VectorXd& y = out.y;
  y = Eigen::VectorXd::Zero(k);
  std::vector<Eigen::VectorXcd>& beam_dirs = out.beam_dirs;
  std::vector<double>& beam_pow = out.beam_pow;
  int& rounds = out.iterations;
  bool& converged = out.converged;
  converged = S.empty();
  if (!S.empty()) {
    const int m = static_cast<int>(S.size());
    Eigen::MatrixXcd H(c.n_antennas, m);
    Eigen::VectorXd b(m);
    for (int j = 0; j < m; ++j) {
      H.col(j) = c.h.col(S[j]);
      b(j) = c.requests(S[j]) / p.efficiency;  // T_c = 1; prices do not depend on it
    }
    const Eigen::MatrixXcd gram = H.adjoint() * H;
    const double b_scale = b.maxCoeff();

    LpProblem lp;
    lp.cost = -b / b_scale;
    std::vector<Eigen::VectorXcd> dirs;
    auto add_cut = [&](const Eigen::VectorXcd& v) {
      dirs.push_back(v.normalized());
      LpConstraint cut;
      cut.coeffs = (H.adjoint() * dirs.back()).cwiseAbs2();
      cut.sense = Sense::kLessEq;
      cut.rhs = 1.0;
      lp.constraints.push_back(std::move(cut));
    };
    for (int j = 0; j < m; ++j) add_cut(H.col(j));

    Eigen::VectorXd best_y = Eigen::VectorXd::Zero(m);
    double lower = 0.0;
    for (rounds = 1; rounds <= p.p3_max_iters; ++rounds) {
      const Eigen::VectorXd x = solve_lp(lp).x;
      const double upper = b.dot(x);
      // Eigenpairs of diag(sqrt x) G diag(sqrt x) share the nonzero
      // spectrum of sum_j x_j h_j h_j^*.
      const Eigen::VectorXd r = x.cwiseMax(0.0).cwiseSqrt();
      const Eigen::MatrixXcd C = r.asDiagonal() * gram * r.asDiagonal();
      const EigenDecomposition eig = eigh_ascending(0.5 * (C + C.adjoint()));
      const double top = eig.values(m - 1);
      if (top > 0.0 && upper / top > lower) {
        lower = upper / top;
        best_y = x / top;
      }
      if (upper - lower <= 1e-10 * upper) {
        converged = true;
        break;
      }
      for (int j = m - 1; j >= 0 && eig.values(j) > 1.0 + 1e-12; --j)
        add_cut(H * r.cwiseProduct(eig.vectors.col(j)));
    }
    rounds = std::min(rounds, p.p3_max_iters);
    for (int j = 0; j < m; ++j) y(S[j]) = best_y(j);

    // The cut directions are also the atoms of the primal: the cheapest mix
    // sum_c mu_c v_c v_c^* meeting every request is the optimal covariance,
    // whose eigenvectors span the null space of B.
    LpProblem master;
    const int nd = static_cast<int>(dirs.size());
    master.cost = Eigen::VectorXd::Ones(nd);
    for (int j = 0; j < m; ++j) {
      LpConstraint row;
      row.coeffs.resize(nd);
      for (int d = 0; d < nd; ++d) row.coeffs(d) = std::norm(H.col(j).dot(dirs[d]));
      row.sense = Sense::kGreaterEq;
      row.rhs = b(j) / b_scale;
      master.constraints.push_back(std::move(row));
    }
    const Eigen::VectorXd mu = solve_lp(master).x;
    std::vector<int> used;
    for (int d = 0; d < nd; ++d)
      if (mu(d) > 1e-12 * mu.maxCoeff()) used.push_back(d);
    Eigen::MatrixXcd F(c.n_antennas, static_cast<int>(used.size()));
    for (int q = 0; q < F.cols(); ++q) F.col(q) = dirs[used[q]] * std::sqrt(mu(used[q]));
    const EigenDecomposition fe = eigh_ascending(F.adjoint() * F);
    for (int q = static_cast<int>(F.cols()) - 1; q >= 0; --q) {
      if (fe.values(q) <= 1e-9 * fe.values(F.cols() - 1)) break;
      beam_dirs.push_back((F * fe.vectors.col(q)).normalized());
      beam_pow.push_back(fe.values(q));
    }
  }

  return out;
}

BeamSolution solve_p3(const ChargingBasis& basis, const CellProblem& c, double T_c,
                      const SystemParams& p) {
  const int k = c.n_users;
  if (!(T_c > 0.0)) {
    BeamSolution s = zero_solution(c, 0.0);
    s.disabled = true;
    return s;
  }
  if ((c.requests.array() <= 0.0).all()) return zero_solution(c, 1.0);
  if (basis.y.size() != k)
    throw Error(ErrorCode::kInvalidArgument, "solve_p3: basis built for another cell");
  const auto& beam_dirs = basis.beam_dirs;
  const auto& beam_pow = basis.beam_pow;

  BeamSolution sol;
  sol.duals.psi = basis.y / p.efficiency;
  sol.duals.lambda5 = 0.0;
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(k);
  const Eigen::MatrixXcd B = build_B(sol.duals, ones, c, T_c, p);
  // Inside the (numerically) degenerate null space of B any orthonormal
  // basis is an eigenbasis; pick the one that diagonalizes the optimum so
  // the per-beam powers below can reach it.
  Eigen::MatrixXcd B_order = B;
  if (!beam_dirs.empty()) {
    const int r = static_cast<int>(beam_dirs.size());
    Eigen::MatrixXcd Uw(c.n_antennas, r);
    for (int q = 0; q < r; ++q) Uw.col(q) = beam_dirs[q];
    // Re-orthonormalize; Gram matrix of nearly orthonormal columns.
    const EigenDecomposition ge = eigh_ascending(Uw.adjoint() * Uw);
    Eigen::VectorXd inv_sqrt = ge.values.cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
    Uw = Uw * ge.vectors * inv_sqrt.asDiagonal() * ge.vectors.adjoint();
    const Eigen::MatrixXcd Pi =
        Eigen::MatrixXcd::Identity(c.n_antennas, c.n_antennas) - Uw * Uw.adjoint();
    B_order = Pi * B * Pi;
    for (int q = 0; q < r; ++q)
      B_order.noalias() -= (T_c * beam_pow[q] / beam_pow[0]) * Uw.col(q) * Uw.col(q).adjoint();
    B_order = 0.5 * (B_order + B_order.adjoint());
  }
  const EigenDecomposition eig = eigh_ascending(B_order);
  const BeamPowers bp = solve_p4(eig.vectors, c, T_c, p);

  sol.U_B = eig.vectors;
  sol.B_matrix = B;
  sol.lambda_q = bp.lambda_q;
  sol.alpha = bp.alpha;
  sol.relaxed_users = bp.relaxed_users;
  sol.W_q = covariance(eig.vectors, bp.lambda_q);
  sol.harvested = harvested_energy(sol.W_q, T_c, c, p);
  sol.received = sol.harvested.cwiseMin(c.requests);
  sol.iterations = basis.iterations;
  sol.converged = basis.converged;
  return sol;
}

BeamSolution solve_p3(const CellProblem& c, double T_c, const SystemParams& p) {
  if (!(T_c > 0.0) || (c.requests.array() <= 0.0).all()) return solve_p3(ChargingBasis{}, c, T_c, p);
  return solve_p3(charging_basis(c, p), c, T_c, p);
}

void write_beam_report_csv(std::ostream& os, const BeamSolution& sol,
                           const CellProblem& c) {
  os << "beam,power";
  for (int i = 0; i < c.n_users; ++i) os << ",gain_user" << i;
  os << '\n';
  char buf[64];
  for (int j = 0; j < sol.lambda_q.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%d,%.17g", j, sol.lambda_q(j));
    os << buf;
    for (int i = 0; i < c.n_users; ++i) {
      const double g = std::norm(c.h.col(i).dot(sol.U_B.col(j)));
      std::snprintf(buf, sizeof buf, ",%.17g", g);
      os << buf;
    }
    os << '\n';
  }
}

}  // namespace mecwpt
