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
#include <cmath>
#include <complex>
#include <numeric>
#include <string>

#include "mecwpt/error.hpp"
#include "mecwpt/linalg.hpp"

namespace mecwpt {

using cd = std::complex<double>;

EigenDecomposition eigh_ascending(const Eigen::MatrixXcd& m, int max_sweeps) {
  const Eigen::Index n = m.rows();
  if (m.cols() != n) throw DomainError("eigh_ascending: matrix not square");
  const double norm = m.norm();
  EigenDecomposition out;
  if (n == 0) return out;
  if ((m - m.adjoint()).norm() > 1e-10 * std::max(norm, 1e-300))
    throw DomainError("eigh_ascending: matrix not Hermitian");

  Eigen::MatrixXcd a = 0.5 * (m + m.adjoint());
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Identity(n, n);
  const double tol = 1e-11 * norm;

  auto off_norm = [&] {
    double s = 0.0;
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < n; ++i)
        if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
  };

  int sweep = 0;
  while (off_norm() > tol) {
    if (sweep >= max_sweeps)
      throw Error(ErrorCode::kNotConverged,
                  "eigh_ascending: no convergence after " +
                      std::to_string(max_sweeps) + " sweeps");
    ++sweep;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double r = std::abs(a(p, q));
        if (r <= 1e-300 || r < 1e-18 * norm) continue;
        // Phase q so the (p,q) entry becomes real, then a real rotation.
        const cd ph = a(p, q) / r;
        a.col(q) *= std::conj(ph);
        a.row(q) *= ph;
        v.col(q) *= std::conj(ph);

        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * r);
        const double t = (tau >= 0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        for (Eigen::Index k = 0; k < n; ++k) {
          const cd akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const cd apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          const cd vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) {
    return a(i, i).real() < a(j, j).real();
  });
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = a(order[k], order[k]).real();
    out.vectors.col(k) = v.col(order[k]);
  }
  out.sweeps = sweep;
  return out;
}

// --- simplex ----------------------------------------------------------------

namespace {

constexpr double kPivotTol = 1e-11;

struct Tableau {
  Eigen::MatrixXd t;              // rows 0..m-1 constraints, row m objective
  std::vector<Eigen::Index> basis;
  Eigen::Index n_cols = 0;        // variable columns (rhs is last column)
  int pivots = 0;

  Eigen::Index m() const { return static_cast<Eigen::Index>(basis.size()); }
  double& rhs(Eigen::Index r) { return t(r, n_cols); }

  void pivot(Eigen::Index row, Eigen::Index col) {
    t.row(row) /= t(row, col);
    for (Eigen::Index r = 0; r < t.rows(); ++r) {
      if (r == row) continue;
      const double f = t(r, col);
      if (f != 0.0) t.row(r) -= f * t.row(row);
    }
    basis[static_cast<size_t>(row)] = col;
    ++pivots;
  }

  // Bland's rule over columns [0, limit). Returns false if unbounded.
  bool optimize(Eigen::Index limit) {
    const Eigen::Index obj = m();
    for (int guard = 0; guard < 100000; ++guard) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < limit; ++j)
        if (t(obj, j) < -kPivotTol) {
          enter = j;
          break;
        }
      if (enter < 0) return true;
      Eigen::Index leave = -1;
      double best = 0.0;
      for (Eigen::Index r = 0; r < m(); ++r) {
        const double a = t(r, enter);
        if (a <= kPivotTol) continue;
        const double ratio = rhs(r) / a;
        if (leave < 0 || ratio < best - 1e-14 ||
            (ratio <= best + 1e-14 && basis[r] < basis[leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    throw Error(ErrorCode::kNotConverged, "solve_lp: pivot limit reached");
  }
};

}  // namespace

LpSolution solve_lp(const LpProblem& prob) {
  const Eigen::Index n = prob.cost.size();
  const auto m = static_cast<Eigen::Index>(prob.constraints.size());
  for (const auto& c : prob.constraints)
    if (c.coeffs.size() != n)
      throw Error(ErrorCode::kInvalidArgument, "solve_lp: dimension mismatch");

  // Normalize to rhs >= 0 and unit row scale.
  std::vector<LpConstraint> rows = prob.constraints;
  for (auto& r : rows) {
    const double scale = std::max(r.coeffs.cwiseAbs().maxCoeff(), std::abs(r.rhs));
    if (scale > 0) {
      r.coeffs /= scale;
      r.rhs /= scale;
    }
    if (r.rhs < 0) {
      r.coeffs = -r.coeffs;
      r.rhs = -r.rhs;
      if (r.sense == Sense::kLessEq) r.sense = Sense::kGreaterEq;
      else if (r.sense == Sense::kGreaterEq) r.sense = Sense::kLessEq;
    }
  }

  Eigen::Index n_slack = 0, n_art = 0;
  for (const auto& r : rows) {
    if (r.sense != Sense::kEqual) ++n_slack;
    if (r.sense != Sense::kLessEq) ++n_art;
  }
  const Eigen::Index n_cols = n + n_slack + n_art;
  Tableau tab;
  tab.n_cols = n_cols;
  tab.t = Eigen::MatrixXd::Zero(m + 1, n_cols + 1);
  tab.basis.assign(static_cast<size_t>(m), -1);

  Eigen::Index slack = n, art = n + n_slack;
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& r = rows[static_cast<size_t>(i)];
    tab.t.row(i).head(n) = r.coeffs.transpose();
    tab.rhs(i) = r.rhs;
    if (r.sense == Sense::kLessEq) {
      tab.t(i, slack) = 1.0;
      tab.basis[i] = slack++;
    } else {
      if (r.sense == Sense::kGreaterEq) tab.t(i, slack++) = -1.0;
      tab.t(i, art) = 1.0;
      tab.basis[i] = art++;
    }
  }

  // Phase 1: minimize the sum of artificials.
  if (n_art > 0) {
    tab.t.row(m).segment(n + n_slack, n_art).setOnes();
    for (Eigen::Index i = 0; i < m; ++i)
      if (tab.basis[i] >= n + n_slack) tab.t.row(m) -= tab.t.row(i);
    tab.optimize(n_cols);
    const double infeas = -tab.t(m, n_cols);
    if (infeas > 1e-9 * std::max(1.0, tab.t.col(n_cols).head(m).cwiseAbs().maxCoeff()))
      throw Error(ErrorCode::kLpInfeasible, "solve_lp: infeasible");
    // Drive remaining artificials out of the basis.
    for (Eigen::Index i = 0; i < m; ++i) {
      if (tab.basis[i] < n + n_slack) continue;
      for (Eigen::Index j = 0; j < n + n_slack; ++j)
        if (std::abs(tab.t(i, j)) > 1e-9) {
          tab.pivot(i, j);
          break;
        }
    }
  }

  // Phase 2 objective, artificial columns frozen out.
  tab.t.row(m).setZero();
  tab.t.row(m).head(n) = prob.cost.transpose();
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index b = tab.basis[i];
    if (b < n_cols && tab.t(m, b) != 0.0) tab.t.row(m) -= tab.t(m, b) * tab.t.row(i);
  }
  if (!tab.optimize(n + n_slack))
    throw Error(ErrorCode::kLpUnbounded, "solve_lp: unbounded");

  LpSolution sol;
  sol.x = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i)
    if (tab.basis[i] < n) sol.x(tab.basis[i]) = std::max(0.0, tab.rhs(i));
  sol.objective = prob.cost.dot(sol.x);
  sol.pivots = tab.pivots;
  return sol;
}

}  // namespace mecwpt
