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

#include "mecwpt/orchestrator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

#include "mecwpt/error.hpp"

namespace mecwpt {
namespace {

constexpr double kBoundMargin = 1e-3;  // fraction of T_d kept free at the box edges
constexpr double kArmijo = 1e-4;
constexpr int kMaxHalvings = 40;

}  // namespace

NestedPoint evaluate_nested(const Eigen::VectorXd& s, const CellProblem& cell,
                            const SystemParams& params, const ChargingBasis* basis) {
  NestedPoint pt;
  pt.s = s;
  pt.p2 = solve_p2(s, cell, params);
  Allocation& a = pt.allocation;
  a.s = s;
  a.t_u = pt.p2.t_u;
  a.t_d = pt.p2.t_d;
  a.T1 = pt.p2.T1;
  a.T2 = pt.p2.T2;
  a.T3 = pt.p2.T3;
  a.T_c = std::max(0.0, params.latency - a.T1 - a.T3);
  pt.beams = basis ? solve_p3(*basis, cell, a.T_c, params) : solve_p3(cell, a.T_c, params);
  a.W_q = pt.beams.W_q;
  a.alpha = pt.beams.alpha;
  pt.energies = energy_breakdown(a, cell, params);
  pt.objective = pt.energies.E_total;
  return pt;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> offload_bounds(
    const CellProblem& cell, const SystemParams& params) {
  const int k = cell.n_users;
  Eigen::VectorXd lo(k), hi(k);
  const double room = (1.0 - kBoundMargin) * params.latency;
  const double mec_bits = room * params.mec_freq() / params.cycles_mec;
  const double local_bits = room * params.freq_user / params.cycles_user;
  for (int i = 0; i < k; ++i) {
    const double u = cell.tasks(i);
    lo(i) = std::max(0.0, u - local_bits);
    hi(i) = std::min(u, mec_bits);
    if (lo(i) > hi(i)) {
      throw InfeasibleError("task of user " + std::to_string(i) +
                            " cannot meet the latency budget");
    }
  }
  return {lo, hi};
}

Eigen::VectorXd outer_step(const Eigen::VectorXd& s, const Eigen::VectorXd& grad,
                           const Eigen::VectorXd& hess,
                           const Eigen::VectorXd& floor,
                           const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  Eigen::VectorXd ds(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double h = std::max(hess(i), floor(i));
    double step = h > 0.0 ? -grad(i) / h : 0.0;
    if (!std::isfinite(step)) step = 0.0;
    ds(i) = std::clamp(s(i) + step, lo(i), hi(i)) - s(i);
  }
  return ds;
}

namespace {

struct Derivatives {
  Eigen::VectorXd grad;
  Eigen::VectorXd hess;
  int inner = 0;
};

// Three-point differences on a possibly one-sided stencil so that no probe
// leaves [lo, hi].
Derivatives probe(const NestedPoint& x, const Eigen::VectorXd& lo,
                  const Eigen::VectorXd& hi, const CellProblem& cell,
                  const SystemParams& params, const ChargingBasis& basis) {
  const Eigen::Index k = x.s.size();
  Derivatives d{Eigen::VectorXd::Zero(k), Eigen::VectorXd::Zero(k), 0};
  const double f0 = x.objective;
  auto at = [&](Eigen::Index i, double offset) {
    Eigen::VectorXd s = x.s;
    s(i) = std::clamp(s(i) + offset, lo(i), hi(i));
    NestedPoint p = evaluate_nested(s, cell, params, &basis);
    d.inner += p.p2.iterations;
    return p.objective;
  };
  for (Eigen::Index i = 0; i < k; ++i) {
    const double h = std::max(1.0, 1e-4 * cell.tasks(i));
    const double hp = std::min(h, hi(i) - x.s(i));
    const double hm = std::min(h, x.s(i) - lo(i));
    if (hp <= 0.0 && hm <= 0.0) continue;
    if (hp > 0.0 && hm > 0.0) {
      const double fp = at(i, hp), fm = at(i, -hm);
      const double den = hp * hm * (hp + hm);
      d.grad(i) = (fp * hm * hm - fm * hp * hp + f0 * (hp * hp - hm * hm)) / den;
      d.hess(i) = 2.0 * (fp * hm + fm * hp - f0 * (hp + hm)) / den;
    } else if (hp > 0.0) {
      const double q = hp / 2.0;
      const double f1 = at(i, q), f2 = at(i, hp);
      d.grad(i) = (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * q);
      d.hess(i) = (f0 - 2.0 * f1 + f2) / (q * q);
    } else {
      const double q = hm / 2.0;
      const double f1 = at(i, -q), f2 = at(i, -hm);
      d.grad(i) = (3.0 * f0 - 4.0 * f1 + f2) / (2.0 * q);
      d.hess(i) = (f0 - 2.0 * f1 + f2) / (q * q);
    }
  }
  return d;
}

std::vector<std::string> active_set(const NestedPoint& x, const Eigen::VectorXd& lo,
                                    const Eigen::VectorXd& hi, const CellProblem& c,
                                    const SystemParams& p) {
  const double tol = 1e-6 * p.latency;
  const Allocation& a = x.allocation;
  std::vector<std::string> out;
  if (p.latency - (a.T1 + a.T2 + a.T3) <= tol) out.emplace_back("c");
  const double fm = p.mec_freq();
  for (int i = 0; i < c.n_users; ++i) {
    const std::string tag = "[" + std::to_string(i) + "]";
    const double local = p.cycles_user * (c.tasks(i) - a.s(i)) / p.freq_user;
    if (p.latency - local - a.t_u(i) <= tol) out.push_back("d" + tag);
    if (a.T1 - a.t_u(i) <= tol) out.push_back("e" + tag);
    if (a.T3 - a.t_d(i) <= tol) out.push_back("f" + tag);
    if (a.T2 - p.cycles_mec * a.s(i) / fm <= tol) out.push_back("g" + tag);
    const double span = std::max(1.0, hi(i) - lo(i));
    if (a.s(i) - lo(i) <= 1e-9 * span) out.push_back("s_lo" + tag);
    if (hi(i) - a.s(i) <= 1e-9 * span) out.push_back("s_hi" + tag);
  }
  if (x.beams.charge_power() >= p.p_ap_max * (1.0 - 1e-9)) out.emplace_back("i");
  return out;
}

SolveReport finish(const NestedPoint& x, const CellProblem& cell,
                   const SystemParams& params) {
  SolveReport r;
  r.allocation = x.allocation;
  r.energies = x.energies;
  r.received = x.energies.received;
  r.alpha = x.allocation.alpha;
  r.powers = implied_powers(x.allocation, cell, params);
  r.p2 = x.p2;
  r.beams = x.beams;
  return r;
}

}  // namespace

SolveReport solve_pint(const CellProblem& cell, const SystemParams& params) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto [lo, hi] = offload_bounds(cell, params);
  const int k = cell.n_users;

  Eigen::VectorXd s0(k);
  // Box midpoint: the lower edge leaves almost no uplink time, where the
  // transmission energy is effectively infinite.
  for (int i = 0; i < k; ++i) s0(i) = 0.5 * (lo(i) + hi(i));
  const ChargingBasis basis = charging_basis(cell, params);
  NestedPoint x = evaluate_nested(s0, cell, params, &basis);
  int inner = x.p2.iterations + basis.iterations;
  bool converged = false;
  std::vector<OuterTraceRow> trace;
  trace.push_back({0, x.objective, 0.0, 0.0, x.s});

  int it = 0;
  while (it < params.outer_max_iters) {
    ++it;
    Derivatives d = probe(x, lo, hi, cell, params, basis);
    inner += d.inner;
    Eigen::VectorXd floor(k);
    for (int i = 0; i < k; ++i) {
      const double span = hi(i) - lo(i);
      floor(i) = span > 0.0 ? std::abs(d.grad(i)) / span : 0.0;
    }
    const Eigen::VectorXd ds = outer_step(x.s, d.grad, d.hess, floor, lo, hi);
    const double predicted = -d.grad.dot(ds);
    // Latency-aware stop: no admissible descent left (every user pinned by
    // its latency bound, or the step is numerically null).
    if (ds.cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, cell.tasks.maxCoeff()) ||
        predicted <= params.eps1 * 1e-3 * std::abs(x.objective)) {
      converged = true;
      trace.push_back({it, x.objective, 0.0, 0.5 * predicted, x.s});
      break;
    }
    double step = 1.0;
    bool accepted = false;
    NestedPoint trial;
    for (int h = 0; h < kMaxHalvings; ++h, step *= 0.5) {
      trial = evaluate_nested(x.s + step * ds, cell, params, &basis);
      inner += trial.p2.iterations;
      if (trial.objective <= x.objective - kArmijo * step * predicted) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // Finite-difference noise at the optimum; nothing better nearby.
      converged = predicted <= params.eps1 * std::abs(x.objective);
      trace.push_back({it, x.objective, 0.0, 0.5 * predicted, x.s});
      break;
    }
    const double prev = x.objective;
    x = std::move(trial);
    trace.push_back({it, x.objective, step, 0.5 * predicted, x.s});
    if (prev - x.objective <= params.eps1 * std::abs(prev)) {
      converged = true;
      break;
    }
  }

  SolveReport r = finish(x, cell, params);
  r.outer_iterations = it;
  r.inner_iterations = inner;
  r.converged = converged;
  r.active_constraints = active_set(x, lo, hi, cell, params);
  r.trace = std::move(trace);
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

SolveReport solve_charging_only(const CellProblem& cell, const SystemParams& params) {
  const auto t0 = std::chrono::steady_clock::now();
  const int k = cell.n_users;
  NestedPoint x;
  x.s = Eigen::VectorXd::Zero(k);
  Allocation& a = x.allocation;
  a = Allocation::zeros(k, cell.n_antennas);
  a.T_c = params.latency;
  x.beams = solve_p3(cell, a.T_c, params);
  a.W_q = x.beams.W_q;
  a.alpha = x.beams.alpha;
  x.p2.t_u = a.t_u;
  x.p2.t_d = a.t_d;
  x.p2.converged = true;
  // No computation: the local term must not count the (unused) task bits.
  CellProblem idle = cell;
  idle.tasks.setZero();
  x.energies = energy_breakdown(a, idle, params);
  x.objective = x.energies.E_total;
  SolveReport r = finish(x, idle, params);
  r.inner_iterations = x.beams.iterations;
  r.converged = x.beams.converged;
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<std::string> check_feasibility(const SolveReport& r, const CellProblem& c,
                                           const SystemParams& p) {
  std::vector<std::string> out;
  for (const Violation& v : latency_check(r.allocation, c, p)) {
    out.push_back(v.constraint + (v.user >= 0 ? "[" + std::to_string(v.user) + "]" : "") +
                  " slack " + std::to_string(v.slack));
  }
  const Allocation& a = r.allocation;
  const double etol = 1e-9;
  for (int i = 0; i < c.n_users; ++i) {
    const std::string tag = "[" + std::to_string(i) + "]";
    if (a.alpha.size() == c.n_users) {
      if (a.alpha(i) < -etol || a.alpha(i) > 1.0 + etol) out.push_back("alpha" + tag);
      const double need = a.alpha(i) * c.requests(i);
      if (r.energies.harvested.size() == c.n_users &&
          r.energies.harvested(i) < need * (1.0 - 1e-6) - 1e-15) {
        out.push_back("h" + tag);
      }
    }
    if (a.s(i) < -etol || a.s(i) > c.tasks(i) * (1.0 + etol)) out.push_back("s" + tag);
    if (a.t_u(i) < 0.0 || a.t_d(i) < 0.0) out.push_back("t" + tag);
  }
  if (a.W_q.size() > 0) {
    if (a.W_q.trace().real() > p.p_ap_max * (1.0 + 1e-9)) out.emplace_back("i");
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a.W_q, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9 * std::max(1.0, p.p_ap_max)) out.emplace_back("j");
  }
  return out;
}

void write_outer_trace_csv(std::ostream& os, const std::vector<OuterTraceRow>& trace) {
  os << "iter,objective,step,decrement";
  const Eigen::Index k = trace.empty() ? 0 : trace.front().s.size();
  for (Eigen::Index i = 0; i < k; ++i) os << ",s" << i;
  os << '\n';
  const auto old = os.precision(17);
  for (const OuterTraceRow& row : trace) {
    os << row.iter << ',' << row.objective << ',' << row.step << ',' << row.decrement;
    for (Eigen::Index i = 0; i < row.s.size(); ++i) os << ',' << row.s(i);
    os << '\n';
  }
  os.precision(old);
}

}  // namespace mecwpt
