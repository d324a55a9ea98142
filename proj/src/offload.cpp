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

#include "mecwpt/offload.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>

#include "mecwpt/energy.hpp"
#include "mecwpt/error.hpp"
#include "mecwpt/lambert.hpp"

namespace mecwpt {

namespace {

constexpr double kLn2 = std::numbers::ln2;

double clamped_weight(const SystemParams& p) {
  return std::clamp(p.weight, 1e-6, 1.0 - 1e-6);
}

// e^z (z - 1) + 1, the negative derivative of t (e^{a/t} - 1) in t scaled by
// the noise term, with z = a ln2 / t.
double marginal(double z) {
  if (z < 1e-4) return z * z * (0.5 + z / 3.0);
  if (z > 700.0) return HUGE_VAL;
  return z * std::exp(z) - std::expm1(z);
}

// Per-user link data for one direction.
struct Link {
  double bits_over_scale = 0.0;  // a: s/(nu B) or mu s / B
  double noise = 0.0;            // Gamma sigma^2 / (N gamma)
  double weight = 0.0;           // (1-w) or w
  bool active = false;

  // -d/dt of weight * link energy; positive and decreasing in t.
  double rho(double t) const {
    return weight * noise * marginal(bits_over_scale * kLn2 / t);
  }
  double energy(double t) const {
    return weight * t * noise * std::expm1(kLn2 * bits_over_scale / t);
  }
};

struct Setup {
  int k = 0;
  double T_d = 0.0;
  double T2 = 0.0;
  double const_energy = 0.0;  // (1-w) E_local + w E_mec_compute
  std::vector<Link> up, down;
  Eigen::VectorXd local_time;  // c_i q_i / f_u
  Eigen::VectorXd cap;         // T_d - local_time
  bool any_active = false;
};

Setup make_setup(const Eigen::VectorXd& s, const CellProblem& c,
                 const SystemParams& p) {
  Setup st;
  st.k = c.n_users;
  st.T_d = p.latency;
  st.T2 = mec_time(s, p);
  const double w = clamped_weight(p);
  const double fm = p.mec_freq();
  st.local_time.resize(st.k);
  st.cap.resize(st.k);
  for (int i = 0; i < st.k; ++i) {
    const double q = c.tasks(i) - s(i);
    st.local_time(i) = p.cycles_user * q / p.freq_user;
    st.cap(i) = p.latency - st.local_time(i);
    st.const_energy += (1.0 - w) * p.kappa_user * p.cycles_user * q *
                           p.freq_user * p.freq_user +
                       w * p.kappa_mec * p.cycles_mec * fm * fm * s(i);
    Link up, down;
    up.active = down.active = s(i) > 0.0;
    up.bits_over_scale = s(i) / (p.nu() * p.bandwidth);
    up.noise = uplink_noise(c, p, i);
    up.weight = 1.0 - w;
    down.bits_over_scale = p.result_ratio * s(i) / p.bandwidth;
    down.noise = downlink_noise(c, p, i);
    down.weight = w;
    st.up.push_back(up);
    st.down.push_back(down);
    st.any_active = st.any_active || up.active;
  }
  return st;
}

// Smallest T in (0, upper] whose summed marginal falls to <= target, by
// bisection in log T. `cap_of` bounds each user's time.
template <typename Sum>
double invert_marginal(double target, double upper, Sum&& sum) {
  if (target <= 0.0) return upper;
  double lo = std::log(upper) - 60.0;  // e^-60 ~ 1e-26 relative
  double hi = std::log(upper);
  if (sum(std::exp(hi)) > target) return upper;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sum(std::exp(mid)) <= target) hi = mid;
    else lo = mid;
  }
  return std::exp(hi);
}

struct InnerResult {
  OffloadDuals duals;
  Eigen::VectorXd t_u, t_d;
  double T1 = 0.0, T3 = 0.0;
  double G = 0.0;  // T1 + T2 + T3 - T_d
  double dual_value = 0.0;
  Eigen::VectorXd subgrad;  // G, then per-user t_u - T1, local + t_u - T_d, t_d - T3
};

InnerResult inner(double lambda1, const Eigen::VectorXd& s, const Setup& st,
                  const CellProblem& c, const SystemParams& p) {
  const int k = st.k;
  InnerResult r;
  r.duals = OffloadDuals::zeros(k);
  r.duals.lambda1 = lambda1;

  const double max_cap = st.any_active ? st.cap.maxCoeff() : st.T_d;
  auto up_sum = [&](double T) {
    double acc = 0.0;
    for (int i = 0; i < k; ++i)
      if (st.up[i].active && st.cap(i) > T) acc += st.up[i].rho(T);
    return acc;
  };
  auto down_sum = [&](double T) {
    double acc = 0.0;
    for (int i = 0; i < k; ++i)
      if (st.down[i].active) acc += st.down[i].rho(T);
    return acc;
  };
  const double T1 = invert_marginal(lambda1, max_cap, up_sum);
  const double T3 = invert_marginal(lambda1, st.T_d, down_sum);

  // Split lambda1 over the uplink users: uncapped users carry their marginal
  // in beta; capped users carry it in xi_dual, except for any share of
  // lambda1 left over at a cap kink.
  const double tie = 1e-12 * st.T_d;
  double remainder = lambda1 - up_sum(T1 + tie);
  for (int i = 0; i < k; ++i) {
    if (!st.up[i].active) continue;
    if (st.cap(i) > T1 + tie) {
      r.duals.beta(i) = st.up[i].rho(T1);
    } else {
      const double rc = st.up[i].rho(st.cap(i));
      const double share =
          std::abs(st.cap(i) - T1) <= tie ? std::clamp(remainder, 0.0, rc) : 0.0;
      remainder -= share;
      r.duals.beta(i) = share;
      r.duals.xi_dual(i) = rc - share;
    }
    r.duals.phi(i) = st.down[i].active ? st.down[i].rho(T3) : 0.0;
  }

  std::tie(r.t_u, r.t_d) = primal_times(r.duals, s, c, p);
  r.T1 = r.t_u.size() ? r.t_u.maxCoeff() : 0.0;
  r.T3 = r.t_d.size() ? r.t_d.maxCoeff() : 0.0;
  r.G = r.T1 + st.T2 + r.T3 - st.T_d;

  // Dual function value without the s-only constant, which can be many
  // orders of magnitude above the link terms. Phase durations enter
  // linearly over [0, T_d].
  double val = lambda1 * (st.T2 - st.T_d);
  double sum_beta = 0.0, sum_phi = 0.0;
  for (int i = 0; i < k; ++i) {
    const auto& d = r.duals;
    if (st.up[i].active) val += st.up[i].energy(r.t_u(i));
    if (st.down[i].active) val += st.down[i].energy(r.t_d(i));
    val += (d.beta(i) + d.xi_dual(i)) * r.t_u(i) + d.phi(i) * r.t_d(i);
    val += d.xi_dual(i) * (st.local_time(i) - st.T_d);
    sum_beta += d.beta(i);
    sum_phi += d.phi(i);
  }
  val += std::min(0.0, (lambda1 - sum_beta) * st.T_d);
  val += std::min(0.0, (lambda1 - sum_phi) * st.T_d);
  r.dual_value = val;

  r.subgrad.resize(1 + 3 * k);
  r.subgrad(0) = r.G;
  for (int i = 0; i < k; ++i) {
    r.subgrad(1 + i) = r.t_u(i) - r.T1;
    r.subgrad(1 + k + i) = st.local_time(i) + r.t_u(i) - st.T_d;
    r.subgrad(1 + 2 * k + i) = r.t_d(i) - r.T3;
  }
  return r;
}

}  // namespace

OffloadDuals OffloadDuals::zeros(int k) {
  OffloadDuals d;
  d.beta = Eigen::VectorXd::Zero(k);
  d.xi_dual = Eigen::VectorXd::Zero(k);
  d.phi = Eigen::VectorXd::Zero(k);
  return d;
}

double P2Solution::relative_gap() const {
  return (primal_value - dual_value) / std::max(std::abs(primal_value), 1e-300);
}

double P2Solution::link_relative_gap() const {
  if (link_primal <= 0.0) return 0.0;
  return (link_primal - link_dual) / link_primal;
}

double mec_time(const Eigen::VectorXd& s, const SystemParams& p) {
  if (s.size() == 0) return 0.0;
  return p.cycles_mec * s.maxCoeff() / p.mec_freq();
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> primal_times(
    const OffloadDuals& d, const Eigen::VectorXd& s, const CellProblem& c,
    const SystemParams& p) {
  const int k = c.n_users;
  const double w = clamped_weight(p);
  Eigen::VectorXd t_u = Eigen::VectorXd::Zero(k);
  Eigen::VectorXd t_d = Eigen::VectorXd::Zero(k);
  constexpr double kInvE = 1.0 / std::numbers::e;

  // x = (c B / ln 2) (W0(-y / (sigma^2 e) - 1/e) + 1), t = 1/x.
  auto solve = [&](double y, double sigma2, double c_coef) {
    if (y >= 0.0) return p.latency;
    const double arg = -y / (sigma2 * std::numbers::e) - kInvE;
    const double x = c_coef * p.bandwidth / kLn2 * (lambert_w0(arg).value + 1.0);
    if (!(x > 0.0)) return p.latency;
    return std::min(1.0 / x, p.latency);
  };

  for (int i = 0; i < k; ++i) {
    if (s(i) <= 0.0) continue;
    const double y_u = -(d.beta(i) + d.xi_dual(i)) / (1.0 - w);
    t_u(i) = solve(y_u, uplink_noise(c, p, i), p.nu() / s(i));
    const double y_d = -d.phi(i) / w;
    t_d(i) = solve(y_d, downlink_noise(c, p, i), 1.0 / (p.result_ratio * s(i)));
  }
  return {t_u, t_d};
}

double p2_objective(const Eigen::VectorXd& s, const Eigen::VectorXd& t_u,
                    const Eigen::VectorXd& t_d, const CellProblem& c,
                    const SystemParams& p) {
  const Setup st = make_setup(s, c, p);
  double val = st.const_energy;
  for (int i = 0; i < st.k; ++i) {
    if (!st.up[i].active) continue;
    val += st.up[i].energy(t_u(i)) + st.down[i].energy(t_d(i));
  }
  return val;
}

double p2_lagrangian(const Eigen::VectorXd& s, const Eigen::VectorXd& t_u,
                     const Eigen::VectorXd& t_d, double T1, double T3,
                     const OffloadDuals& d, const CellProblem& c,
                     const SystemParams& p) {
  const Setup st = make_setup(s, c, p);
  double val = p2_objective(s, t_u, t_d, c, p);
  val += d.lambda1 * (T1 + st.T2 + T3 - st.T_d);
  for (int i = 0; i < st.k; ++i) {
    val += d.beta(i) * (t_u(i) - T1);
    val += d.xi_dual(i) * (st.local_time(i) + t_u(i) - st.T_d);
    val += d.phi(i) * (t_d(i) - T3);
  }
  return val;
}

P2Solution solve_p2(const Eigen::VectorXd& s, const CellProblem& c,
                    const SystemParams& p) {
  const int k = c.n_users;
  if (s.size() != k) throw Error(ErrorCode::kInvalidArgument, "solve_p2: |s| != K");
  for (int i = 0; i < k; ++i)
    if (s(i) < 0.0 || s(i) > c.tasks(i) * (1.0 + 1e-12))
      throw Error(ErrorCode::kInvalidArgument, "solve_p2: s outside [0, u]");

  const Setup st = make_setup(s, c, p);
  for (int i = 0; i < k; ++i) {
    if (st.cap(i) < 0.0 || (st.up[i].active && st.cap(i) <= 0.0))
      throw InfeasibleError("local computing exceeds the latency budget for user " +
                            std::to_string(i));
  }
  P2Solution sol;
  sol.T2 = st.T2;
  if (!st.any_active) {
    sol.t_u = Eigen::VectorXd::Zero(k);
    sol.t_d = Eigen::VectorXd::Zero(k);
    sol.duals = OffloadDuals::zeros(k);
    sol.primal_value = sol.dual_value = sol.constant = st.const_energy;
    sol.converged = true;
    return sol;
  }
  if (st.T2 >= st.T_d)
    throw InfeasibleError("MEC computing time exceeds the latency budget");

  // Bracket: lambda1 = 0 overshoots the budget; lambda_hi makes both
  // phases fit in half of what T2 leaves.
  const double half = 0.5 * (st.T_d - st.T2);
  double lambda_hi = 0.0;
  for (int i = 0; i < k; ++i) {
    if (!st.up[i].active) continue;
    lambda_hi = std::max(lambda_hi, st.up[i].rho(std::min(half, st.cap(i))) +
                                        st.down[i].rho(half));
  }
  lambda_hi *= k;
  double lambda_lo = 0.0;
  const double step_scale = lambda_hi;

  double lambda = 0.0;
  InnerResult cur = inner(lambda, s, st, c, p);
  InnerResult best = cur;
  // Last iterates on each side of the budget, for primal mixing at a kink.
  std::optional<InnerResult> over, under;
  (cur.G > 0.0 ? over : under) = cur;
  Eigen::VectorXd prev_g = cur.subgrad;
  sol.trace.push_back({0, cur.dual_value + st.const_energy, cur.subgrad.norm(), cur.T1, cur.T3});

  int it = 1;
  for (; it <= p.p2_max_iters; ++it) {
    if (cur.G > 0.0) lambda_lo = std::max(lambda_lo, lambda);
    else lambda_hi = std::min(lambda_hi, lambda);

    // Projected subgradient ascent with 1/sqrt(k) steps, safeguarded to the
    // current sign bracket.
    double next = lambda + step_scale / std::sqrt(double(it)) * cur.G / st.T_d;
    next = std::max(next, 0.0);
    if (next <= lambda_lo || next >= lambda_hi) next = 0.5 * (lambda_lo + lambda_hi);
    lambda = next;

    cur = inner(lambda, s, st, c, p);
    if (cur.dual_value > best.dual_value) best = cur;
    (cur.G > 0.0 ? over : under) = cur;
    const double change = (cur.subgrad - prev_g).norm() / st.T_d;
    prev_g = cur.subgrad;
    sol.trace.push_back({it, cur.dual_value + st.const_energy, cur.subgrad.norm(), cur.T1, cur.T3});
    const bool bracket_closed = lambda_hi - lambda_lo <= 1e-15 * lambda_hi;
    if ((change <= p.eps2 && std::abs(cur.G) <= p.eps2 * st.T_d) || bracket_closed) {
      sol.converged = true;
      break;
    }
  }
  sol.iterations = std::min(it, p.p2_max_iters);

  // Primal recovery at the best dual point. Near a kink of the dual the
  // times jump across the budget, so a convex mix of both sides is also tried.
  sol.duals = best.duals;
  sol.dual_value = best.dual_value + st.const_energy;
  sol.constant = st.const_energy;
  const double room = st.T_d - st.T2;
  auto recover = [&](Eigen::VectorXd t_u, Eigen::VectorXd t_d, bool& repaired) {
    repaired = false;
    for (int i = 0; i < k; ++i) t_u(i) = std::min(t_u(i), st.cap(i));
    const double T1 = t_u.maxCoeff();
    const double T3 = t_d.maxCoeff();
    if (T1 + T3 > room * (1.0 + 1e-12)) {
      const double f = room / (T1 + T3);
      t_u *= f;
      t_d *= f;
      repaired = true;
    } else if (T1 + T3 < room) {
      // Unused budget goes to the downlink phase, whose times are all equal.
      for (int i = 0; i < k; ++i)
        if (st.down[i].active) t_d(i) = room - T1;
    }
    return std::pair{t_u, t_d};
  };
  auto link_energy = [&](const Eigen::VectorXd& t_u, const Eigen::VectorXd& t_d) {
    double acc = 0.0;
    for (int i = 0; i < k; ++i)
      if (st.up[i].active) acc += st.up[i].energy(t_u(i)) + st.down[i].energy(t_d(i));
    return acc;
  };
  std::tie(sol.t_u, sol.t_d) = recover(best.t_u, best.t_d, sol.repaired);
  sol.link_primal = link_energy(sol.t_u, sol.t_d);
  if (over && under) {
    const double theta = -under->G / (over->G - under->G);
    bool rep = false;
    auto [mu, md] = recover(theta * over->t_u + (1.0 - theta) * under->t_u,
                            theta * over->t_d + (1.0 - theta) * under->t_d, rep);
    const double e = link_energy(mu, md);
    if (e < sol.link_primal) {
      sol.t_u = mu;
      sol.t_d = md;
      sol.repaired = rep;
      sol.link_primal = e;
    }
  }
  sol.T1 = sol.t_u.maxCoeff();
  sol.T3 = sol.t_d.maxCoeff();
  sol.primal_value = p2_objective(s, sol.t_u, sol.t_d, c, p);
  sol.link_dual = best.dual_value;
  return sol;
}

void write_p2_trace_csv(std::ostream& os, const std::vector<P2TraceRow>& trace) {
  os << "iter,dual_value,grad_norm,T1,T3\n";
  char buf[160];
  for (const auto& r : trace) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g\n", r.iter,
                  r.dual_value, r.grad_norm, r.T1, r.T3);
    os << buf;
  }
}

}  // namespace mecwpt
