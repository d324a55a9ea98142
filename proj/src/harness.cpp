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

#include "mecwpt/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include "mecwpt/baselines.hpp"
#include "mecwpt/error.hpp"

namespace mecwpt {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string unquote(std::string_view s, int line) {
  s = trim(s);
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'')) {
    if (s.back() != s.front()) throw ParseError(line, "unterminated string");
    return std::string(s.substr(1, s.size() - 2));
  }
  return std::string(s);
}

std::vector<std::string> split_list(std::string_view s, int line) {
  s = trim(s);
  if (s.size() >= 2 && s.front() == '[') {
    if (s.back() != ']') throw ParseError(line, "unterminated array");
    s = s.substr(1, s.size() - 2);
  }
  std::vector<std::string> out;
  while (!trim(s).empty()) {
    const auto comma = s.find(',');
    const std::string item = unquote(s.substr(0, comma), line);
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    s = s.substr(comma + 1);
  }
  return out;
}

double to_double(std::string_view s, int line) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError(line, "not a number: '" + std::string(s) + "'");
  return v;
}

long long to_int(std::string_view s, int line) {
  const double v = to_double(s, line);
  if (v != std::floor(v)) throw ParseError(line, "expected an integer");
  return static_cast<long long>(v);
}

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::string, SchemeFn>& registry() {
  static std::map<std::string, SchemeFn> r;
  return r;
}

bool builtin(const std::string& name) {
  return name == "integrated" || name == "isotropic" || name == "equal_k" ||
         name == "charging_only";
}

}  // namespace

void load_experiment(std::string_view text, ExperimentSpec& spec, SystemParams& params) {
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key == "sweep_var") {
      spec.sweep_var = unquote(value, line_no);
    } else if (key == "values") {
      spec.values.clear();
      for (const auto& v : split_list(value, line_no)) spec.values.push_back(to_double(v, line_no));
    } else if (key == "realizations") {
      spec.realizations = static_cast<int>(to_int(value, line_no));
    } else if (key == "schemes") {
      spec.schemes = split_list(value, line_no);
    } else if (key == "seed") {
      spec.seed_base = static_cast<std::uint64_t>(to_int(value, line_no));
    } else if (key == "workers") {
      spec.workers = static_cast<int>(to_int(value, line_no));
    } else {
      apply_setting(params, key, unquote(value, line_no), line_no);
    }
  }
  validate(params);
  validate_fields(spec);
}

void validate(const ExperimentSpec& spec) {
  validate_fields(spec);
  if (spec.values.empty()) throw ValidationError("sweep values must be nonempty");
}

void validate_fields(const ExperimentSpec& spec) {
  static const char* vars[] = {"K", "N", "L", "area", "requests"};
  if (std::find(std::begin(vars), std::end(vars), spec.sweep_var) == std::end(vars))
    throw ValidationError("unknown sweep variable '" + spec.sweep_var + "'");
  if (spec.realizations < 1) throw ValidationError("realizations >= 1");
  if (spec.workers < 0) throw ValidationError("workers >= 0");
  if (spec.schemes.empty()) throw ValidationError("at least one scheme");
  for (const auto& s : spec.schemes) {
    if (scheme_known(s)) continue;
    if (s == "sequential")
      throw ValidationError("scheme 'sequential' is a placeholder; register an "
                            "implementation with register_scheme first");
    throw ValidationError("unknown scheme '" + s + "'");
  }
}

void register_scheme(const std::string& name, SchemeFn fn) {
  if (builtin(name)) throw ValidationError("cannot replace built-in scheme '" + name + "'");
  std::lock_guard lock(registry_mutex());
  registry()[name] = std::move(fn);
}

bool scheme_known(const std::string& name) {
  if (builtin(name)) return true;
  std::lock_guard lock(registry_mutex());
  return registry().count(name) > 0;
}

SolveReport charging_modes(ChargingMode mode, const CellProblem& cell,
                           const SystemParams& params) {
  return mode == ChargingMode::kChargingOnly ? solve_charging_only(cell, params)
                                             : solve_pint(cell, params);
}

int active_beams(const Eigen::VectorXd& lambda_q, const SystemParams& params) {
  return static_cast<int>(
      (lambda_q.array() > kActiveBeamFraction * params.p_ap_max).count());
}

namespace {

double efficiency_percent(const Eigen::VectorXd& received, const Eigen::VectorXd& e) {
  double acc = 0.0;
  int n = 0;
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    if (e(i) <= 0.0) continue;
    acc += std::min(1.0, received(i) / e(i));
    ++n;
  }
  return n ? 100.0 * acc / n : 100.0;
}

SchemeSample baseline_sample(BaselineKind kind, const CellProblem& cell,
                             const SystemParams& params, const SolveReport& integ) {
  const double T_c = integ.allocation.T_c;
  const BeamSolution b = baseline_covariance(kind, cell, T_c, params, integ.beams.U_B);
  Allocation a = integ.allocation;
  a.W_q = b.W_q;
  a.alpha = b.alpha;
  const EnergyBreakdown e = energy_breakdown(a, cell, params);
  SchemeSample s;
  s.E_total = e.E_total;
  s.E_charge = e.E_charge;
  s.sum_received = b.received.sum();
  s.efficiency = efficiency_percent(b.received, cell.requests);
  s.active_beams = active_beams(b.lambda_q, params);
  s.outer_iterations = 0.0;
  return s;
}

void apply_sweep(SystemParams& p, const std::string& var, double v) {
  auto as_int = [&](const char* name) {
    if (v != std::floor(v) || v < 1) throw ValidationError(std::string(name) + " must be a positive integer");
    return static_cast<int>(v);
  };
  if (var == "K") p.n_users = as_int("K");
  else if (var == "N") p.n_antennas = as_int("N");
  else if (var == "L") p.n_cells = as_int("L");
  else if (var == "area") p.area_side = v;
  else if (var == "requests") {
    p.request_min *= v;
    p.request_max *= v;
  }
  validate(p);
}

struct CellOutcome {
  std::vector<bool> ok;                 // per scheme
  std::vector<SchemeSample> samples;    // per scheme
  std::vector<std::string> failures;
};

bool spot_checked(std::uint64_t seed, int cell) {
  // Deterministic ~1% sample.
  std::uint64_t x = seed * 0x9E3779B97F4A7C15ull + static_cast<std::uint64_t>(cell);
  x ^= x >> 31;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 29;
  return x % 100 == 0;
}

}  // namespace

SchemeSample sample_of(const SolveReport& r, const CellProblem& cell,
                       const SystemParams& params) {
  SchemeSample s;
  s.E_total = r.energies.E_total;
  s.E_charge = r.energies.E_charge;
  s.sum_received = r.received.sum();
  s.efficiency = efficiency_percent(r.received, cell.requests);
  s.active_beams = active_beams(r.beams.lambda_q, params);
  s.outer_iterations = r.outer_iterations;
  return s;
}

ExperimentResult run_experiment(const ExperimentSpec& spec, const SystemParams& params) {
  validate(spec);
  const int nv = static_cast<int>(spec.values.size());
  const int ns = static_cast<int>(spec.schemes.size());
  std::vector<SystemParams> pv(nv, params);
  for (int v = 0; v < nv; ++v) apply_sweep(pv[v], spec.sweep_var, spec.values[v]);

  std::vector<SchemeFn> custom(ns);
  {
    std::lock_guard lock(registry_mutex());
    for (int s = 0; s < ns; ++s)
      if (!builtin(spec.schemes[s])) custom[s] = registry().at(spec.schemes[s]);
  }
  const bool need_integrated =
      std::any_of(spec.schemes.begin(), spec.schemes.end(),
                  [](const std::string& s) { return s != "charging_only"; });

  const int tasks = nv * spec.realizations;
  std::vector<std::vector<CellOutcome>> outcomes(tasks);

  auto run_task = [&](int t) {
    const int v = t / spec.realizations;
    const int r = t % spec.realizations;
    const SystemParams& p = pv[v];
    const std::uint64_t seed = spec.seed_base + static_cast<std::uint64_t>(r);
    std::vector<CellOutcome>& out = outcomes[t];
    char tag[96];
    std::snprintf(tag, sizeof tag, "value=%.17g realization=%d", spec.values[v], r);
    Scenario sc;
    ChannelRealization ch;
    try {
      sc = generate_scenario(p, p.area_side, seed);
      ch = draw_channels(sc, p, seed);
    } catch (const std::exception& e) {
      CellOutcome o;
      o.ok.assign(ns, false);
      o.samples.resize(ns);
      o.failures.push_back(std::string(tag) + ": " + e.what());
      out.push_back(std::move(o));
      return;
    }
    for (int l = 0; l < sc.n_cells(); ++l) {
      CellOutcome o;
      o.ok.assign(ns, false);
      o.samples.resize(ns);
      const std::string where = std::string(tag) + " cell=" + std::to_string(l);
      const CellProblem cell = make_cell(sc, ch, l);
      SolveReport integ;
      bool have_integ = false;
      std::string integ_error;
      if (need_integrated) {
        try {
          integ = solve_pint(cell, p);
          have_integ = true;
        } catch (const std::exception& e) {
          integ_error = e.what();
        }
      }
      for (int s = 0; s < ns; ++s) {
        const std::string& name = spec.schemes[s];
        try {
          if (name == "charging_only") {
            const SolveReport cr = solve_charging_only(cell, p);
            o.samples[s] = sample_of(cr, cell, p);
          } else {
            if (!have_integ) throw Error(ErrorCode::kInfeasible, integ_error);
            if (name == "integrated") o.samples[s] = sample_of(integ, cell, p);
            else if (name == "isotropic")
              o.samples[s] = baseline_sample(BaselineKind::kIsotropic, cell, p, integ);
            else if (name == "equal_k")
              o.samples[s] = baseline_sample(BaselineKind::kEqualK, cell, p, integ);
            else o.samples[s] = custom[s](cell, p, integ);
          }
          o.ok[s] = true;
        } catch (const std::exception& e) {
          o.failures.push_back(where + " scheme=" + name + ": " + e.what());
        }
      }
      if (have_integ && spot_checked(seed, l)) {
        for (const std::string& v : check_feasibility(integ, cell, p))
          o.failures.push_back(where + " invariant violated: " + v);
        if ((integ.received.array() > cell.requests.array() * (1.0 + 1e-12)).any())
          o.failures.push_back(where + " invariant violated: received > request");
      }
      out.push_back(std::move(o));
    }
  };

  int workers = spec.workers > 0 ? spec.workers
                                 : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min(workers, tasks);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int t = next++; t < tasks; t = next++) run_task(t);
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // Single-threaded aggregation in task order keeps the output independent
  // of the worker count.
  ExperimentResult res;
  static const char* metrics[] = {"E_total",      "E_charge",         "sum_received",
                                  "efficiency",   "active_beams",     "outer_iterations"};
  for (int v = 0; v < nv; ++v) {
    for (int s = 0; s < ns; ++s) {
      std::vector<std::vector<double>> vals(std::size(metrics));
      int attempted = 0, failed = 0;
      for (int r = 0; r < spec.realizations; ++r) {
        for (const CellOutcome& o : outcomes[v * spec.realizations + r]) {
          ++attempted;
          if (!o.ok[s]) {
            ++failed;
            continue;
          }
          const SchemeSample& x = o.samples[s];
          const double row[] = {x.E_total,    x.E_charge,     x.sum_received,
                                x.efficiency, x.active_beams, x.outer_iterations};
          for (size_t m = 0; m < std::size(metrics); ++m) vals[m].push_back(row[m]);
        }
      }
      auto push = [&](const char* metric, const std::vector<double>& xs) {
        MetricsRow row{spec.sweep_var, spec.values[v], spec.schemes[s], metric, 0.0, 0.0,
                       static_cast<int>(xs.size())};
        if (!xs.empty()) {
          double sum = 0.0;
          for (double x : xs) sum += x;
          row.mean = sum / xs.size();
          double ss = 0.0;
          for (double x : xs) ss += (x - row.mean) * (x - row.mean);
          row.std = xs.size() > 1 ? std::sqrt(ss / (xs.size() - 1)) : 0.0;
        }
        res.rows.push_back(row);
      };
      for (size_t m = 0; m < std::size(metrics); ++m) push(metrics[m], vals[m]);
      std::vector<double> infeasible(attempted, 0.0);
      std::fill(infeasible.begin(), infeasible.begin() + failed, 1.0);
      push("infeasible_fraction", infeasible);
      if (s == 0) res.attempted_cells += attempted;
    }
  }
  for (const auto& cells : outcomes)
    for (const CellOutcome& o : cells)
      res.failures.insert(res.failures.end(), o.failures.begin(), o.failures.end());
  return res;
}

void write_metrics_csv(std::ostream& os, const std::vector<MetricsRow>& rows) {
  os << "sweep_var,sweep_value,scheme,metric,mean,std,n\n";
  char buf[256];
  for (const MetricsRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%.17g,%s,%s,%.17g,%.17g,%d\n", r.sweep_var.c_str(),
                  r.sweep_value, r.scheme.c_str(), r.metric.c_str(), r.mean, r.std, r.n);
    os << buf;
  }
}

}  // namespace mecwpt
