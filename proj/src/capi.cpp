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

#include "mecwpt/mecwpt.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <sstream>
#include <string>

#include "mecwpt/baselines.hpp"
#include "mecwpt/error.hpp"
#include "mecwpt/harness.hpp"
#include "mecwpt/orchestrator.hpp"
#include "mecwpt/report_json.hpp"

using namespace mecwpt;

struct mecwpt_params {
  SystemParams p;
};

struct mecwpt_scenario {
  SystemParams p;
  Scenario scenario;
  ChannelRealization channels;
};

struct mecwpt_report {
  SystemParams p;
  CellProblem cell;
  SolveReport report;
};

struct mecwpt_experiment {
  SystemParams p;
  ExperimentSpec spec;
  ExperimentResult result;
};

namespace {

thread_local std::string g_last_error;

int fail(int code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
int guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return MECWPT_OK;
  } catch (const Error& e) {
    return fail(static_cast<int>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(MECWPT_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(MECWPT_ERR_INTERNAL, e.what());
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
}

std::string read_file(const char* path) {
  require(path != nullptr, "path is null");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, std::string("cannot open ") + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream open_out(const char* path) {
  require(path != nullptr, "path is null");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, std::string("cannot write ") + path);
  return out;
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

CellProblem cell_of(const mecwpt_scenario* sc, int cell) {
  require(sc != nullptr, "scenario is null");
  require(cell >= 0 && cell < sc->scenario.n_cells(), "cell index out of range");
  return make_cell(sc->scenario, sc->channels, cell);
}

}  // namespace

extern "C" {

const char* mecwpt_version(void) { return "0.1.0"; }

const char* mecwpt_last_error(void) { return g_last_error.c_str(); }

const char* mecwpt_status_name(int status) {
  switch (status) {
    case MECWPT_OK: return "ok";
    case MECWPT_ERR_PARSE: return "parse error";
    case MECWPT_ERR_VALIDATION: return "validation error";
    case MECWPT_ERR_DOMAIN: return "domain error";
    case MECWPT_ERR_INFEASIBLE: return "infeasible";
    case MECWPT_ERR_NOT_CONVERGED: return "not converged";
    case MECWPT_ERR_CHARGING_DISABLED: return "charging disabled";
    case MECWPT_ERR_LP_INFEASIBLE: return "LP infeasible";
    case MECWPT_ERR_LP_UNBOUNDED: return "LP unbounded";
    case MECWPT_ERR_IO: return "I/O error";
    case MECWPT_ERR_INVALID_ARGUMENT: return "invalid argument";
    default: return "internal error";
  }
}

void mecwpt_string_free(char* s) { std::free(s); }

int mecwpt_params_default(mecwpt_params** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = new mecwpt_params{};
  });
}

int mecwpt_params_from_string(const char* text, mecwpt_params** out) {
  return guarded([&] {
    require(text != nullptr && out != nullptr, "null argument");
    auto h = std::make_unique<mecwpt_params>();
    h->p = load_params(text);
    *out = h.release();
  });
}

int mecwpt_params_from_file(const char* path, mecwpt_params** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    const std::string text = read_file(path);
    auto h = std::make_unique<mecwpt_params>();
    h->p = load_params(text);
    *out = h.release();
  });
}

int mecwpt_params_set(mecwpt_params* params, const char* key, const char* value) {
  return guarded([&] {
    require(params && key && value, "null argument");
    SystemParams next = params->p;
    apply_setting(next, key, value);
    validate(next);
    params->p = next;
  });
}

int mecwpt_params_serialize(const mecwpt_params* params, char** out) {
  return guarded([&] {
    require(params && out, "null argument");
    *out = dup(serialize(params->p));
  });
}

void mecwpt_params_free(mecwpt_params* params) { delete params; }

int mecwpt_scenario_create(const mecwpt_params* params, double area, uint64_t seed,
                           mecwpt_scenario** out) {
  return guarded([&] {
    require(params && out, "null argument");
    auto h = std::make_unique<mecwpt_scenario>();
    h->p = params->p;
    if (area > 0.0) h->p.area_side = area;
    validate(h->p);
    h->scenario = generate_scenario(h->p, h->p.area_side, seed);
    h->channels = draw_channels(h->scenario, h->p, seed);
    *out = h.release();
  });
}

int mecwpt_scenario_cells(const mecwpt_scenario* sc, int* n_cells) {
  return guarded([&] {
    require(sc && n_cells, "null argument");
    *n_cells = sc->scenario.n_cells();
  });
}

int mecwpt_scenario_write_channels_csv(const mecwpt_scenario* sc, int cell,
                                       const char* path) {
  return guarded([&] {
    const CellProblem c = cell_of(sc, cell);
    std::ofstream out = open_out(path);
    write_channels_csv(out, c.h);
    if (!out) throw Error(ErrorCode::kIo, std::string("write failed: ") + path);
  });
}

int mecwpt_scenario_read_channels_csv(mecwpt_scenario* sc, int cell, const char* path) {
  return guarded([&] {
    const CellProblem c = cell_of(sc, cell);
    std::ifstream in(path ? path : "");
    if (!in) throw Error(ErrorCode::kIo, std::string("cannot open ") + (path ? path : "(null)"));
    const Eigen::MatrixXcd h = read_channels_csv(in);
    if (h.rows() != c.n_antennas || h.cols() != c.n_users)
      throw ValidationError("channel CSV must have K rows of N complex entries");
    sc->channels.h.middleCols(sc->scenario.user_index(cell, 0), c.n_users) = h;
  });
}

void mecwpt_scenario_free(mecwpt_scenario* sc) { delete sc; }

namespace {

void check_shape(const mecwpt_params* params, const mecwpt_scenario* sc) {
  require(params != nullptr && sc != nullptr, "null argument");
  if (params->p.n_antennas != sc->p.n_antennas || params->p.n_users != sc->p.n_users ||
      params->p.n_cells != sc->p.n_cells)
    throw ValidationError("parameters and scenario disagree on N, K or L");
}

}  // namespace

int mecwpt_solve(const mecwpt_params* params, const mecwpt_scenario* sc, int cell,
                 mecwpt_report** out) {
  return guarded([&] {
    check_shape(params, sc);
    require(out != nullptr, "out is null");
    auto h = std::make_unique<mecwpt_report>();
    h->p = params->p;
    h->cell = cell_of(sc, cell);
    h->report = solve_pint(h->cell, h->p);
    *out = h.release();
  });
}

int mecwpt_solve_charging_only(const mecwpt_params* params, const mecwpt_scenario* sc,
                               int cell, mecwpt_report** out) {
  return guarded([&] {
    check_shape(params, sc);
    require(out != nullptr, "out is null");
    auto h = std::make_unique<mecwpt_report>();
    h->p = params->p;
    h->cell = cell_of(sc, cell);
    h->report = solve_charging_only(h->cell, h->p);
    *out = h.release();
  });
}

int mecwpt_baseline(const mecwpt_params* params, const mecwpt_scenario* sc, int cell,
                    const char* scheme, mecwpt_report** out) {
  return guarded([&] {
    check_shape(params, sc);
    require(out != nullptr && scheme != nullptr, "null argument");
    const BaselineKind kind = parse_baseline(scheme);
    auto h = std::make_unique<mecwpt_report>();
    h->p = params->p;
    h->cell = cell_of(sc, cell);
    SolveReport r = solve_pint(h->cell, h->p);
    const BeamSolution b =
        baseline_covariance(kind, h->cell, r.allocation.T_c, h->p, r.beams.U_B);
    r.allocation.W_q = b.W_q;
    r.allocation.alpha = b.alpha;
    r.energies = energy_breakdown(r.allocation, h->cell, h->p);
    r.received = b.received;
    r.alpha = b.alpha;
    r.beams = b;
    h->report = std::move(r);
    *out = h.release();
  });
}

int mecwpt_report_json(const mecwpt_report* r, char** out) {
  return guarded([&] {
    require(r && out, "null argument");
    *out = dup(report_to_json(r->report, r->cell, r->p));
  });
}

int mecwpt_report_scalar(const mecwpt_report* r, const char* name, double* out) {
  return guarded([&] {
    require(r && name && out, "null argument");
    const SolveReport& x = r->report;
    const std::string n = name;
    const EnergyBreakdown& e = x.energies;
    if (n == "E_total") *out = e.E_total;
    else if (n == "E_u") *out = e.E_u;
    else if (n == "E_m") *out = e.E_m;
    else if (n == "E_charge") *out = e.E_charge;
    else if (n == "E_offload") *out = e.E_offload;
    else if (n == "E_local") *out = e.E_local;
    else if (n == "E_mec_compute") *out = e.E_mec_compute;
    else if (n == "E_download") *out = e.E_download;
    else if (n == "T1") *out = x.allocation.T1;
    else if (n == "T2") *out = x.allocation.T2;
    else if (n == "T3") *out = x.allocation.T3;
    else if (n == "T_c") *out = x.allocation.T_c;
    else if (n == "sum_received") *out = x.received.sum();
    else if (n == "charge_power") *out = x.allocation.W_q.size() ? x.allocation.W_q.trace().real() : 0.0;
    else if (n == "active_beams") *out = active_beams(x.beams.lambda_q, r->p);
    else if (n == "outer_iterations") *out = x.outer_iterations;
    else if (n == "inner_iterations") *out = x.inner_iterations;
    else if (n == "converged") *out = x.converged ? 1.0 : 0.0;
    else if (n == "offload_duality_gap") *out = x.p2.relative_gap();
    else if (n == "offload_link_duality_gap") *out = x.p2.link_relative_gap();
    else if (n == "wall_time") *out = x.wall_time;
    else throw Error(ErrorCode::kInvalidArgument, "unknown report scalar '" + n + "'");
  });
}

int mecwpt_report_write_trace_csv(const mecwpt_report* r, const char* path) {
  return guarded([&] {
    require(r != nullptr, "report is null");
    std::ofstream out = open_out(path);
    write_p2_trace_csv(out, r->report.p2.trace);
    if (!out) throw Error(ErrorCode::kIo, std::string("write failed: ") + path);
  });
}

int mecwpt_report_write_beams_csv(const mecwpt_report* r, const char* path) {
  return guarded([&] {
    require(r != nullptr, "report is null");
    std::ofstream out = open_out(path);
    write_beam_report_csv(out, r->report.beams, r->cell);
    if (!out) throw Error(ErrorCode::kIo, std::string("write failed: ") + path);
  });
}

void mecwpt_report_free(mecwpt_report* r) { delete r; }

int mecwpt_experiment_create(const mecwpt_params* base, mecwpt_experiment** out) {
  return guarded([&] {
    require(base && out, "null argument");
    auto h = std::make_unique<mecwpt_experiment>();
    h->p = base->p;
    *out = h.release();
  });
}

int mecwpt_experiment_load(mecwpt_experiment* ex, const char* text) {
  return guarded([&] {
    require(ex && text, "null argument");
    ExperimentSpec spec = ex->spec;
    SystemParams p = ex->p;
    load_experiment(text, spec, p);
    ex->spec = spec;
    ex->p = p;
  });
}

int mecwpt_experiment_load_file(mecwpt_experiment* ex, const char* path) {
  return guarded([&] {
    require(ex != nullptr, "experiment is null");
    const std::string text = read_file(path);
    ExperimentSpec spec = ex->spec;
    SystemParams p = ex->p;
    load_experiment(text, spec, p);
    ex->spec = spec;
    ex->p = p;
  });
}

int mecwpt_experiment_set(mecwpt_experiment* ex, const char* key, const char* value) {
  return guarded([&] {
    require(ex && key && value, "null argument");
    ExperimentSpec spec = ex->spec;
    SystemParams p = ex->p;
    load_experiment(std::string(key) + " = " + value, spec, p);
    ex->spec = spec;
    ex->p = p;
  });
}

int mecwpt_experiment_run(mecwpt_experiment* ex, const char* out_csv_path) {
  return guarded([&] {
    require(ex != nullptr, "experiment is null");
    std::ofstream out = open_out(out_csv_path);
    ex->result = run_experiment(ex->spec, ex->p);
    write_metrics_csv(out, ex->result.rows);
    if (!out) throw Error(ErrorCode::kIo, std::string("write failed: ") + out_csv_path);
  });
}

int mecwpt_experiment_failures(const mecwpt_experiment* ex, int* count) {
  return guarded([&] {
    require(ex && count, "null argument");
    *count = static_cast<int>(ex->result.failures.size());
  });
}

const char* mecwpt_experiment_failure(const mecwpt_experiment* ex, int index) {
  if (!ex || index < 0 || index >= static_cast<int>(ex->result.failures.size())) return nullptr;
  return ex->result.failures[index].c_str();
}

void mecwpt_experiment_free(mecwpt_experiment* ex) { delete ex; }

}  // extern "C"
