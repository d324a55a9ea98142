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

/* C interface to the mecwpt solver library.
 *
 * All functions returning int report a mecwpt_status; on failure the message
 * is available from mecwpt_last_error() on the calling thread. Handles are
 * opaque and owned by the caller; release them with the matching _free
 * function. Strings returned through char** are released with
 * mecwpt_string_free. */
#ifndef MECWPT_MECWPT_H_
#define MECWPT_MECWPT_H_

#include <stdint.h>

#if defined(MECWPT_BUILDING_LIBRARY)
#define MECWPT_API __attribute__((visibility("default")))
#else
#define MECWPT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mecwpt_status {
  MECWPT_OK = 0,
  MECWPT_ERR_PARSE = 1,
  MECWPT_ERR_VALIDATION = 2,
  MECWPT_ERR_DOMAIN = 3,
  MECWPT_ERR_INFEASIBLE = 4,
  MECWPT_ERR_NOT_CONVERGED = 5,
  MECWPT_ERR_CHARGING_DISABLED = 6,
  MECWPT_ERR_LP_INFEASIBLE = 7,
  MECWPT_ERR_LP_UNBOUNDED = 8,
  MECWPT_ERR_IO = 9,
  MECWPT_ERR_INVALID_ARGUMENT = 10,
  MECWPT_ERR_INTERNAL = 99
} mecwpt_status;

typedef struct mecwpt_params mecwpt_params;
typedef struct mecwpt_scenario mecwpt_scenario;
typedef struct mecwpt_report mecwpt_report;
typedef struct mecwpt_experiment mecwpt_experiment;

MECWPT_API const char* mecwpt_version(void);
MECWPT_API const char* mecwpt_last_error(void);
MECWPT_API const char* mecwpt_status_name(int status);
MECWPT_API void mecwpt_string_free(char* s);

/* System parameters. Keys and units as in the configuration file format,
 * e.g. ("K", "4"), ("T_d", "20 ms"), ("P", "46 dBm"). */
MECWPT_API int mecwpt_params_default(mecwpt_params** out);
MECWPT_API int mecwpt_params_from_string(const char* text, mecwpt_params** out);
MECWPT_API int mecwpt_params_from_file(const char* path, mecwpt_params** out);
MECWPT_API int mecwpt_params_set(mecwpt_params* params, const char* key, const char* value);
MECWPT_API int mecwpt_params_serialize(const mecwpt_params* params, char** out);
MECWPT_API void mecwpt_params_free(mecwpt_params* params);

/* User placement, tasks, requests and one channel draw. area <= 0 keeps the
 * configured side length. */
MECWPT_API int mecwpt_scenario_create(const mecwpt_params* params, double area,
                                      uint64_t seed, mecwpt_scenario** out);
MECWPT_API int mecwpt_scenario_cells(const mecwpt_scenario* sc, int* n_cells);
MECWPT_API int mecwpt_scenario_write_channels_csv(const mecwpt_scenario* sc, int cell,
                                                  const char* path);
/* Replaces the small-scale channels of one cell (N x K from the CSV). */
MECWPT_API int mecwpt_scenario_read_channels_csv(mecwpt_scenario* sc, int cell,
                                                 const char* path);
MECWPT_API void mecwpt_scenario_free(mecwpt_scenario* sc);

/* Nested solve of one cell. */
MECWPT_API int mecwpt_solve(const mecwpt_params* params, const mecwpt_scenario* sc,
                            int cell, mecwpt_report** out);
/* Beamforming alone over the full latency budget, no computation. */
MECWPT_API int mecwpt_solve_charging_only(const mecwpt_params* params,
                                          const mecwpt_scenario* sc, int cell,
                                          mecwpt_report** out);
/* scheme: "isotropic" or "equal_k". Time allocation and beam directions
 * come from the nested solve; only the charging covariance changes. */
MECWPT_API int mecwpt_baseline(const mecwpt_params* params, const mecwpt_scenario* sc,
                               int cell, const char* scheme, mecwpt_report** out);

MECWPT_API int mecwpt_report_json(const mecwpt_report* r, char** out);
/* Scalars by report key, e.g. "E_total", "E_charge", "T_c", "outer_iterations". */
MECWPT_API int mecwpt_report_scalar(const mecwpt_report* r, const char* name, double* out);
/* Inner time-allocation trace: iter,dual_value,grad_norm,T1,T3. */
MECWPT_API int mecwpt_report_write_trace_csv(const mecwpt_report* r, const char* path);
/* One row per beam: beam,power,gain_user0,... */
MECWPT_API int mecwpt_report_write_beams_csv(const mecwpt_report* r, const char* path);
MECWPT_API void mecwpt_report_free(mecwpt_report* r);

/* Monte-Carlo sweeps. Settings use the experiment file keys (sweep_var,
 * values, realizations, schemes, seed, workers) or any system parameter. */
MECWPT_API int mecwpt_experiment_create(const mecwpt_params* base, mecwpt_experiment** out);
MECWPT_API int mecwpt_experiment_load(mecwpt_experiment* ex, const char* text);
MECWPT_API int mecwpt_experiment_load_file(mecwpt_experiment* ex, const char* path);
MECWPT_API int mecwpt_experiment_set(mecwpt_experiment* ex, const char* key,
                                     const char* value);
/* Writes sweep_var,sweep_value,scheme,metric,mean,std,n. */
MECWPT_API int mecwpt_experiment_run(mecwpt_experiment* ex, const char* out_csv_path);
MECWPT_API int mecwpt_experiment_failures(const mecwpt_experiment* ex, int* count);
MECWPT_API const char* mecwpt_experiment_failure(const mecwpt_experiment* ex, int index);
MECWPT_API void mecwpt_experiment_free(mecwpt_experiment* ex);

#ifdef __cplusplus
}
#endif

#endif /* MECWPT_MECWPT_H_ */
