/*
   Copyright 2026 The dsqm Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef DSQM_H
#define DSQM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(DSQM_BUILDING)
#    define DSQM_API __declspec(dllexport)
#  else
#    define DSQM_API __declspec(dllimport)
#  endif
#else
#  define DSQM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dsqm_status {
    DSQM_OK = 0,
    DSQM_ERR_DOMAIN = 1,   /* argument outside the domain of a formula */
    DSQM_ERR_CONFIG = 2,   /* invalid or inconsistent configuration */
    DSQM_ERR_IO = 3,
    DSQM_ERR_ARG = 4,      /* null handle, short buffer, mismatched supports */
    DSQM_ERR_VERIFY = 5,   /* a verification check failed */
    DSQM_ERR_INTERNAL = 6
} dsqm_status;

typedef struct dsqm_config dsqm_config;
typedef struct dsqm_run_result dsqm_run_result;
typedef struct dsqm_verify_report dsqm_verify_report;

/* Message of the last failing call on this thread ("" if none). */
DSQM_API const char* dsqm_last_error(void);
DSQM_API const char* dsqm_version(void);

/* ---- configuration ---------------------------------------------------- */

DSQM_API dsqm_status dsqm_config_create(dsqm_config** out);
DSQM_API void dsqm_config_destroy(dsqm_config* config);

/* Keys as in the configuration file: scenario, sources, delta, p1, ell, np,
   nt, p, mode, seed, threads, block_size, windings. */
DSQM_API dsqm_status dsqm_config_set(dsqm_config* config, const char* key, const char* value);

/* Current value of `key` in file syntax. Writes at most `cap` bytes including
   the terminator; `needed` (optional) receives the full length + 1. */
DSQM_API dsqm_status dsqm_config_get(const dsqm_config* config, const char* key, char* buf, size_t cap,
                                     size_t* needed);

/* Applies the keys of a configuration file on top of the current values. */
DSQM_API dsqm_status dsqm_config_load_file(dsqm_config* config, const char* path);
DSQM_API dsqm_status dsqm_config_validate(const dsqm_config* config);

/* Whole configuration in file syntax, same buffer convention as dsqm_config_get. */
DSQM_API dsqm_status dsqm_config_to_string(const dsqm_config* config, char* buf, size_t cap, size_t* needed);

/* Writes the configuration plus version and timestamp comments so the run can
   be replayed with dsqm_config_load_file. `note` (optional) becomes a comment. */
DSQM_API dsqm_status dsqm_write_manifest(const dsqm_config* config, const char* path, const char* note);

/* ---- runs ------------------------------------------------------------- */

DSQM_API dsqm_status dsqm_run(const dsqm_config* config, dsqm_run_result** out);

/* As dsqm_run, also writing per-particle records to `diagnostics_path`
   (interference scenarios only). */
DSQM_API dsqm_status dsqm_run_with_diagnostics(const dsqm_config* config, const char* diagnostics_path,
                                               dsqm_run_result** out);
DSQM_API void dsqm_run_result_destroy(dsqm_run_result* result);

DSQM_API dsqm_status dsqm_result_support(const dsqm_run_result* result, int64_t* offset, size_t* size,
                                         uint64_t* total);

/* Copies `cap` >= size values; the arrays are indexed from the support offset. */
DSQM_API dsqm_status dsqm_result_counts(const dsqm_run_result* result, uint64_t* counts, size_t cap);
DSQM_API dsqm_status dsqm_result_model(const dsqm_run_result* result, double* values, size_t cap);
DSQM_API dsqm_status dsqm_result_qm(const dsqm_run_result* result, double* values, size_t cap);

typedef struct dsqm_comparison {
    double l1;
    double chi2;
    uint64_t dof;
    double max_abs_dev;
    double critical;
    double p_value;
    int pass;
} dsqm_comparison;

/* Goodness of fit of the arrivals against the model column. */
DSQM_API dsqm_status dsqm_result_compare(const dsqm_run_result* result, double alpha, dsqm_comparison* out);

typedef struct dsqm_run_stats {
    double mean_final_momentum;
    double late_mean_momentum;
    double mean_velocity;
    uint64_t bosons_created;
    uint64_t wide_site_bosons;
} dsqm_run_stats;

DSQM_API dsqm_status dsqm_result_stats(const dsqm_run_result* result, dsqm_run_stats* out);

/* Table with columns xi,count,frequency,model_P,qm_oracle. Path "-" is stdout. */
DSQM_API dsqm_status dsqm_result_write_csv(const dsqm_run_result* result, const char* path);
DSQM_API dsqm_status dsqm_result_write_json(const dsqm_run_result* result, const char* path);

/* ---- verification ----------------------------------------------------- */

/* suite: pmf, energy, action, dbb, matterwave, lorentz, boson or all.
   tolerance <= 0 keeps the per-check defaults. Returns DSQM_OK even when
   checks fail; see dsqm_verify_passed. */
DSQM_API dsqm_status dsqm_verify(const char* suite, int64_t tau_max, double tolerance, uint64_t seed,
                                 dsqm_verify_report** out);
DSQM_API void dsqm_verify_report_destroy(dsqm_verify_report* report);
DSQM_API int dsqm_verify_passed(const dsqm_verify_report* report);
DSQM_API size_t dsqm_verify_count(const dsqm_verify_report* report);

typedef struct dsqm_verify_check {
    const char* suite; /* owned by the report */
    const char* name;
    double value;
    double bound;
    int lower_bound;   /* 1: value must reach bound; 0: must not exceed it */
    int pass;
} dsqm_verify_check;

DSQM_API dsqm_status dsqm_verify_get(const dsqm_verify_report* report, size_t index, dsqm_verify_check* out);
DSQM_API dsqm_status dsqm_verify_write_text(const dsqm_verify_report* report, const char* path);
DSQM_API dsqm_status dsqm_verify_write_json(const dsqm_verify_report* report, const char* path);

/* ---- closed forms ----------------------------------------------------- */

DSQM_API dsqm_status dsqm_transition_probs(double p, double* a, double* b, double* c);
DSQM_API dsqm_status dsqm_pmf_free(int64_t xi, int64_t tau, double p, double* out);
DSQM_API dsqm_status dsqm_ensemble_probability(int64_t xi, int64_t tau, double* out);
DSQM_API dsqm_status dsqm_two_slit_density(double xi, double tau, double p1, double p2, double delta, double* out);
DSQM_API dsqm_status dsqm_ring_steady_momentum(double p, int64_t ell, double* out);
DSQM_API dsqm_status dsqm_matter_frequency(double e, double* out);

#ifdef __cplusplus
}
#endif

#endif /* DSQM_H */
