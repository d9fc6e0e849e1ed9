// Copyright 2026 The cit Authors
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

#ifndef CIT_CIT_H_
#define CIT_CIT_H_

/* C interface to the conditional-independence testing library.
 *
 * Objects are opaque handles released with the matching *_free function.
 * Every fallible call returns a cit_status; on failure cit_last_error()
 * describes the most recent error on the calling thread. Strings returned
 * through char** out-parameters are heap allocated and released with
 * cit_string_free. Indices are 0-based in this interface. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CIT_API __declspec(dllexport)
#else
#define CIT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cit_status {
  CIT_OK = 0,
  CIT_ERR_INVALID_ARGUMENT = 1,
  CIT_ERR_IO = 2,
  CIT_ERR_PARSE = 3,
  CIT_ERR_BUDGET_EXHAUSTED = 4,
  CIT_ERR_INSUFFICIENT_SAMPLES = 5,
  CIT_ERR_UNNORMALIZED = 6,
  CIT_ERR_INTERNAL = 7
} cit_status;

typedef enum cit_mode {
  CIT_MODE_BINARY = 0,
  CIT_MODE_GENERAL = 1,
  CIT_MODE_CMI = 2
} cit_mode;

typedef struct cit_distribution cit_distribution;
typedef struct cit_samples cit_samples;
typedef struct cit_verdict cit_verdict;

CIT_API const char* cit_version(void);
CIT_API const char* cit_last_error(void);
CIT_API void cit_string_free(char* s);

/* Distributions. */

typedef struct cit_generate_params {
  const char* family; /* e.g. "random_ci", "no_binary_r1", "nnn_d1" */
  uint64_t n;
  uint64_t m;         /* ensemble parameter of the binary families */
  double epsilon;
  size_t l1;          /* random families only */
  size_t l2;
  uint64_t seed;
} cit_generate_params;

CIT_API void cit_generate_params_init(cit_generate_params* params);

CIT_API cit_status cit_distribution_load(const char* path, cit_distribution** out);
CIT_API cit_status cit_distribution_save(const cit_distribution* dist,
                                         const char* path);
CIT_API cit_status cit_distribution_generate(const cit_generate_params* params,
                                             cit_distribution** out);
CIT_API void cit_distribution_free(cit_distribution* dist);

CIT_API cit_status cit_distribution_dims(const cit_distribution* dist,
                                         size_t* l1, size_t* l2, size_t* n);
CIT_API cit_status cit_distribution_ci_proxy(const cit_distribution* dist,
                                             double* out);
/* Conditional mutual information in bits. */
CIT_API cit_status cit_distribution_cmi(const cit_distribution* dist, double* out);
/* Generation metadata as JSON; "{}" for loaded distributions. */
CIT_API cit_status cit_distribution_metadata_json(const cit_distribution* dist,
                                                  char** out_json);

/* Samples. */

CIT_API cit_status cit_samples_load(const char* path, cit_samples** out);
CIT_API cit_status cit_samples_save(const cit_samples* samples, const char* path);
CIT_API cit_status cit_samples_draw_fixed(const cit_distribution* dist,
                                          uint64_t count, uint64_t seed,
                                          cit_samples** out);
CIT_API cit_status cit_samples_draw_poissonized(const cit_distribution* dist,
                                                double m, uint64_t seed,
                                                cit_samples** out);
CIT_API void cit_samples_free(cit_samples* samples);
CIT_API cit_status cit_samples_count(const cit_samples* samples, uint64_t* out);

/* Testers. */

typedef struct cit_tester_config {
  cit_mode mode;
  double epsilon;
  double beta;
  double zeta;
  double c_cmi;
  int has_m;   /* nonzero: use m instead of the sample-size rule */
  uint64_t m;
  int has_tau; /* nonzero: use tau instead of the default threshold */
  double tau;
  uint64_t seed;
} cit_tester_config;

/* Defaults: binary mode, epsilon 0.5, beta 2, zeta 2, c_cmi 1, seed 0. */
CIT_API void cit_tester_config_init(cit_tester_config* cfg);

CIT_API cit_status cit_test_distribution(const cit_distribution* dist,
                                         const cit_tester_config* cfg,
                                         cit_verdict** out);
CIT_API cit_status cit_test_samples(const cit_samples* samples,
                                    const cit_tester_config* cfg,
                                    cit_verdict** out);

CIT_API int cit_verdict_accept(const cit_verdict* v);
CIT_API double cit_verdict_statistic(const cit_verdict* v);
CIT_API double cit_verdict_threshold(const cit_verdict* v);
CIT_API uint64_t cit_verdict_m_used(const cit_verdict* v);
CIT_API uint64_t cit_verdict_samples_drawn(const cit_verdict* v);
CIT_API size_t cit_verdict_bin_count(const cit_verdict* v);
CIT_API cit_status cit_verdict_bin(const cit_verdict* v, size_t index,
                                   uint32_t* z, uint64_t* sigma, double* omega,
                                   double* a);
CIT_API cit_status cit_verdict_to_json(const cit_verdict* v, char** out_json);
CIT_API void cit_verdict_free(cit_verdict* v);

CIT_API cit_status cit_sample_complexity_binary(uint64_t n, double epsilon,
                                                double beta, uint64_t* out);
CIT_API cit_status cit_sample_complexity_general(uint64_t n, size_t l1, size_t l2,
                                                 double epsilon, double zeta,
                                                 uint64_t* m, double* full,
                                                 double* simplified);

/* Threshold calibration from `trials` null runs. With a fixed distribution
 * only the samples vary; with a family a fresh instance is drawn per trial. */
CIT_API cit_status cit_calibrate(const cit_distribution* null_dist,
                                 const cit_tester_config* cfg, size_t trials,
                                 double* tau_out);
CIT_API cit_status cit_calibrate_family(const cit_generate_params* null_family,
                                        const cit_tester_config* cfg,
                                        size_t trials, double* tau_out);

/* Experiments. */

/* Runs the plan file. The CSV goes to out_path (or the plan's "out" key when
 * out_path is NULL or empty) and, if csv_out is non-NULL, is also returned.
 * Invalid plans yield CIT_ERR_PARSE. */
CIT_API cit_status cit_power_run(const char* plan_path, const char* out_path,
                                 int include_timing, char** csv_out);

typedef struct cit_minm_params {
  cit_mode mode;
  uint64_t n;
  size_t l1;
  size_t l2;
  double epsilon;
  const char* null_family;
  const char* alt_family;
  uint64_t ensemble_m; /* 0: follow the probed m */
  size_t refine;
  double target_power;
  uint64_t seed;
  size_t trials;
  size_t calibration_trials;
  uint64_t start_m;
  uint64_t max_m;
} cit_minm_params;

CIT_API void cit_minm_params_init(cit_minm_params* params);
/* report_json (nullable) receives the probe log. */
CIT_API cit_status cit_find_min_m(const cit_minm_params* params, uint64_t* m_out,
                                  char** report_json);

/* Debug helpers. */

/* Unbiased estimate of the polynomial (text format "c : i^e ...", 1-based)
 * homogenized to `degree` (0: its maximum degree), at the fingerprint
 * "i:count ...". Returns the exact rational and its double value. */
CIT_API cit_status cit_poly_estimate(const char* poly_text, size_t num_vars,
                                     unsigned degree, const char* fingerprint_text,
                                     char** exact_out, double* value_out);

/* Coefficient grid a_xy as CSV rows from 0-based (x, y) pairs. */
CIT_API cit_status cit_flatten_grid_csv(const uint32_t* xs, const uint32_t* ys,
                                        size_t count, size_t l1, size_t l2,
                                        size_t t1, size_t t2, char** csv_out);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* CIT_CIT_H_ */
