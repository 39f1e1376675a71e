// Copyright 2026 The evlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef EVLAB_EVLAB_H
#define EVLAB_EVLAB_H

#include <stddef.h>

#if defined(_WIN32)
#define EVLAB_API __declspec(dllexport)
#else
#define EVLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum evlab_status {
  EVLAB_OK = 0,
  EVLAB_VERIFICATION_FAILED = 1,
  EVLAB_ERR_USAGE = 2,
  EVLAB_ERR_CONFIG = 3,
  EVLAB_ERR_FORMAT = 4,
  EVLAB_ERR_BLOWUP = 5,
  EVLAB_INCOMPARABLE = 6,
  EVLAB_ERR_PRECONDITION = 7,
  EVLAB_ERR_INTEGRITY = 8,
  EVLAB_ERR_INTERNAL = 9
} evlab_status;

typedef struct evlab_config evlab_config;
typedef struct evlab_candidate evlab_candidate;

/* Library version, statically allocated. */
EVLAB_API const char* evlab_version(void);

/* Message of the last failed call on this thread; "" when none. Valid until
   the next failing call on the same thread. */
EVLAB_API const char* evlab_last_error(void);

/* Process exit code for a status: 0 pass, 1 verification failure,
   2 usage/format, 3 blow-up, 4 incomparable selection. */
EVLAB_API int evlab_exit_code(evlab_status status);

/* Releases strings returned through char** out-parameters. */
EVLAB_API void evlab_string_free(char* s);

/* Solver configuration (flat key=value text). */
EVLAB_API evlab_status evlab_config_new(evlab_config** out);
EVLAB_API evlab_status evlab_config_parse(const char* text, evlab_config** out);
EVLAB_API evlab_status evlab_config_load(const char* path, evlab_config** out);
EVLAB_API evlab_status evlab_config_set(evlab_config* cfg, const char* key, const char* value);
EVLAB_API evlab_status evlab_config_to_text(const evlab_config* cfg, char** out);
EVLAB_API void evlab_config_free(evlab_config* cfg);

/* Candidates: a velocity trajectory with its energy trace. */
EVLAB_API evlab_status evlab_simulate(const evlab_config* cfg, evlab_candidate** out);
EVLAB_API evlab_status evlab_candidate_load(const char* dir, evlab_candidate** out);
EVLAB_API evlab_status evlab_candidate_save(const evlab_candidate* c, const char* dir);
/* Keeps modes with |k|_inf <= m and moves the discarded energy into xi. */
EVLAB_API evlab_status evlab_candidate_coarse_grain(const evlab_candidate* c, int m,
                                                    evlab_candidate** out);
EVLAB_API evlab_status evlab_candidate_size(const evlab_candidate* c, size_t* n);
/* Copies up to capacity samples into each non-null array; *written receives
   the number copied. */
EVLAB_API evlab_status evlab_candidate_trace(const evlab_candidate* c, double* times, double* E,
                                             double* kinetic, double* xi, size_t capacity,
                                             size_t* written);
EVLAB_API evlab_status evlab_candidate_xi_max(const evlab_candidate* c, double* out);
EVLAB_API evlab_status evlab_candidate_id(const evlab_candidate* c, char** out);
/* Certificate battery; weight is "zero", "lipschitz[:f]" or "serrin:r:s:c"
   (NULL means lipschitz). *passed is 1 or 0. */
EVLAB_API evlab_status evlab_candidate_verify(const evlab_candidate* c, const char* weight,
                                              double tol_scale, char** report_json,
                                              int* passed);
EVLAB_API void evlab_candidate_free(evlab_candidate* c);

/* Runs one experiment described by a JSON spec and returns the JSON report.
   *exit_code receives the process exit code for a completed run. */
EVLAB_API evlab_status evlab_run_experiment(const char* spec_json, char** report_json,
                                            int* exit_code);

#ifdef __cplusplus
}
#endif

#endif /* EVLAB_EVLAB_H */
