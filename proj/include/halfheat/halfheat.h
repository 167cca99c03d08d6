/* Copyright 2026 The halfheat Authors
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef HALFHEAT_H
#define HALFHEAT_H

#include <stddef.h>

#if defined(HH_BUILDING_LIBRARY)
#define HH_API __attribute__((visibility("default")))
#else
#define HH_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as CLI exit codes. */
typedef enum hh_status {
  HH_OK = 0,
  HH_ERR_NUMERICAL = 1,
  HH_ERR_VALIDATION = 2
} hh_status;

typedef struct hh_config hh_config;
typedef struct hh_result hh_result;

HH_API const char* hh_version(void);

/* Message of the last failed call on this thread; "" when none. */
HH_API const char* hh_last_error(void);

HH_API size_t hh_command_count(void);
HH_API const char* hh_command_name(size_t i);

/* Configuration: every key has a default; set() validates and canonicalizes. */
HH_API hh_status hh_config_create(hh_config** out);
HH_API void hh_config_destroy(hh_config* cfg);
HH_API hh_status hh_config_load(hh_config* cfg, const char* path);
HH_API hh_status hh_config_parse(hh_config* cfg, const char* text);
HH_API hh_status hh_config_set(hh_config* cfg, const char* key, const char* value);
/* Pointer valid until the next call on cfg. */
HH_API hh_status hh_config_get(const hh_config* cfg, const char* key, const char** value);
HH_API hh_status hh_config_to_text(const hh_config* cfg, const char** text);
HH_API size_t hh_config_key_count(void);
HH_API const char* hh_config_key_name(size_t i);
HH_API const char* hh_config_key_help(size_t i);

/* Runs one command; on success *out owns the primary text and artifacts. */
HH_API hh_status hh_run(const char* command, const hh_config* cfg, hh_result** out);
HH_API void hh_result_destroy(hh_result* r);
HH_API const char* hh_result_text(const hh_result* r);
HH_API size_t hh_result_artifact_count(const hh_result* r);
HH_API const char* hh_result_artifact_name(const hh_result* r, size_t i);
/* Artifact bytes (may contain NUL) and their length. */
HH_API const char* hh_result_artifact_data(const hh_result* r, size_t i, size_t* length);

/* Scalar entry points. */
HH_API hh_status hh_dilog(double re, double im, double* out_re, double* out_im);
/* <z^m, z^n> on the annular sector (side 0 exterior, 1 interior). */
HH_API hh_status hh_gram_entry(int side, double T, double theta1, double theta2, int m, int n,
                               double* out_re, double* out_im);
/* sup over polynomials of degree <= N of the observability ratio of the
 * kernel state 1/(1 - conj(u) z) on the exterior sector. */
HH_API hh_status hh_kernel_observability(double u_re, double u_im, double T, double theta1,
                                         double theta2, int N, double* out);
HH_API hh_status hh_friedrichs_theta(int domain, double T, double theta1, double theta2, int N,
                                     double* out);

#ifdef __cplusplus
}
#endif

#endif /* HALFHEAT_H */
