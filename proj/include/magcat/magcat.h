// Copyright 2026 The magcat Authors
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

/* C interface to the magcat library. All functions are thread-safe; the
 * message returned by magcat_last_error() is per thread. Handles are opaque
 * and must be released with the matching *_free function. */

#ifndef MAGCAT_MAGCAT_H_
#define MAGCAT_MAGCAT_H_

#include <stddef.h>

#if defined(_WIN32)
#define MAGCAT_API __declspec(dllexport)
#else
#define MAGCAT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Values 2..4 are also the CLI exit codes. */
typedef enum magcat_status {
  MAGCAT_OK = 0,
  MAGCAT_ERR_INTERNAL = 1,
  MAGCAT_ERR_CONFIG = 2,
  MAGCAT_ERR_NUMERICS = 3,
  MAGCAT_ERR_RESOLUTION = 4,
  MAGCAT_ERR_IO = 5,
  MAGCAT_ERR_ARGUMENT = 6
} magcat_status;

typedef struct magcat_complex {
  double re;
  double im;
} magcat_complex;

typedef enum magcat_state_kind {
  MAGCAT_STATE_VACUUM = 0,    /* single-mode |0> */
  MAGCAT_STATE_COHERENT = 1,  /* |alpha> */
  MAGCAT_STATE_CAT = 2,       /* |alpha> + |-alpha> */
  MAGCAT_STATE_SEPARABLE = 3, /* cat(alpha) x cat(alpha) */
  MAGCAT_STATE_ENTANGLED = 4  /* |alpha,alpha> + |-alpha,-alpha> */
} magcat_state_kind;

typedef struct magcat_effective {
  double delta;
  magcat_complex pump;
  double kerr;
  int weak_detuning;
} magcat_effective;

typedef struct magcat_config magcat_config;
typedef struct magcat_state magcat_state;

MAGCAT_API const char* magcat_version(void);

/* Message of the most recent failure on this thread, or "" if none. */
MAGCAT_API const char* magcat_last_error(void);

MAGCAT_API magcat_status magcat_config_load(const char* path, magcat_config** out);
MAGCAT_API magcat_status magcat_config_parse(const char* json_text, magcat_config** out);
/* Canonical JSON form; release with magcat_string_free. */
MAGCAT_API magcat_status magcat_config_to_json(const magcat_config* config, char** out);
/* Mode name, valid for the lifetime of the config. */
MAGCAT_API magcat_status magcat_config_mode(const magcat_config* config, const char** out);
MAGCAT_API void magcat_config_free(magcat_config* config);

MAGCAT_API void magcat_string_free(char* s);

/* Runs the experiment. out_dir may be NULL to use the configured directory.
 * If report is non-NULL it receives a JSON document with the output
 * directory, file list, warnings and run summary. */
MAGCAT_API magcat_status magcat_run(const magcat_config* config, const char* out_dir, unsigned threads,
                                    char** report);

MAGCAT_API magcat_status magcat_state_new(magcat_state_kind kind, magcat_complex alpha, int cutoff,
                                          magcat_state** out);
MAGCAT_API magcat_status magcat_state_dim(const magcat_state* state, size_t* out);
/* Copies up to `capacity` amplitudes into `out`. */
MAGCAT_API magcat_status magcat_state_amplitudes(const magcat_state* state, magcat_complex* out, size_t capacity);
/* |<a|b>|^2 for states of equal dimension. */
MAGCAT_API magcat_status magcat_state_fidelity(const magcat_state* a, const magcat_state* b, double* out);
MAGCAT_API void magcat_state_free(magcat_state* state);

/* CHSH qualifier of a 4x4 row-major two-qubit density matrix under the
 * setting matched to `variant` (PhiPlus, PhiMinus, PsiPlus, PsiMinus). */
MAGCAT_API magcat_status magcat_chsh(const magcat_complex* rho4x4, const char* variant, double* out);

/* *stable = 1 iff |delta| > 2 |pump|. */
MAGCAT_API magcat_status magcat_stability(double delta, double pump_magnitude, int* stable);

MAGCAT_API magcat_status magcat_effective_params(double omega_c, double omega_m, double omega_d, magcat_complex g,
                                                 magcat_complex pump_g, double kerr, magcat_effective* out);

#ifdef __cplusplus
}
#endif

#endif /* MAGCAT_MAGCAT_H_ */
