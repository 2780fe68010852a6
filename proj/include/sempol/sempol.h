// Copyright 2026 The sempol Authors
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


#ifndef SEMPOL_SEMPOL_H
#define SEMPOL_SEMPOL_H

/*
 * C interface to the sempol library.
 *
 * Every fallible call returns a sempol_status. On failure the message is
 * available from sempol_last_error() on the same thread until the next call.
 * Strings returned through char** are owned by the caller and released with
 * sempol_string_free().
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SEMPOL_BUILDING)
#    define SEMPOL_API __declspec(dllexport)
#  else
#    define SEMPOL_API __declspec(dllimport)
#  endif
#else
#  define SEMPOL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sempol_status {
    SEMPOL_OK = 0,
    SEMPOL_INVALID_ARGUMENT = 1,
    SEMPOL_DATA = 2,
    SEMPOL_IO = 3,
    SEMPOL_DEGENERATE = 4,
    SEMPOL_FORMAT = 5,
    SEMPOL_INTERNAL = 6
} sempol_status;

typedef enum sempol_direction {
    SEMPOL_TV_LEADS = 0,
    SEMPOL_TWITTER_LEADS = 1
} sempol_direction;

typedef struct sempol_config sempol_config;
typedef struct sempol_store sempol_store;

SEMPOL_API const char* sempol_version(void);
SEMPOL_API const char* sempol_last_error(void);
SEMPOL_API const char* sempol_status_name(sempol_status status);
SEMPOL_API void sempol_string_free(char* s);

/* ---- run configuration ------------------------------------------------- */

SEMPOL_API sempol_status sempol_config_default(sempol_config** out);
/* JSON file; relative paths inside it resolve against its directory. */
SEMPOL_API sempol_status sempol_config_load(const char* path, sempol_config** out);
/* Dotted key ("granger.max_lag"); the value is JSON text, or a bare string. */
SEMPOL_API sempol_status sempol_config_set(sempol_config* config, const char* key, const char* value);
/* Applies SEMPOL_SECTION__KEY variables from the process environment. */
SEMPOL_API sempol_status sempol_config_apply_env(sempol_config* config);
/* Checks the document without running anything. */
SEMPOL_API sempol_status sempol_config_validate(const sempol_config* config);
SEMPOL_API sempol_status sempol_config_dump(const sempol_config* config, char** json_out);
SEMPOL_API void sempol_config_free(sempol_config* config);

/* ---- pipeline commands: each writes a human-readable summary ----------- */

SEMPOL_API sempol_status sempol_cmd_ingest(const sempol_config* config, char** summary);
SEMPOL_API sempol_status sempol_cmd_embed_toy(const sempol_config* config, char** summary);
SEMPOL_API sempol_status sempol_cmd_polarize(const sempol_config* config, char** summary);
SEMPOL_API sempol_status sempol_cmd_granger(const sempol_config* config, char** summary);
/* lag <= 0 means no lag split. */
SEMPOL_API sempol_status sempol_cmd_attribute(const sempol_config* config, const char* topic, int lag,
                                              sempol_direction direction, char** summary);
SEMPOL_API sempol_status sempol_cmd_report_all(const sempol_config* config, char** summary);

/* ---- numerical primitives ---------------------------------------------- */

/* Semantic polarity of two row-major sets of nonzero vectors. */
SEMPOL_API sempol_status sempol_sp(const double* c, size_t n1, const double* f, size_t n2, size_t dim,
                                   double* out);
SEMPOL_API sempol_status sempol_sp_bruteforce(const double* c, size_t n1, const double* f, size_t n2,
                                              size_t dim, double* out);

typedef struct sempol_adf_result {
    double statistic;
    double crit_1pct;
    double crit_5pct;
    double crit_10pct;
    int lags_used;
    size_t nobs;
    int stationary;
} sempol_adf_result;

/* max_lag < 0 selects the default upper bound. */
SEMPOL_API sempol_status sempol_adf(const double* series, size_t n, int max_lag, sempol_adf_result* out);

typedef struct sempol_granger_result {
    double f_value;
    double p_value;
    int df_num;
    int df_den;
} sempol_granger_result;

/* Does x help predict y at the given lag? */
SEMPOL_API sempol_status sempol_granger(const double* x, const double* y, size_t n, int lag,
                                        sempol_granger_result* out);

/* ---- embedding store ---------------------------------------------------- */

SEMPOL_API sempol_status sempol_store_validate(const char* path, uint64_t* records);
SEMPOL_API sempol_status sempol_store_open(const char* path, sempol_store** out);
SEMPOL_API uint64_t sempol_store_size(const sempol_store* store);
SEMPOL_API size_t sempol_store_dim(const sempol_store* store);
/* month 0 queries the whole year. A missing combination yields 0. */
SEMPOL_API sempol_status sempol_store_count(const sempol_store* store, const char* source, int keyword_id,
                                            int year, int month, size_t* count);
SEMPOL_API void sempol_store_close(sempol_store* store);

/* ---- captions ----------------------------------------------------------- */

SEMPOL_API sempol_status sempol_srt_count(const char* bytes, size_t length, size_t* cues, size_t* skipped);

#ifdef __cplusplus
}
#endif

#endif /* SEMPOL_SEMPOL_H */
