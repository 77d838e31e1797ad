/*
 * Copyright 2026 The loracell Authors.
 *
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

/*
 * C interface to the loracell simulator.
 *
 * Every function returns an lc_status. On failure, lc_last_error() returns a
 * message describing the most recent failure on the calling thread. Objects
 * are opaque handles released with their matching *_destroy function;
 * destroy functions accept NULL.
 */

#ifndef LORACELL_H
#define LORACELL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(LORACELL_BUILDING_LIBRARY)
#define LC_API __declspec(dllexport)
#else
#define LC_API __declspec(dllimport)
#endif
#else
#define LC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lc_status {
  LC_OK = 0,
  LC_ERR_CONFIG = 1,   /* invalid scenario, key, value, scheme or experiment */
  LC_ERR_RUNTIME = 2,  /* simulation or I/O failure */
  LC_ERR_ARGUMENT = 3, /* NULL handle or out-of-domain argument */
  LC_ERR_CODEC = 4     /* malformed MAC command */
} lc_status;

typedef struct lc_scenario lc_scenario;
typedef struct lc_result lc_result;
typedef struct lc_text lc_text;

typedef struct lc_metrics {
  double global_der;
  size_t transmitted;
  size_t received;
  size_t collisions;
  size_t under_sensitivity_losses;
  size_t capacity_losses;
} lc_metrics;

typedef struct lc_link_adr_req {
  uint8_t data_rate;
  uint8_t tx_power;
  uint16_t ch_mask;
  uint8_t ch_mask_cntl;
  uint8_t nb_trans;
  uint8_t rfu;
} lc_link_adr_req;

#define LC_LINK_ADR_REQ_SIZE 5

LC_API const char* lc_version(void);
LC_API const char* lc_last_error(void);

/* ---- scenarios ------------------------------------------------------- */

LC_API lc_status lc_scenario_create(lc_scenario** out);
LC_API void lc_scenario_destroy(lc_scenario* scenario);
/* Same keys as the config file format (nodes, radius, period, scheme, ...). */
LC_API lc_status lc_scenario_set(lc_scenario* scenario, const char* key, const char* value);
LC_API lc_status lc_scenario_load_file(lc_scenario* scenario, const char* path);
LC_API lc_status lc_scenario_validate(const lc_scenario* scenario);

/* ---- runs ------------------------------------------------------------ */

LC_API lc_status lc_run(const lc_scenario* scenario, lc_result** out);
LC_API void lc_result_destroy(lc_result* result);
/* Post-warm-up metrics. */
LC_API lc_status lc_result_metrics(const lc_result* result, lc_metrics* out);
/* Nodes whose last uplink used `sf`. */
LC_API lc_status lc_result_sf_count(const lc_result* result, int sf, size_t* out);
LC_API lc_status lc_result_event_log_csv(const lc_result* result, lc_text** out);
LC_API lc_status lc_result_write_event_log(const lc_result* result, const char* path);

/* ---- sweeps ---------------------------------------------------------- */

/*
 * experiment: "fig4", "fig5" or "fig6". schemes: comma-separated scheme
 * names. axis: comma-separated node counts (fig4, fig6) or radii in metres
 * (fig5). base may be NULL; otherwise its non-swept settings (duration,
 * capacity, thresholds, ...) apply to every point.
 */
LC_API lc_status lc_sweep(const char* experiment, const char* schemes, const char* axis,
                          uint64_t seed, const lc_scenario* base, lc_text** out_csv);

/* ---- text buffers ---------------------------------------------------- */

LC_API const char* lc_text_data(const lc_text* text);
LC_API size_t lc_text_size(const lc_text* text);
LC_API void lc_text_destroy(lc_text* text);

/* ---- radio and channel helpers --------------------------------------- */

/* Time-on-air in seconds, CRC on. Low data rate optimisation must be set for
 * SF11/SF12 at 125 kHz. */
LC_API lc_status lc_airtime(int sf, int bandwidth_khz, int cr_denominator, int payload_len,
                            int preamble_symbols, int explicit_header, int low_dr_optimize,
                            double* out_seconds);
LC_API lc_status lc_sensitivity(int sf, int bandwidth_khz, double* out_dbm);
/* below_reference may be NULL. */
LC_API lc_status lc_max_range(int sf, int bandwidth_khz, double tx_power_dbm, double d0_m,
                              double lpl0_db, double gamma, double* out_m, int* below_reference);
LC_API lc_status lc_path_loss(double d0_m, double lpl0_db, double gamma, double distance_m,
                              double* out_db);

/* ---- MAC commands ---------------------------------------------------- */

LC_API lc_status lc_link_adr_req_encode(const lc_link_adr_req* req,
                                        uint8_t out[LC_LINK_ADR_REQ_SIZE]);
LC_API lc_status lc_link_adr_req_decode(const uint8_t* bytes, size_t len, lc_link_adr_req* out);

#ifdef __cplusplus
}
#endif

#endif /* LORACELL_H */
