#ifndef SWARMTRACK_H
#define SWARMTRACK_H

/* C interface to the swarmtrack simulation engine.
 *
 * All objects are opaque handles created by a parse, load, preset or execute
 * call and released with the matching free function. Functions return a status code;
 * on failure swarmtrack_last_error() describes the problem. The message is
 * per thread and stays valid until the next failing call on that thread.
 * Strings returned through char** are owned by the caller and released with
 * swarmtrack_string_free. Distinct handles may be used from different
 * threads concurrently. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define SWARMTRACK_API __declspec(dllexport)
#else
#  define SWARMTRACK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum swarmtrack_status {
  SWARMTRACK_OK = 0,
  SWARMTRACK_ERR_INVALID_ARGUMENT = 1, /* null handle or bad argument */
  SWARMTRACK_ERR_PARSE = 2,            /* scenario text or override rejected */
  SWARMTRACK_ERR_CONFIG = 3,           /* values violate a module invariant */
  SWARMTRACK_ERR_IO = 4,
  SWARMTRACK_ERR_NOT_FOUND = 5,        /* unknown preset or suite name */
  SWARMTRACK_ERR_INTERNAL = 6
} swarmtrack_status;

typedef struct swarmtrack_scenario swarmtrack_scenario;
typedef struct swarmtrack_run swarmtrack_run;
typedef struct swarmtrack_verify_report swarmtrack_verify_report;

/* Per-record metric columns of a run. */
typedef enum swarmtrack_metric {
  SWARMTRACK_METRIC_TIME = 0,
  SWARMTRACK_METRIC_CENTER_ERROR,
  SWARMTRACK_METRIC_VELOCITY_CENTER_ERROR, /* NaN for single integrators */
  SWARMTRACK_METRIC_MIN_PAIR_DISTANCE,
  SWARMTRACK_METRIC_LAMBDA2,
  SWARMTRACK_METRIC_SUM_GRAD_NORM,
  SWARMTRACK_METRIC_CONSENSUS_VEL_NORM,    /* NaN for single integrators */
  SWARMTRACK_METRIC_LYAP_W,
  SWARMTRACK_METRIC_LYAP_W1,
  SWARMTRACK_METRIC_REMARK1_OK,            /* 0 or 1 */
  SWARMTRACK_METRIC_GAIN_OK,               /* 0 or 1 */
  SWARMTRACK_METRIC_CLAMP_EVENTS
} swarmtrack_metric;

typedef struct swarmtrack_run_summary {
  size_t steps;
  size_t records;
  int aborted;
  int initial_connected;
  long violations; /* connectivity + disconnection + collision + nonfinite */
  long edges_added;
  long connectivity_violations;
  long disconnections;
  long collisions;
  long nonfinite;
  long gain_violation_records;
  long clamp_total;
  double final_center_error;
  double min_pair_distance;
} swarmtrack_run_summary;

SWARMTRACK_API const char* swarmtrack_version(void);
SWARMTRACK_API const char* swarmtrack_last_error(void);
SWARMTRACK_API void swarmtrack_string_free(char* s);

/* scenarios */
SWARMTRACK_API swarmtrack_status swarmtrack_scenario_parse(const char* text, swarmtrack_scenario** out);
SWARMTRACK_API swarmtrack_status swarmtrack_scenario_load(const char* path, swarmtrack_scenario** out);
SWARMTRACK_API swarmtrack_status swarmtrack_scenario_preset(const char* name, swarmtrack_scenario** out);
SWARMTRACK_API swarmtrack_status swarmtrack_scenario_clone(const swarmtrack_scenario* s, swarmtrack_scenario** out);
/* key is "section.key"; the value is checked when the scenario is validated or run */
SWARMTRACK_API swarmtrack_status swarmtrack_scenario_set(swarmtrack_scenario* s, const char* key, const char* value);
SWARMTRACK_API swarmtrack_status swarmtrack_scenario_validate(const swarmtrack_scenario* s);
SWARMTRACK_API swarmtrack_status swarmtrack_scenario_to_text(const swarmtrack_scenario* s, char** out);
SWARMTRACK_API void swarmtrack_scenario_free(swarmtrack_scenario* s);

SWARMTRACK_API size_t swarmtrack_preset_count(void);
SWARMTRACK_API const char* swarmtrack_preset_name(size_t index);
SWARMTRACK_API const char* swarmtrack_preset_description(size_t index);

/* runs; a run that aborts (collision, nonfinite state) still yields a handle
 * with summary.aborted set */
SWARMTRACK_API swarmtrack_status swarmtrack_run_execute(const swarmtrack_scenario* s, swarmtrack_run** out);
SWARMTRACK_API swarmtrack_status swarmtrack_run_summary_get(const swarmtrack_run* r, swarmtrack_run_summary* out);
SWARMTRACK_API size_t swarmtrack_run_record_count(const swarmtrack_run* r);
SWARMTRACK_API swarmtrack_status swarmtrack_run_metric(const swarmtrack_run* r, size_t record, swarmtrack_metric which,
                                                       double* out);
/* positions (agents x dim, row major) at a record; `capacity` counts doubles */
SWARMTRACK_API swarmtrack_status swarmtrack_run_positions(const swarmtrack_run* r, size_t record, double* out,
                                                          size_t capacity);
SWARMTRACK_API swarmtrack_status swarmtrack_run_write(const swarmtrack_run* r, const char* out_dir);
SWARMTRACK_API swarmtrack_status swarmtrack_run_trace_csv(const swarmtrack_run* r, char** out);
SWARMTRACK_API swarmtrack_status swarmtrack_run_report_text(const swarmtrack_run* r, char** out);
SWARMTRACK_API swarmtrack_status swarmtrack_run_report_kv(const swarmtrack_run* r, char** out);
SWARMTRACK_API void swarmtrack_run_free(swarmtrack_run* r);

/* verification oracles; suite is all, cost, potential, optimum or averaged.
 * With a null scenario the built-in presets are checked. */
SWARMTRACK_API swarmtrack_status swarmtrack_verify(const char* suite, uint64_t seed, const swarmtrack_scenario* s,
                                                   swarmtrack_verify_report** out);
SWARMTRACK_API int swarmtrack_verify_passed(const swarmtrack_verify_report* v);
SWARMTRACK_API size_t swarmtrack_verify_check_count(const swarmtrack_verify_report* v);
SWARMTRACK_API swarmtrack_status swarmtrack_verify_text(const swarmtrack_verify_report* v, char** out);
SWARMTRACK_API swarmtrack_status swarmtrack_verify_kv(const swarmtrack_verify_report* v, char** out);
SWARMTRACK_API void swarmtrack_verify_free(swarmtrack_verify_report* v);

#ifdef __cplusplus
}
#endif

#endif /* SWARMTRACK_H */
