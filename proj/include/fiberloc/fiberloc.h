/* fiberloc - localized index computations on fibered model geometries.
 *
 * C interface to the shared library. All functions are thread-safe as long
 * as each handle is used from one thread at a time; error messages are
 * thread-local.
 *
 * Usage pattern:
 *   fiberloc_config* cfg = NULL;
 *   fiberloc_result* res = NULL;
 *   if (fiberloc_config_load("run.json", &cfg) == FIBERLOC_OK &&
 *       fiberloc_run(cfg, "index", &res) == FIBERLOC_OK) {
 *       fputs(fiberloc_result_json_lines(res), stdout);
 *   } else {
 *       fputs(fiberloc_last_error(), stderr);
 *   }
 *   fiberloc_result_free(res);
 *   fiberloc_config_free(cfg);
 */
#ifndef FIBERLOC_H
#define FIBERLOC_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fiberloc_status {
    FIBERLOC_OK = 0,
    /* 1 reserved */
    FIBERLOC_ERR_CONFIG = 2,        /* config parse/schema or validation failure */
    FIBERLOC_ERR_NONCONVERGENCE = 3, /* numerical non-convergence */
    FIBERLOC_ERR_UNRELIABLE_GAP = 4, /* no trustworthy spectral gap; index refused */
    FIBERLOC_ERR_INVALID_ARGUMENT = 5,
    FIBERLOC_ERR_INTERNAL = 6
} fiberloc_status;

/* Library version, e.g. "0.1.0". */
const char* fiberloc_version(void);

/* Human-readable name of a status code. */
const char* fiberloc_status_name(fiberloc_status status);

/* Message of the last error on this thread ("" if none). */
const char* fiberloc_last_error(void);

/* Opaque parsed configuration. */
typedef struct fiberloc_config fiberloc_config;

fiberloc_status fiberloc_config_load(const char* path, fiberloc_config** out);
fiberloc_status fiberloc_config_parse(const char* json_text, fiberloc_config** out);
/* Canonical digest of the config (hex string owned by the handle). */
const char* fiberloc_config_digest(const fiberloc_config* cfg);
fiberloc_status fiberloc_config_set_threads(fiberloc_config* cfg, int threads);
void fiberloc_config_free(fiberloc_config* cfg);

/* Opaque result: an ordered list of JSON records plus an exit code. */
typedef struct fiberloc_result fiberloc_result;

/* Runs one command: fibration-check, average, pou, goodcover, spectrum,
 * index, deform-scan, excision, product, calculus, bs-count, rr.
 * On FIBERLOC_ERR_UNRELIABLE_GAP (and on validation failures reported as
 * FIBERLOC_ERR_CONFIG from a check command) *out still carries the records.
 */
fiberloc_status fiberloc_run(const fiberloc_config* cfg, const char* command,
                             fiberloc_result** out);

size_t fiberloc_result_count(const fiberloc_result* res);
/* i-th record as a JSON object string (owned by the handle). */
const char* fiberloc_result_record(const fiberloc_result* res, size_t i);
/* All records as JSON lines / as CSV (owned by the handle, lazily built). */
const char* fiberloc_result_json_lines(fiberloc_result* res);
const char* fiberloc_result_csv(fiberloc_result* res);
/* Two-column gnuplot dump of spectrum payloads. */
const char* fiberloc_result_plot_data(fiberloc_result* res);
/* Exit code per the convention above (0/2/3/4). */
int fiberloc_result_exit_code(const fiberloc_result* res);
void fiberloc_result_free(fiberloc_result* res);

/* Convenience entry points that bypass the config layer. */

/* Bohr-Sommerfeld count of the quotient strip (a < 0, b, c >= 1);
 * returns FIBERLOC_ERR_INVALID_ARGUMENT on bad parameters. */
fiberloc_status fiberloc_bs_count_strip(long long a, long long b, long long c,
                                        long long* count);

/* One-sided cutoff profile sampled on a uniform grid; values has
 * `samples` entries. */
fiberloc_status fiberloc_emit_profile(double a, double eps, double grid_min, double grid_max,
                                      int samples, double* values);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* FIBERLOC_H */
