/* C interface to the rotorpair library: coupled-rotator simulation on so(n),
 * invariant verification, closed-form/exact reduced solutions, and period
 * analysis. Handles are opaque; every function returns an rp_status code and
 * rp_last_error() carries the message of the most recent failure on the
 * calling thread. */

#ifndef ROTORPAIR_H
#define ROTORPAIR_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rp_status {
    RP_OK = 0,
    RP_ERR_INTERNAL = 1,
    RP_ERR_CONFIG = 2,
    RP_ERR_NUMERIC = 3,
    RP_ERR_VERIFY = 4,
    RP_ERR_DIMENSION = 5,
    RP_ERR_DEGENERATE = 6,
    RP_ERR_INVALID = 7,
    RP_ERR_IO = 8,
    RP_ERR_NO_PERIOD = 9
} rp_status;

typedef struct rp_config rp_config;
typedef struct rp_trajectory rp_trajectory;

const char* rp_version(void);
const char* rp_error_name(int status);
/* Message of the last failure on this thread; empty string if none. */
const char* rp_last_error(void);

/* --- configuration ------------------------------------------------------ */

rp_status rp_config_load(const char* path, rp_config** out);
rp_status rp_config_parse(const char* text, rp_config** out);
/* Override one key with the same syntax as a config line value. */
rp_status rp_config_set(rp_config* cfg, const char* key, const char* value);
/* Reads back a scalar/string field ("model.eps", "output.path", "output.format",
 * "rng.seed", "run.t_end", ...). */
rp_status rp_config_get(const rp_config* cfg, const char* key, char* buf, size_t bufsize);
void rp_config_free(rp_config* cfg);

/* --- simulation ----------------------------------------------------------- */

rp_status rp_simulate(const rp_config* cfg, rp_trajectory** out);
rp_status rp_trajectory_write(const rp_trajectory* traj, const char* path, const char* format);
size_t rp_trajectory_sample_count(const rp_trajectory* traj);
rp_status rp_trajectory_time(const rp_trajectory* traj, size_t index, double* t);
/* has_alignment / has_k are 0 or 1; the corresponding values are defined
 * only when the flag is set. */
rp_status rp_trajectory_invariants(const rp_trajectory* traj, size_t index, double* energy,
                                   double* alignment, int* has_alignment, double* k_reduced,
                                   int* has_k);
/* Drift summary text (same block the CLI prints). Truncates to bufsize. */
rp_status rp_trajectory_summary(const rp_trajectory* traj, char* buf, size_t bufsize);
void rp_trajectory_free(rp_trajectory* traj);

/* --- reports -------------------------------------------------------------- */

/* Runs the verification suite; *n_failed receives the number of failing
 * checks. report_path (optional, may be NULL) receives a JSON report;
 * summary (optional) receives the human-readable lines. */
rp_status rp_verify(const rp_config* cfg, const char* report_path, int* n_failed, char* summary,
                    size_t bufsize);

/* Closed-form + exact-solution comparison table (CSV at out_path) and a
 * fitted-constants summary. */
rp_status rp_analytic_report(const rp_config* cfg, const char* out_path, char* summary,
                             size_t bufsize);

/* Predicted and detected periods report (text written to out_path when
 * non-NULL, summary always filled). */
rp_status rp_periods_report(const rp_config* cfg, const char* out_path, char* summary,
                            size_t bufsize);

/* One trajectory file per sweep.eps value, written under out_dir. */
rp_status rp_sweep(const rp_config* cfg, const char* out_dir, char* summary, size_t bufsize);

#ifdef __cplusplus
}
#endif

#endif /* ROTORPAIR_H */
