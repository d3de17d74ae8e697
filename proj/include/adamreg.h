/* C interface to the adaptive-regret library: opaque handles, error codes,
 * JSON in, JSON/CSV out. Strings returned through char** are heap-allocated
 * and must be released with ar_string_free. */
#ifndef ADAMREG_H
#define ADAMREG_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ar_status {
  AR_OK = 0,
  AR_ERR_INVALID_ARGUMENT = 1, /* malformed config / arguments */
  AR_ERR_PRECONDITION = 2,     /* a stated bound precondition is violated */
  AR_ERR_RUNTIME = 3,          /* I/O or internal failure */
  AR_ERR_NULL_POINTER = 4
} ar_status;

typedef struct ar_optimizer ar_optimizer;

/* Config JSON: {"algorithm", "hyper", "beta1_schedule", "feasible_set", "x1"}.
 * Algorithms: amsgrad | adamnc | sadam | amsgrad_unconstrained (zo_adamm is
 * accepted and steps like amsgrad; the caller supplies the estimated
 * gradients). */
ar_status ar_optimizer_create(const char* config_json, ar_optimizer** out);
ar_status ar_optimizer_step(ar_optimizer* opt, const double* g, size_t d);
/* State JSON: {"t", "x", "m", "v", "v_hat"}. */
ar_status ar_optimizer_state(const ar_optimizer* opt, char** out_json);
void ar_optimizer_destroy(ar_optimizer* opt);

/* Full experiment config (see README); writes any configured output files and
 * returns the run summary. */
ar_status ar_run_experiment(const char* config_json, char** out_summary_json);

/* Runs an oracle suite. exit_status: 0 all pass, 1 failures, 2 unknown
 * suite. The report lists per-oracle worst margins. */
ar_status ar_verify(const char* suite, int* exit_status, char** out_report_json);

/* schedules_json: JSON array of beta1_schedule objects. */
ar_status ar_compare_schedules(const char* config_json, const char* schedules_json,
                               char** out_report_json, char** out_plot_csv);

/* Message of the last error raised on this thread. */
const char* ar_last_error(void);

void ar_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* ADAMREG_H */
