#ifndef SECRECY_H
#define SECRECY_H

/* C interface to the secrecy-capacity library. All state lives in an opaque
 * context; every call reports a status code and leaves a human-readable
 * message retrievable through sc_last_error. A context is not thread-safe;
 * use one per thread. */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sc_status {
    SC_OK = 0,
    SC_ERR_DOMAIN = 1,      /* invalid argument or configuration value */
    SC_ERR_BRACKET = 2,     /* root bracket without a sign change */
    SC_ERR_CONVERGENCE = 3, /* iteration budget exhausted */
    SC_ERR_CONSISTENCY = 4, /* redundant evaluation paths disagree */
    SC_ERR_IO = 5,          /* file could not be opened or read */
    SC_ERR_BAD_HANDLE = 6,  /* null context or output pointer */
    SC_ERR_INTERNAL = 7
} sc_status;

/* Stable identifier for a status code, e.g. "domain_error". Never null. */
const char* sc_status_name(sc_status status);

typedef struct sc_context sc_context;

/* Returns null only on allocation failure. */
sc_context* sc_context_create(void);
void sc_context_destroy(sc_context* ctx);

/* Message of the most recent failure on this context, empty string if the
 * last call succeeded. Owned by the context, valid until its next call. */
const char* sc_last_error(const sc_context* ctx);

/* Mean power gains of the main and eavesdropper links (unit noise variance
 * on both). Required before solve, sweep, and limit calls. */
sc_status sc_set_channel(sc_context* ctx, double gamma_m, double gamma_e);

/* Sets one solver option by its config-file key, e.g. ("mc_seed", "42").
 * Values are parsed immediately but validated as a whole when a computation
 * starts or a config file is loaded. */
sc_status sc_set_option(sc_context* ctx, const char* key, const char* value);

/* Current value of a solver option, formatted so that reading it back
 * through sc_set_option reproduces the value exactly. */
sc_status sc_get_option(const sc_context* ctx, const char* key, char* buf, size_t buf_len);

/* Applies a flat "key = value" file on top of the current options, then
 * validates the result. On failure the context's options are unchanged. */
sc_status sc_load_config(sc_context* ctx, const char* path);

typedef struct sc_evaluation {
    double rate_nats;      /* ergodic secrecy rate, natural log */
    double realized_power; /* achieved long-term average transmit power */
    double lambda;         /* dual variable, 0 for schemes without one */
    double tau;            /* on/off threshold, 0 otherwise */
    double p_const;        /* on/off constant transmit level, 0 otherwise */
    double kkt_residual;   /* constant_rate stationarity residual, else 0 */
    long iterations;
    int converged; /* constant_rate may legitimately report 0 here */
    int clamped;   /* negative signed objective was clamped to zero */
} sc_evaluation;

/* Solves one scheme at average power p_bar. scheme is one of
 * full_csi | main_csi | onoff | constant_rate | receiver_only. */
sc_status sc_solve(sc_context* ctx, const char* scheme, double p_bar, sc_evaluation* out);

/* On/off transmission with a caller-fixed threshold instead of the
 * optimized one. */
sc_status sc_solve_onoff_fixed_tau(sc_context* ctx, double p_bar, double tau,
                                   sc_evaluation* out);

/* E{ log(h_m/h_e) ; h_m > h_e }: common large-power limit of the
 * transmitter-CSI schemes, in nats. */
sc_status sc_high_snr_limit(sc_context* ctx, double* out);

/* Sweeps p_bar over [db_start, db_stop] in db_step increments, where
 * db = 10 log10(p_bar). schemes is a comma-separated subset of the five
 * scheme names, or null/"" for all. On success *out_csv receives a
 * malloc'd CSV document (release with sc_string_free); rate columns honor
 * the configured unit. If a row's solver fails to converge the CSV is
 * still produced, with diagnostics columns, and the call reports
 * SC_ERR_CONVERGENCE. */
sc_status sc_sweep_csv(sc_context* ctx, double db_start, double db_stop, double db_step,
                       const char* schemes, char** out_csv);

void sc_string_free(char* s);

/* One verdict per validation check; detail carries the measured numbers
 * behind it. */
typedef void (*sc_check_fn)(const char* name, int passed, const char* detail,
                            double seconds, double budget_seconds, void* user);

/* Runs the validation suite under the context's configuration, invoking
 * on_check (optional) per check and writing the number of failed checks to
 * *n_failed (optional). The status reports whether the suite ran, not what
 * it found: SC_OK with *n_failed > 0 means checks executed and failed. */
sc_status sc_validate(sc_context* ctx, sc_check_fn on_check, void* user, int* n_failed);

#ifdef __cplusplus
}
#endif

#endif
