/* hgm1f1 -- exact distribution of the largest eigenvalue of a Wishart matrix
 * through the hypergeometric function 1F1 of a matrix argument: truncated
 * zonal-polynomial series near the origin, holonomic gradient integration of
 * the associated Pfaffian system away from it.
 *
 * All functions return HGM_OK on success; on failure a status code is
 * returned and hgm_last_error() carries a message (thread-local).
 */
#ifndef HGM1F1_H
#define HGM1F1_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hgm_status {
    HGM_OK = 0,
    HGM_EINVAL = 1,      /* bad argument */
    HGM_ESINGULAR = 2,   /* evaluation at/near the singular set */
    HGM_ENUMERIC = 3,    /* numerical failure (non-finite state, no bracket) */
    HGM_EUNSUPPORTED = 4 /* dimension without this route */
} hgm_status;

/* warning bits in hgm_cdf_result.warnings */
enum {
    HGM_WARN_CLAMPED = 1,           /* probability clamped into [0,1] */
    HGM_WARN_OVERSHOOT = 2,         /* overshoot beyond 1 + 1e-4: reduce step or raise K */
    HGM_WARN_TIES_PERTURBED = 4,    /* tied beta values were spread apart */
    HGM_WARN_STEP_LARGE = 8,        /* step * sum(beta) > 1 */
    HGM_WARN_TRUNCATION_CAPPED = 16 /* automatic series degree hit its cap */
};

const char* hgm_version(void);
const char* hgm_last_error(void);

/* ---- problem: dimension m, degrees of freedom n, beta = diag(Sigma^-1)/2 */
typedef struct hgm_problem hgm_problem;
hgm_problem* hgm_problem_new(int m, double n, const double* beta);
void hgm_problem_free(hgm_problem* p);

/* ---- configuration ----------------------------------------------------- */
typedef struct hgm_config hgm_config;
hgm_config* hgm_config_new(void); /* defaults; never fails */
void hgm_config_free(hgm_config* c);
/* numeric keys: K, x0, step, rel_tol, tie_eps, tie_perturb, bounds_perturb,
 * tol_p, tol_x, quantile_max_x */
hgm_status hgm_config_set(hgm_config* c, const char* key, double value);
/* string keys: method (euler|rk4|rk4_adaptive), tie_policy
 * (perturb|diagonal|error), init (full|linear), format (tsv|csv|json-lines) */
hgm_status hgm_config_set_string(hgm_config* c, const char* key, const char* value);
const char* hgm_config_get_string(const hgm_config* c, const char* key);

/* ---- evaluation --------------------------------------------------------- */
typedef struct hgm_cdf_result {
    double prob;     /* clamped to [0,1] */
    double prob_raw; /* as integrated */
    unsigned warnings;
} hgm_cdf_result;

hgm_status hgm_cdf(const hgm_problem* p, const hgm_config* c, double x, hgm_cdf_result* out);

/* probabilities on an ascending grid in a single integration pass */
hgm_status hgm_cdf_table(const hgm_problem* p, const hgm_config* c, const double* xs,
                         size_t npoints, hgm_cdf_result* out);

hgm_status hgm_quantile(const hgm_problem* p, const hgm_config* c, double prob, double* x_out);

/* stochastic-ordering sandwich around the probability at x */
hgm_status hgm_bounds(const hgm_problem* p, const hgm_config* c, double x, double* lower,
                      double* upper);

/* probability by direct series truncation (cross-check of the ODE route) */
hgm_status hgm_cdf_series(const hgm_problem* p, double x, int degree, double* out);

/* ---- special functions -------------------------------------------------- */
/* truncated 1F1(a;c;Y) of a matrix argument with eigenvalues y[0..m-1] */
hgm_status hgm_hyp1f1(double a, double c, int m, const double* y, int degree, double* out);
/* 1F1(a;c;y I_m) through the restricted ODE (m = 2 or 3) */
hgm_status hgm_hyp1f1_diagonal(double a, double c, int m, double y, double* out);
hgm_status hgm_chi2_cdf(double x, double n, double* out);
hgm_status hgm_mv_gamma_log(int m, double a, double* out);

/* ---- verification dumps (TSV) ------------------------------------------- */
hgm_status hgm_dump_zonal(int degree, int max_length, const char* path);
/* a and c given exactly, e.g. "3/2" or "1.5" */
hgm_status hgm_dump_q(const char* a, const char* c, int degree, int max_length,
                      const char* path);
hgm_status hgm_dump_pfaffian(double a, double c, int m, const double* y, int direction,
                             const char* path);

/* runs the embedded invariant suite, one report line per check through the
 * callback (may be NULL); returns the number of failures */
int hgm_selftest(void (*report)(const char* line, void* user), void* user, int verbosity);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* HGM1F1_H */
