/*
 * zetalab: mean values of zeta powers on vertical lines, their Dirichlet
 * series targets, Besicovitch-type inner products, Laplace/Abel smoothing
 * probes, and level-set concentration diagnostics.
 *
 * Every entry point returns a zl_status; on failure a thread-local message
 * is available through zl_last_error(). Out parameters may be NULL when a
 * caller does not need that piece. Opaque handles are created and released
 * by their matching functions. All functions are thread-safe as long as a
 * handle is not freed while in use; computations are deterministic for any
 * worker count.
 */
#ifndef ZETALAB_H
#define ZETALAB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#ifndef ZL_API
#define ZL_API __attribute__((visibility("default")))
#endif

typedef enum zl_status {
    ZL_OK = 0,
    ZL_ERR_DOMAIN = 1,      /* argument outside the supported region */
    ZL_ERR_POLE = 2,        /* evaluation too close to s = 1 */
    ZL_ERR_UNSUPPORTED = 3, /* valid input, outside this build's range */
    ZL_ERR_RESOURCE = 4,    /* memory / size guard tripped */
    ZL_ERR_ACCURACY = 5,    /* requested tolerance not reachable */
    ZL_ERR_INVALID = 6,     /* malformed argument */
    ZL_ERR_IO = 7,          /* file read/write failure */
    ZL_ERR_INTERNAL = 8
} zl_status;

/* Message for the most recent failure on the calling thread. */
ZL_API const char* zl_last_error(void);

typedef struct zl_complex {
    double re;
    double im;
} zl_complex;

/* ------------------------------------------------------------------ */
/* configuration                                                       */

typedef struct zl_zeta_config {
    double em_terms;         /* main-sum cutoff scale, default 1.0 */
    int bernoulli_order;     /* correction terms, default 8, max 12 */
    double target_abs_error; /* default 1e-9 */
} zl_zeta_config;
ZL_API zl_zeta_config zl_zeta_config_default(void);

typedef struct zl_quad_config {
    double panel_width;  /* default 0.25 */
    int nodes_per_panel; /* default 8 */
    double refine_tol;   /* per-panel relative tolerance, default 1e-6 */
    int max_halvings;    /* default 12 */
    int workers;         /* 0 = hardware concurrency */
} zl_quad_config;
ZL_API zl_quad_config zl_quad_config_default(void);

/* ------------------------------------------------------------------ */
/* zeta evaluation                                                     */

ZL_API zl_status zl_zeta(double sigma, double t, const zl_zeta_config* cfg,
                         zl_complex* out);
/* Independent alternating-series route, |t| <= 2000; for cross-checks. */
ZL_API zl_status zl_zeta_check(double sigma, double t, zl_complex* out);
ZL_API zl_status zl_abs_pow_2k(double sigma, double t, int k,
                               const zl_zeta_config* cfg, double* out);

typedef struct zl_growth_report {
    double ratio_max;       /* max |zeta(1/2+it)| / t^{1/6} over the grid */
    double fitted_exponent; /* least-squares slope of log|zeta| vs log t */
    int has_exponent;       /* 0 when the grid has a single point */
} zl_growth_report;
/* abs_zeta_out / ratio_out receive n values when non-NULL. */
ZL_API zl_status zl_growth_diagnostic(const double* t_grid, size_t n,
                                      const zl_zeta_config* cfg, double* abs_zeta_out,
                                      double* ratio_out, zl_growth_report* out);

/* ------------------------------------------------------------------ */
/* divisor tables and series                                           */

typedef struct zl_divisor_table zl_divisor_table;

ZL_API zl_status zl_divisor_sieve(int k, uint64_t limit, zl_divisor_table** out);
ZL_API zl_status zl_divisor_table_load(const char* path, zl_divisor_table** out);
ZL_API zl_status zl_divisor_table_save(const zl_divisor_table* table, const char* path);
ZL_API void zl_divisor_table_free(zl_divisor_table* table);
ZL_API zl_status zl_divisor_table_info(const zl_divisor_table* table, int* k,
                                       uint64_t* limit);
ZL_API zl_status zl_divisor_value(const zl_divisor_table* table, uint64_t n,
                                  uint32_t* out);
/* d_k(n) by factorisation, no table needed. */
ZL_API zl_status zl_divisor_single(int k, uint64_t n, uint64_t* out);

typedef struct zl_series_value {
    int k;
    double sigma;
    uint64_t cutoff;
    double epsilon;
    double partial_sum;
    double tail_bound; /* +inf when sigma <= 1/2 + epsilon */
} zl_series_value;
/* epsilon <= 0 selects the default 0.1 */
ZL_API zl_status zl_series_eval(const zl_divisor_table* table, double sigma,
                                 uint64_t cutoff, double epsilon, zl_series_value* out);
ZL_API zl_status zl_cauchy_closed_form(const zl_divisor_table* table, double sigma_a,
                                       double sigma_b, uint64_t cutoff, double epsilon,
                                       double* value, double* tail_bound);

/* ------------------------------------------------------------------ */
/* function specs                                                      */

typedef struct zl_function zl_function;

ZL_API zl_status zl_function_constant(zl_complex c, zl_function** out);
ZL_API zl_status zl_function_exponential(double lambda, zl_function** out);
ZL_API zl_status zl_function_zeta_power(int k, double sigma, zl_function** out);
ZL_API zl_status zl_function_bohr(const double* lambdas, const zl_complex* coeffs,
                                  size_t n, zl_function** out);
/* Bohr development of zeta^k truncated after n_terms frequencies. */
ZL_API zl_status zl_function_bohr_zeta_partial(int k, double sigma, uint64_t n_terms,
                                               zl_function** out);
ZL_API zl_status zl_function_indicator(const zl_function* base, double threshold,
                                       zl_function** out);
ZL_API zl_status zl_function_difference(const zl_function* a, const zl_function* b,
                                        zl_function** out);
ZL_API zl_status zl_function_spike_train(double width_scale, double width_exponent,
                                         double height_scale, double height_exponent,
                                         zl_function** out);
ZL_API void zl_function_free(zl_function* f);
ZL_API zl_status zl_function_eval(const zl_function* f, double t,
                                  const zl_zeta_config* cfg, zl_complex* out);

/* ------------------------------------------------------------------ */
/* moments                                                             */

typedef struct zl_moment_record {
    int k;
    double sigma;
    double t_max;
    double integral;
    double average;
    double target;
    double tail_bound;
    double rel_gap;
    double quad_err;
} zl_moment_record;

ZL_API zl_status zl_moment(const zl_divisor_table* table, int k, double sigma,
                           double t_max, const zl_quad_config* qcfg,
                           const zl_zeta_config* zcfg, zl_moment_record* out);
/* t_list strictly ascending; out receives n records. */
ZL_API zl_status zl_convergence_sweep(const zl_divisor_table* table, int k, double sigma,
                                      const double* t_list, size_t n,
                                      const zl_quad_config* qcfg,
                                      const zl_zeta_config* zcfg, zl_moment_record* out);
/* averages/quad_errs sized n; midpoint_ok sized n-2 (may be NULL). */
ZL_API zl_status zl_convexity_probe(const zl_divisor_table* table, int k,
                                    const double* sigma_grid, size_t n, double t_max,
                                    const zl_quad_config* qcfg, const zl_zeta_config* zcfg,
                                    double* averages, double* quad_errs, int* midpoint_ok,
                                    int* all_ok);

/* ------------------------------------------------------------------ */
/* Besicovitch inner products                                          */

ZL_API zl_status zl_inner_product(const zl_function* f, const zl_function* g,
                                  double t_max, const zl_quad_config* qcfg,
                                  const zl_zeta_config* zcfg, zl_complex* value,
                                  double* quad_err);

typedef struct zl_fourier_coefficient {
    double lambda;
    double t_max;
    zl_complex empirical;
    zl_complex predicted;
    double abs_error;
    double quad_err;
} zl_fourier_coefficient;
ZL_API zl_status zl_fourier_coeff(int k, double sigma, double lambda, double t_max,
                                        const zl_quad_config* qcfg,
                                        const zl_zeta_config* zcfg,
                                        zl_fourier_coefficient* out);

typedef struct zl_b2_distance {
    int k;
    double sigma;
    uint64_t n_terms;
    double t_max;
    double empirical;
    double analytic_tail;
    double tail_bound;
    double quad_err;
} zl_b2_distance;
ZL_API zl_status zl_b2_dist(const zl_divisor_table* table, int k, double sigma,
                                uint64_t n_terms, double t_max,
                                const zl_quad_config* qcfg, const zl_zeta_config* zcfg,
                                zl_b2_distance* out);

ZL_API zl_status zl_cauchy_empirical(int k, double sigma_a, double sigma_b, double t_max,
                                     const zl_quad_config* qcfg,
                                     const zl_zeta_config* zcfg, double* value,
                                     double* quad_err);

ZL_API zl_status zl_orthogonality_defect(double lambda1, double lambda2, double t_max,
                                         const zl_quad_config* qcfg, zl_complex* empirical,
                                         zl_complex* closed_form, double* bound);

/* ------------------------------------------------------------------ */
/* Laplace / Abel probes                                               */

typedef struct zl_laplace_probe {
    int k;
    double sigma;
    double x;
    double y;
    double t_cut;
    zl_complex value;
    double truncation_bound;
    double envelope;
    double quad_err;
} zl_laplace_probe;
ZL_API zl_status zl_laplace(int k, double sigma, double x, double y, double t_cut,
                                  const zl_quad_config* qcfg, const zl_zeta_config* zcfg,
                                  zl_laplace_probe* out);
ZL_API double zl_default_t_cut(double x);

typedef struct zl_abel_row {
    double x;
    double t_cut;
    double scaled; /* x * Re L(x) */
    double target;
    double rel_gap;
    double truncation_bound;
} zl_abel_row;
/* xs strictly descending; t_cut_override <= 0 selects the default rule. */
ZL_API zl_status zl_abel_probe(const zl_divisor_table* table, int k, double sigma,
                               const double* xs, size_t n, double t_cut_override,
                               const zl_quad_config* qcfg, const zl_zeta_config* zcfg,
                               zl_abel_row* out);

typedef struct zl_abel_cesaro {
    zl_moment_record cesaro;
    zl_laplace_probe abel;
    double x;
    double cesaro_mean;
    double abel_scaled;
    double discrepancy;
} zl_abel_cesaro;
ZL_API zl_status zl_abel_cesaro_compare(const zl_divisor_table* table, int k,
                                        double sigma, double t_max,
                                        const zl_quad_config* qcfg,
                                        const zl_zeta_config* zcfg, zl_abel_cesaro* out);

/* values/gaps sized n. */
ZL_API zl_status zl_line_continuity_probe(int k, const double* sigmas, size_t n,
                                          double sigma_limit, double x,
                                          const zl_quad_config* qcfg,
                                          const zl_zeta_config* zcfg, zl_complex* values,
                                          double* gaps, zl_complex* at_limit);

/* ------------------------------------------------------------------ */
/* concentration                                                       */

/* thresholds strictly ascending; the three output arrays are sized n. */
ZL_API zl_status zl_concentration_profile(const zl_function* f, const double* thresholds,
                                          size_t n, double t_max,
                                          const zl_quad_config* qcfg,
                                          const zl_zeta_config* zcfg, double* densities,
                                          double* mass_fractions, double* density_errs,
                                          double* mean_square, double* quad_err);

ZL_API zl_status zl_weighted_functional(const zl_function* f, const zl_function* g,
                                        double t_max, int phase_stripped,
                                        const zl_quad_config* qcfg,
                                        const zl_zeta_config* zcfg, zl_complex* ratio,
                                        double* ess_sup, double* mean_square,
                                        double* quad_err);

ZL_API zl_status zl_bounded_approx_gap(const zl_function* f, const zl_function* g,
                                       double t_max, const zl_quad_config* qcfg,
                                       const zl_zeta_config* zcfg, double* mean_square_gap,
                                       double* quad_err);

/* spike must be a spike train; outputs sized n. */
ZL_API zl_status zl_spike_null_set_demo(const zl_function* spike, zl_complex baseline,
                                        const double* t_grid, size_t n,
                                        double* support_densities, double* mass_fractions);

#ifdef __cplusplus
}
#endif

#endif /* ZETALAB_H */
