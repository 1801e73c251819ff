#include "zetalab.h"

#include <cstring>
#include <new>
#include <string>

#include "besicovitch.hpp"
#include "concentration.hpp"
#include "divisor.hpp"
#include "errors.hpp"
#include "function_spec.hpp"
#include "moment.hpp"
#include "tauberian.hpp"
#include "zeta_eval.hpp"

using namespace zetalab;

struct zl_divisor_table {
    DivisorTable table;
};

struct zl_function {
    FunctionSpec spec;
};

namespace {

thread_local std::string g_last_error;

zl_status status_of(ErrorCode code) {
    switch (code) {
        case ErrorCode::domain: return ZL_ERR_DOMAIN;
        case ErrorCode::pole: return ZL_ERR_POLE;
        case ErrorCode::unsupported: return ZL_ERR_UNSUPPORTED;
        case ErrorCode::resource: return ZL_ERR_RESOURCE;
        case ErrorCode::accuracy: return ZL_ERR_ACCURACY;
        case ErrorCode::invalid_input: return ZL_ERR_INVALID;
        case ErrorCode::io: return ZL_ERR_IO;
    }
    return ZL_ERR_INTERNAL;
}

template <typename Fn>
zl_status guarded(Fn&& fn) {
    try {
        fn();
        return ZL_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return status_of(e.code());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return ZL_ERR_RESOURCE;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return ZL_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown failure";
        return ZL_ERR_INTERNAL;
    }
}

void check_out(const void* p) {
    require(p != nullptr, ErrorCode::invalid_input, "output pointer must not be NULL");
}

void check_in(const void* p, const char* what) {
    require(p != nullptr, ErrorCode::invalid_input,
            std::string(what) + " must not be NULL");
}

zl_complex to_c(std::complex<double> z) { return {z.real(), z.imag()}; }

ZetaEvalConfig from_c(const zl_zeta_config* cfg) {
    if (!cfg) return {};
    return {cfg->em_terms, cfg->bernoulli_order, cfg->target_abs_error};
}

QuadratureConfig from_c(const zl_quad_config* cfg) {
    if (!cfg) return {};
    return {cfg->panel_width, cfg->nodes_per_panel, cfg->refine_tol, cfg->max_halvings,
            cfg->workers};
}

zl_moment_record to_c(const MomentRecord& rec) {
    return {rec.k,      rec.sigma,      rec.t_max,   rec.integral, rec.average,
            rec.target, rec.tail_bound, rec.rel_gap, rec.quad_err};
}

zl_laplace_probe to_c(const LaplaceProbe& p) {
    return {p.k,         p.sigma,       p.x,          p.y,       p.t_cut,
            to_c(p.value), p.truncation_bound, p.envelope, p.quad_err};
}

} // namespace

extern "C" {

const char* zl_last_error(void) { return g_last_error.c_str(); }

zl_zeta_config zl_zeta_config_default(void) {
    const ZetaEvalConfig d;
    return {d.em_terms, d.bernoulli_order, d.target_abs_error};
}

zl_quad_config zl_quad_config_default(void) {
    const QuadratureConfig d;
    return {d.panel_width, d.nodes_per_panel, d.refine_tol, d.max_halvings, d.workers};
}

zl_status zl_zeta(double sigma, double t, const zl_zeta_config* cfg, zl_complex* out) {
    return guarded([&] {
        check_out(out);
        *out = to_c(zeta(sigma, t, from_c(cfg)));
    });
}

zl_status zl_zeta_check(double sigma, double t, zl_complex* out) {
    return guarded([&] {
        check_out(out);
        *out = to_c(zeta_oracle(sigma, t));
    });
}

zl_status zl_abs_pow_2k(double sigma, double t, int k, const zl_zeta_config* cfg,
                        double* out) {
    return guarded([&] {
        check_out(out);
        *out = abs_pow_2k(sigma, t, k, from_c(cfg));
    });
}

zl_status zl_growth_diagnostic(const double* t_grid, size_t n, const zl_zeta_config* cfg,
                               double* abs_zeta_out, double* ratio_out,
                               zl_growth_report* out) {
    return guarded([&] {
        check_in(t_grid, "t_grid");
        check_out(out);
        const GrowthReport rep =
            growth_diagnostic(std::span<const double>(t_grid, n), from_c(cfg));
        if (abs_zeta_out)
            std::memcpy(abs_zeta_out, rep.abs_zeta.data(), n * sizeof(double));
        if (ratio_out) std::memcpy(ratio_out, rep.ratio.data(), n * sizeof(double));
        *out = {rep.ratio_max, rep.fitted_exponent, rep.has_exponent ? 1 : 0};
    });
}

zl_status zl_divisor_sieve(int k, uint64_t limit, zl_divisor_table** out) {
    return guarded([&] {
        check_out(out);
        *out = new zl_divisor_table{divisor_sieve(k, limit)};
    });
}

zl_status zl_divisor_table_load(const char* path, zl_divisor_table** out) {
    return guarded([&] {
        check_in(path, "path");
        check_out(out);
        *out = new zl_divisor_table{load_divisor_table(path)};
    });
}

zl_status zl_divisor_table_save(const zl_divisor_table* table, const char* path) {
    return guarded([&] {
        check_in(table, "table");
        check_in(path, "path");
        save_divisor_table(table->table, path);
    });
}

void zl_divisor_table_free(zl_divisor_table* table) { delete table; }

zl_status zl_divisor_table_info(const zl_divisor_table* table, int* k, uint64_t* limit) {
    return guarded([&] {
        check_in(table, "table");
        if (k) *k = table->table.k;
        if (limit) *limit = table->table.limit;
    });
}

zl_status zl_divisor_value(const zl_divisor_table* table, uint64_t n, uint32_t* out) {
    return guarded([&] {
        check_in(table, "table");
        check_out(out);
        *out = table->table(n);
    });
}

zl_status zl_divisor_single(int k, uint64_t n, uint64_t* out) {
    return guarded([&] {
        check_out(out);
        *out = divisor_count_single(k, n);
    });
}

zl_status zl_series_eval(const zl_divisor_table* table, double sigma, uint64_t cutoff,
                          double epsilon, zl_series_value* out) {
    return guarded([&] {
        check_in(table, "table");
        check_out(out);
        const SeriesValue v = series_value(table->table, sigma, cutoff,
                                           epsilon > 0.0 ? epsilon : 0.1);
        *out = {v.k, v.sigma, v.cutoff, v.epsilon, v.partial_sum, v.tail_bound};
    });
}

zl_status zl_cauchy_closed_form(const zl_divisor_table* table, double sigma_a,
                                double sigma_b, uint64_t cutoff, double epsilon,
                                double* value, double* tail_bound) {
    return guarded([&] {
        check_in(table, "table");
        check_out(value);
        const CauchyClosedForm cf = cauchy_distance_closed_form(
            table->table, sigma_a, sigma_b, cutoff, epsilon > 0.0 ? epsilon : 0.1);
        *value = cf.value;
        if (tail_bound) *tail_bound = cf.tail_bound;
    });
}

zl_status zl_function_constant(zl_complex c, zl_function** out) {
    return guarded([&] {
        check_out(out);
        *out = new zl_function{FunctionSpec::constant({c.re, c.im})};
    });
}

zl_status zl_function_exponential(double lambda, zl_function** out) {
    return guarded([&] {
        check_out(out);
        *out = new zl_function{FunctionSpec::exponential(lambda)};
    });
}

zl_status zl_function_zeta_power(int k, double sigma, zl_function** out) {
    return guarded([&] {
        check_out(out);
        *out = new zl_function{FunctionSpec::zeta_power(k, sigma)};
    });
}

zl_status zl_function_bohr(const double* lambdas, const zl_complex* coeffs, size_t n,
                           zl_function** out) {
    return guarded([&] {
        check_in(lambdas, "lambdas");
        check_in(coeffs, "coeffs");
        check_out(out);
        std::vector<FunctionSpec::BohrTerm> terms;
        terms.reserve(n);
        for (size_t i = 0; i < n; ++i)
            terms.push_back({lambdas[i], {coeffs[i].re, coeffs[i].im}});
        *out = new zl_function{FunctionSpec::bohr_polynomial(std::move(terms))};
    });
}

zl_status zl_function_bohr_zeta_partial(int k, double sigma, uint64_t n_terms,
                                        zl_function** out) {
    return guarded([&] {
        check_out(out);
        *out = new zl_function{bohr_partial_sum(k, sigma, n_terms)};
    });
}

zl_status zl_function_indicator(const zl_function* base, double threshold,
                                zl_function** out) {
    return guarded([&] {
        check_in(base, "base");
        check_out(out);
        *out = new zl_function{FunctionSpec::indicator(base->spec, threshold)};
    });
}

zl_status zl_function_difference(const zl_function* a, const zl_function* b,
                                 zl_function** out) {
    return guarded([&] {
        check_in(a, "a");
        check_in(b, "b");
        check_out(out);
        *out = new zl_function{FunctionSpec::difference(a->spec, b->spec)};
    });
}

zl_status zl_function_spike_train(double width_scale, double width_exponent,
                                  double height_scale, double height_exponent,
                                  zl_function** out) {
    return guarded([&] {
        check_out(out);
        *out = new zl_function{FunctionSpec::spike_train(width_scale, width_exponent,
                                                         height_scale, height_exponent)};
    });
}

void zl_function_free(zl_function* f) { delete f; }

zl_status zl_function_eval(const zl_function* f, double t, const zl_zeta_config* cfg,
                           zl_complex* out) {
    return guarded([&] {
        check_in(f, "f");
        check_out(out);
        *out = to_c(f->spec.eval(t, from_c(cfg)));
    });
}

zl_status zl_moment(const zl_divisor_table* table, int k, double sigma, double t_max,
                    const zl_quad_config* qcfg, const zl_zeta_config* zcfg,
                    zl_moment_record* out) {
    return guarded([&] {
        check_in(table, "table");
        check_out(out);
        *out = to_c(moment(table->table, k, sigma, t_max, from_c(qcfg), from_c(zcfg)));
    });
}

zl_status zl_convergence_sweep(const zl_divisor_table* table, int k, double sigma,
                               const double* t_list, size_t n,
                               const zl_quad_config* qcfg, const zl_zeta_config* zcfg,
                               zl_moment_record* out) {
    return guarded([&] {
        check_in(table, "table");
        check_in(t_list, "t_list");
        check_out(out);
        const auto recs = convergence_sweep(table->table, k, sigma,
                                            std::span<const double>(t_list, n),
                                            from_c(qcfg), from_c(zcfg));
        for (size_t i = 0; i < recs.size(); ++i) out[i] = to_c(recs[i]);
    });
}

zl_status zl_convexity_probe(const zl_divisor_table* table, int k,
                             const double* sigma_grid, size_t n, double t_max,
                             const zl_quad_config* qcfg, const zl_zeta_config* zcfg,
                             double* averages, double* quad_errs, int* midpoint_ok,
                             int* all_ok) {
    return guarded([&] {
        check_in(table, "table");
        check_in(sigma_grid, "sigma_grid");
        check_out(averages);
        const ConvexityReport rep =
            convexity_probe(table->table, k, std::span<const double>(sigma_grid, n),
                            t_max, from_c(qcfg), from_c(zcfg));
        for (size_t i = 0; i < rep.points.size(); ++i) {
            averages[i] = rep.points[i].average;
            if (quad_errs) quad_errs[i] = rep.points[i].quad_err;
        }
        if (midpoint_ok)
            for (size_t i = 0; i < rep.midpoint_ok.size(); ++i)
                midpoint_ok[i] = rep.midpoint_ok[i] ? 1 : 0;
        if (all_ok) *all_ok = rep.all_ok ? 1 : 0;
    });
}

zl_status zl_inner_product(const zl_function* f, const zl_function* g, double t_max,
                           const zl_quad_config* qcfg, const zl_zeta_config* zcfg,
                           zl_complex* value, double* quad_err) {
    return guarded([&] {
        check_in(f, "f");
        check_in(g, "g");
        check_out(value);
        const EmpiricalMean mean =
            inner_product(f->spec, g->spec, t_max, from_c(qcfg), from_c(zcfg));
        *value = to_c(mean.value);
        if (quad_err) *quad_err = mean.quad_err;
    });
}

zl_status zl_fourier_coeff(int k, double sigma, double lambda, double t_max,
                                 const zl_quad_config* qcfg, const zl_zeta_config* zcfg,
                                 zl_fourier_coefficient* out) {
    return guarded([&] {
        check_out(out);
        const FourierCoefficient c =
            fourier_coefficient(k, sigma, lambda, t_max, from_c(qcfg), from_c(zcfg));
        *out = {c.lambda,           c.t_max,     to_c(c.empirical),
                to_c(c.predicted), c.abs_error, c.quad_err};
    });
}

zl_status zl_b2_dist(const zl_divisor_table* table, int k, double sigma,
                         uint64_t n_terms, double t_max, const zl_quad_config* qcfg,
                         const zl_zeta_config* zcfg, zl_b2_distance* out) {
    return guarded([&] {
        check_in(table, "table");
        check_out(out);
        const B2Distance d = b2_distance(table->table, k, sigma, n_terms, t_max,
                                         from_c(qcfg), from_c(zcfg));
        *out = {d.k,         d.sigma,         d.n_terms,    d.t_max,
                d.empirical, d.analytic_tail, d.tail_bound, d.quad_err};
    });
}

zl_status zl_cauchy_empirical(int k, double sigma_a, double sigma_b, double t_max,
                              const zl_quad_config* qcfg, const zl_zeta_config* zcfg,
                              double* value, double* quad_err) {
    return guarded([&] {
        check_out(value);
        const CauchyDistance d =
            cauchy_distance_empirical(k, sigma_a, sigma_b, t_max, from_c(qcfg),
                                      from_c(zcfg));
        *value = d.value;
        if (quad_err) *quad_err = d.quad_err;
    });
}

zl_status zl_orthogonality_defect(double lambda1, double lambda2, double t_max,
                                  const zl_quad_config* qcfg, zl_complex* empirical,
                                  zl_complex* closed_form, double* bound) {
    return guarded([&] {
        check_out(empirical);
        const OrthogonalityDefect d =
            orthogonality_defect(lambda1, lambda2, t_max, from_c(qcfg));
        *empirical = to_c(d.empirical);
        if (closed_form) *closed_form = to_c(d.closed_form);
        if (bound) *bound = d.bound;
    });
}

zl_status zl_laplace(int k, double sigma, double x, double y, double t_cut,
                           const zl_quad_config* qcfg, const zl_zeta_config* zcfg,
                           zl_laplace_probe* out) {
    return guarded([&] {
        check_out(out);
        *out = to_c(laplace_probe(k, sigma, x, y, t_cut, from_c(qcfg), from_c(zcfg)));
    });
}

double zl_default_t_cut(double x) {
    try {
        return default_t_cut(x);
    } catch (const Error& e) {
        g_last_error = e.what();
        return -1.0;
    }
}

zl_status zl_abel_probe(const zl_divisor_table* table, int k, double sigma,
                        const double* xs, size_t n, double t_cut_override,
                        const zl_quad_config* qcfg, const zl_zeta_config* zcfg,
                        zl_abel_row* out) {
    return guarded([&] {
        check_in(table, "table");
        check_in(xs, "xs");
        check_out(out);
        const auto rows =
            abel_probe(table->table, k, sigma, std::span<const double>(xs, n),
                       from_c(qcfg), from_c(zcfg), t_cut_override);
        for (size_t i = 0; i < rows.size(); ++i)
            out[i] = {rows[i].x,       rows[i].t_cut,   rows[i].scaled,
                      rows[i].target, rows[i].rel_gap, rows[i].truncation_bound};
    });
}

zl_status zl_abel_cesaro_compare(const zl_divisor_table* table, int k, double sigma,
                                 double t_max, const zl_quad_config* qcfg,
                                 const zl_zeta_config* zcfg, zl_abel_cesaro* out) {
    return guarded([&] {
        check_in(table, "table");
        check_out(out);
        const AbelCesaroComparison cmp =
            abel_cesaro_compare(table->table, k, sigma, t_max, from_c(qcfg),
                                from_c(zcfg));
        *out = {to_c(cmp.cesaro), to_c(cmp.abel),   cmp.x,
                cmp.cesaro_mean,  cmp.abel_scaled, cmp.discrepancy};
    });
}

zl_status zl_line_continuity_probe(int k, const double* sigmas, size_t n,
                                   double sigma_limit, double x,
                                   const zl_quad_config* qcfg, const zl_zeta_config* zcfg,
                                   zl_complex* values, double* gaps,
                                   zl_complex* at_limit) {
    return guarded([&] {
        check_in(sigmas, "sigmas");
        check_out(values);
        const ContinuityProbe probe =
            line_continuity_probe(k, std::span<const double>(sigmas, n), sigma_limit, x,
                                  from_c(qcfg), from_c(zcfg));
        for (size_t i = 0; i < probe.along.size(); ++i) {
            values[i] = to_c(probe.along[i].value);
            if (gaps) gaps[i] = probe.along[i].gap;
        }
        if (at_limit) *at_limit = to_c(probe.at_limit.value);
    });
}

zl_status zl_concentration_profile(const zl_function* f, const double* thresholds,
                                   size_t n, double t_max, const zl_quad_config* qcfg,
                                   const zl_zeta_config* zcfg, double* densities,
                                   double* mass_fractions, double* density_errs,
                                   double* mean_square, double* quad_err) {
    return guarded([&] {
        check_in(f, "f");
        check_in(thresholds, "thresholds");
        check_out(densities);
        check_out(mass_fractions);
        const ConcentrationProfile prof =
            concentration_profile(f->spec, std::span<const double>(thresholds, n), t_max,
                                  from_c(qcfg), from_c(zcfg));
        for (size_t i = 0; i < n; ++i) {
            densities[i] = prof.densities[i];
            mass_fractions[i] = prof.mass_fractions[i];
            if (density_errs) density_errs[i] = prof.density_errs[i];
        }
        if (mean_square) *mean_square = prof.mean_square;
        if (quad_err) *quad_err = prof.quad_err;
    });
}

zl_status zl_weighted_functional(const zl_function* f, const zl_function* g,
                                 double t_max, int phase_stripped,
                                 const zl_quad_config* qcfg, const zl_zeta_config* zcfg,
                                 zl_complex* ratio, double* ess_sup, double* mean_square,
                                 double* quad_err) {
    return guarded([&] {
        check_in(f, "f");
        check_in(g, "g");
        check_out(ratio);
        const WeightedFunctional wf =
            weighted_functional(f->spec, g->spec, t_max, phase_stripped != 0,
                                from_c(qcfg), from_c(zcfg));
        *ratio = to_c(wf.ratio);
        if (ess_sup) *ess_sup = wf.ess_sup_g;
        if (mean_square) *mean_square = wf.mean_square;
        if (quad_err) *quad_err = wf.quad_err;
    });
}

zl_status zl_bounded_approx_gap(const zl_function* f, const zl_function* g, double t_max,
                                const zl_quad_config* qcfg, const zl_zeta_config* zcfg,
                                double* mean_square_gap, double* quad_err) {
    return guarded([&] {
        check_in(f, "f");
        check_in(g, "g");
        check_out(mean_square_gap);
        const ApproxGap gap =
            bounded_approx_gap(f->spec, g->spec, t_max, from_c(qcfg), from_c(zcfg));
        *mean_square_gap = gap.mean_square_gap;
        if (quad_err) *quad_err = gap.quad_err;
    });
}

zl_status zl_spike_null_set_demo(const zl_function* spike, zl_complex baseline,
                                 const double* t_grid, size_t n,
                                 double* support_densities, double* mass_fractions) {
    return guarded([&] {
        check_in(spike, "spike");
        check_in(t_grid, "t_grid");
        check_out(support_densities);
        check_out(mass_fractions);
        const auto rows =
            spike_null_set_demo(spike->spec, {baseline.re, baseline.im},
                                std::span<const double>(t_grid, n));
        for (size_t i = 0; i < rows.size(); ++i) {
            support_densities[i] = rows[i].support_density;
            mass_fractions[i] = rows[i].mass_fraction;
        }
    });
}

} // extern "C"
