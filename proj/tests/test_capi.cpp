// The C surface of the shared library: status codes, thread-local error
// messages, opaque handles, and agreement with the frozen constants the
// core tests pin. Everything here goes through zetalab.h only.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "zetalab.h"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

namespace {

constexpr double kPi2Over6 = 1.64493406684822643647241516665;
constexpr double kPrefix10 = 1.99533649334560171452169359271;

} // namespace

TEST_CASE("zeta evaluation and error reporting") {
    zl_complex z{};
    REQUIRE(zl_zeta(2.0, 0.0, nullptr, &z) == ZL_OK);
    CHECK(std::abs(z.re - kPi2Over6) <= 1e-12);
    CHECK(std::abs(z.im) <= 1e-15);

    CHECK(zl_zeta(0.3, 1.0, nullptr, &z) == ZL_ERR_DOMAIN);
    CHECK(std::string(zl_last_error()).find("sigma") != std::string::npos);
    CHECK(zl_zeta(1.0, 0.0, nullptr, &z) == ZL_ERR_POLE);
    CHECK(zl_zeta(2.0, 0.0, nullptr, nullptr) == ZL_ERR_INVALID);

    zl_zeta_config cfg = zl_zeta_config_default();
    CHECK(cfg.em_terms == 1.0);
    CHECK(cfg.bernoulli_order == 8);
    cfg.bernoulli_order = 13;
    CHECK(zl_zeta(2.0, 0.0, &cfg, &z) == ZL_ERR_INVALID);

    zl_complex check{};
    REQUIRE(zl_zeta_check(0.75, 50.0, &check) == ZL_OK);
    REQUIRE(zl_zeta(0.75, 50.0, nullptr, &z) == ZL_OK);
    CHECK(std::hypot(z.re - check.re, z.im - check.im) <= 1e-8);
    CHECK(zl_zeta_check(0.75, 2001.0, &check) == ZL_ERR_UNSUPPORTED);

    double p = 0.0;
    REQUIRE(zl_abs_pow_2k(2.0, 0.0, 1, nullptr, &p) == ZL_OK);
    CHECK(std::abs(p - kPi2Over6 * kPi2Over6) <= 1e-12);
    CHECK(zl_abs_pow_2k(2.0, 0.0, 7, nullptr, &p) == ZL_ERR_DOMAIN);
}

TEST_CASE("growth diagnostic through the C surface") {
    const double grid[] = {10.0, 31.6, 100.0, 316.0, 1000.0};
    std::vector<double> abs_zeta(5), ratio(5);
    zl_growth_report rep{};
    REQUIRE(zl_growth_diagnostic(grid, 5, nullptr, abs_zeta.data(), ratio.data(),
                                 &rep) == ZL_OK);
    CHECK(rep.has_exponent == 1);
    CHECK(rep.ratio_max > 0.0);
    for (int i = 0; i < 5; ++i)
        CHECK(ratio[i] == doctest::Approx(abs_zeta[i] * std::pow(grid[i], -1.0 / 6.0)));

    const double single[] = {50.0};
    REQUIRE(zl_growth_diagnostic(single, 1, nullptr, nullptr, nullptr, &rep) == ZL_OK);
    CHECK(rep.has_exponent == 0);
    const double low[] = {5.0};
    CHECK(zl_growth_diagnostic(low, 1, nullptr, nullptr, nullptr, &rep) ==
          ZL_ERR_DOMAIN);
}

TEST_CASE("divisor tables, series, and the cache file") {
    zl_divisor_table* d2 = nullptr;
    REQUIRE(zl_divisor_sieve(2, 1000, &d2) == ZL_OK);
    REQUIRE(d2 != nullptr);

    int k = 0;
    uint64_t limit = 0;
    REQUIRE(zl_divisor_table_info(d2, &k, &limit) == ZL_OK);
    CHECK(k == 2);
    CHECK(limit == 1000);

    uint32_t v = 0;
    REQUIRE(zl_divisor_value(d2, 6, &v) == ZL_OK);
    CHECK(v == 4);
    CHECK(zl_divisor_value(d2, 1001, &v) == ZL_ERR_DOMAIN);

    uint64_t single = 0;
    REQUIRE(zl_divisor_single(3, 4, &single) == ZL_OK);
    CHECK(single == 6);
    CHECK(zl_divisor_single(9, 4, &single) == ZL_ERR_DOMAIN);

    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "zetalab_capi_test";
    fs::create_directories(dir);
    const std::string path = (dir / "d2.zldk").string();
    REQUIRE(zl_divisor_table_save(d2, path.c_str()) == ZL_OK);
    zl_divisor_table* loaded = nullptr;
    REQUIRE(zl_divisor_table_load(path.c_str(), &loaded) == ZL_OK);
    REQUIRE(zl_divisor_value(loaded, 12, &v) == ZL_OK);
    CHECK(v == 6);
    zl_divisor_table_free(loaded);
    CHECK(zl_divisor_table_load((dir / "missing.zldk").string().c_str(), &loaded) ==
          ZL_ERR_IO);
    fs::remove_all(dir);

    zl_divisor_table* d1 = nullptr;
    REQUIRE(zl_divisor_sieve(1, 100, &d1) == ZL_OK);
    zl_series_value s{};
    REQUIRE(zl_series_eval(d1, 0.75, 10, 0.0, &s) == ZL_OK);
    CHECK(std::abs(s.partial_sum - kPrefix10) <= 1e-13);
    CHECK(s.epsilon == 0.1); // the <= 0 argument selected the default

    double value = 0.0, tail = 0.0;
    REQUIRE(zl_cauchy_closed_form(d1, 0.8, 0.8, 100, 0.0, &value, &tail) == ZL_OK);
    CHECK(value == 0.0);

    zl_divisor_table_free(d1);
    zl_divisor_table_free(d2);
    zl_divisor_table_free(nullptr); // a no-op by contract
}

TEST_CASE("function handles") {
    zl_function* f = nullptr;
    REQUIRE(zl_function_zeta_power(1, 0.75, &f) == ZL_OK);
    zl_complex fv{}, zv{};
    REQUIRE(zl_function_eval(f, 30.0, nullptr, &fv) == ZL_OK);
    REQUIRE(zl_zeta(0.75, 30.0, nullptr, &zv) == ZL_OK);
    CHECK(fv.re == doctest::Approx(zv.re).epsilon(1e-12));
    CHECK(fv.im == doctest::Approx(zv.im).epsilon(1e-12));

    const double lambdas[] = {0.0, -std::log(2.0)};
    const zl_complex coeffs[] = {{1.0, 0.0}, {0.5, 0.0}};
    zl_function* bohr = nullptr;
    REQUIRE(zl_function_bohr(lambdas, coeffs, 2, &bohr) == ZL_OK);
    const double dup[] = {0.5, 0.5};
    zl_function* bad = nullptr;
    CHECK(zl_function_bohr(dup, coeffs, 2, &bad) == ZL_ERR_INVALID);

    zl_function* partial = nullptr;
    REQUIRE(zl_function_bohr_zeta_partial(1, 0.75, 3, &partial) == ZL_OK);
    zl_complex pv{};
    REQUIRE(zl_function_eval(partial, 0.0, nullptr, &pv) == ZL_OK);
    CHECK(std::abs(pv.re - 2.03329489515219135363182295255) <= 1e-13);

    zl_function* ind = nullptr;
    REQUIRE(zl_function_indicator(f, 1.0, &ind) == ZL_OK);
    zl_function* diff = nullptr;
    REQUIRE(zl_function_difference(f, bohr, &diff) == ZL_OK);
    zl_function* spikes = nullptr;
    REQUIRE(zl_function_spike_train(0.5, 2.0, 1.0, 0.0, &spikes) == ZL_OK);
    CHECK(zl_function_spike_train(0.5, 0.5, 1.0, 0.0, &bad) == ZL_ERR_INVALID);

    CHECK(zl_function_eval(nullptr, 1.0, nullptr, &fv) == ZL_ERR_INVALID);

    zl_function_free(spikes);
    zl_function_free(diff);
    zl_function_free(ind);
    zl_function_free(partial);
    zl_function_free(bohr);
    zl_function_free(f);
    zl_function_free(nullptr);
}

TEST_CASE("moment records and the convexity probe") {
    zl_divisor_table* d1 = nullptr;
    REQUIRE(zl_divisor_sieve(1, 10000, &d1) == ZL_OK);

    zl_moment_record rec{};
    REQUIRE(zl_moment(d1, 1, 1.5, 200.0, nullptr, nullptr, &rec) == ZL_OK);
    CHECK(rec.k == 1);
    CHECK(rec.t_max == 200.0);
    CHECK(rec.integral > 0.0);
    CHECK(std::abs(rec.integral / rec.average - 200.0) <= 1e-9);
    CHECK(rec.rel_gap < 0.05);

    CHECK(zl_moment(d1, 2, 1.5, 200.0, nullptr, nullptr, &rec) == ZL_ERR_INVALID);
    CHECK(zl_moment(d1, 1, 0.1, 200.0, nullptr, nullptr, &rec) == ZL_ERR_DOMAIN);

    const double grid[] = {100.0, 200.0};
    std::vector<zl_moment_record> recs(2);
    REQUIRE(zl_convergence_sweep(d1, 1, 1.5, grid, 2, nullptr, nullptr,
                                 recs.data()) == ZL_OK);
    CHECK(recs[0].t_max == 100.0);
    CHECK(recs[1].integral > recs[0].integral);

    const double sigmas[] = {1.0, 1.25, 1.5};
    double averages[3] = {0, 0, 0};
    double quad_errs[3] = {0, 0, 0};
    int midpoint_ok[1] = {0};
    int all_ok = 0;
    REQUIRE(zl_convexity_probe(d1, 1, sigmas, 3, 200.0, nullptr, nullptr, averages,
                               quad_errs, midpoint_ok, &all_ok) == ZL_OK);
    CHECK(all_ok == 1);
    CHECK(midpoint_ok[0] == 1);
    CHECK(averages[0] > averages[2]); // averages fall with sigma

    zl_divisor_table_free(d1);
}

TEST_CASE("inner products, coefficients, distances") {
    zl_function* f = nullptr;
    REQUIRE(zl_function_zeta_power(1, 1.0, &f) == ZL_OK);
    zl_complex ip{};
    double quad_err = 0.0;
    REQUIRE(zl_inner_product(f, f, 200.0, nullptr, nullptr, &ip, &quad_err) == ZL_OK);
    CHECK(ip.re > 0.0);
    CHECK(std::abs(ip.im) <= 1e-9);
    zl_function_free(f);

    zl_fourier_coefficient fc{};
    REQUIRE(zl_fourier_coeff(1, 0.75, -std::log(2.0), 300.0, nullptr, nullptr,
                             &fc) == ZL_OK);
    CHECK(std::abs(fc.predicted.re - 0.59460355750136053335874998528) <= 1e-13);
    CHECK(fc.abs_error <= 0.05);

    zl_divisor_table* d1 = nullptr;
    REQUIRE(zl_divisor_sieve(1, 1000, &d1) == ZL_OK);
    zl_b2_distance b2{};
    REQUIRE(zl_b2_dist(d1, 1, 1.25, 10, 200.0, nullptr, nullptr, &b2) == ZL_OK);
    CHECK(b2.empirical >= 0.0);
    CHECK(b2.analytic_tail > 0.0);
    zl_divisor_table_free(d1);

    double dist = -1.0;
    REQUIRE(zl_cauchy_empirical(1, 0.8, 0.8, 100.0, nullptr, nullptr, &dist,
                                &quad_err) == ZL_OK);
    CHECK(dist == 0.0);

    zl_complex emp{}, closed{};
    double bound = 0.0;
    REQUIRE(zl_orthogonality_defect(-std::log(2.0), -std::log(3.0), 100.0, nullptr,
                                    &emp, &closed, &bound) == ZL_OK);
    CHECK(std::hypot(emp.re, emp.im) <= bound);
}

TEST_CASE("Laplace and Abel probes") {
    CHECK(zl_default_t_cut(1e-3) == doctest::Approx(25000.0));
    CHECK(zl_default_t_cut(100.0) == 50.0);

    zl_laplace_probe probe{};
    REQUIRE(zl_laplace(1, 1.5, 0.5, 0.0, 60.0, nullptr, nullptr, &probe) == ZL_OK);
    CHECK(probe.value.re > 0.0);
    CHECK(probe.truncation_bound >= 0.0);
    CHECK(zl_laplace(1, 1.5, -1.0, 0.0, 60.0, nullptr, nullptr, &probe) ==
          ZL_ERR_DOMAIN);

    zl_divisor_table* d1 = nullptr;
    REQUIRE(zl_divisor_sieve(1, 10000, &d1) == ZL_OK);
    const double xs[] = {0.5, 0.2};
    std::vector<zl_abel_row> rows(2);
    REQUIRE(zl_abel_probe(d1, 1, 1.25, xs, 2, 0.0, nullptr, nullptr, rows.data()) ==
            ZL_OK);
    CHECK(rows[0].x == 0.5);
    CHECK(rows[1].rel_gap < rows[0].rel_gap);
    const double bad_xs[] = {0.2, 0.5};
    CHECK(zl_abel_probe(d1, 1, 1.25, bad_xs, 2, 0.0, nullptr, nullptr, rows.data()) ==
          ZL_ERR_INVALID);

    zl_abel_cesaro cmp{};
    REQUIRE(zl_abel_cesaro_compare(d1, 1, 2.0, 50.0, nullptr, nullptr, &cmp) == ZL_OK);
    CHECK(cmp.x == doctest::Approx(0.02));
    CHECK(cmp.discrepancy < 0.10);
    zl_divisor_table_free(d1);

    const double sigmas[] = {1.0, 0.9};
    std::vector<zl_complex> values(2);
    std::vector<double> gaps(2);
    zl_complex at_limit{};
    REQUIRE(zl_line_continuity_probe(1, sigmas, 2, 0.8, 0.1, nullptr, nullptr,
                                     values.data(), gaps.data(), &at_limit) == ZL_OK);
    CHECK(gaps[1] < gaps[0]);
}

TEST_CASE("concentration diagnostics through the C surface") {
    zl_function* f = nullptr;
    REQUIRE(zl_function_zeta_power(1, 0.9, &f) == ZL_OK);
    const double thresholds[] = {0.5, 1.0, 2.0};
    double densities[3], mass[3], errs[3];
    double mean_square = 0.0, quad_err = 0.0;
    REQUIRE(zl_concentration_profile(f, thresholds, 3, 200.0, nullptr, nullptr,
                                     densities, mass, errs, &mean_square,
                                     &quad_err) == ZL_OK);
    CHECK(densities[1] <= densities[0]);
    CHECK(densities[2] <= densities[1]);
    CHECK(mean_square > 0.0);

    zl_function* ind = nullptr;
    REQUIRE(zl_function_indicator(f, 1.0, &ind) == ZL_OK);
    zl_complex ratio{};
    double ess_sup = 0.0, msq = 0.0;
    REQUIRE(zl_weighted_functional(f, ind, 200.0, 1, nullptr, nullptr, &ratio,
                                   &ess_sup, &msq, &quad_err) == ZL_OK);
    CHECK(ratio.re == mass[1]); // same tree: node-exact mass fraction
    CHECK(ratio.im == 0.0);

    double gap = 0.0;
    REQUIRE(zl_bounded_approx_gap(f, f, 100.0, nullptr, nullptr, &gap, &quad_err) ==
            ZL_OK);
    CHECK(gap == 0.0);

    zl_function* spikes = nullptr;
    REQUIRE(zl_function_spike_train(0.5, 2.0, 1.4142135623730951, 1.0, &spikes) ==
            ZL_OK);
    const double grid[] = {100.0, 1000.0};
    double support[2], frac[2];
    REQUIRE(zl_spike_null_set_demo(spikes, {1.0, 0.0}, grid, 2, support, frac) ==
            ZL_OK);
    CHECK(support[1] < support[0]);
    CHECK(frac[1] > 0.2);
    CHECK(zl_spike_null_set_demo(f, {1.0, 0.0}, grid, 2, support, frac) ==
          ZL_ERR_INVALID);

    zl_function_free(spikes);
    zl_function_free(ind);
    zl_function_free(f);
}
