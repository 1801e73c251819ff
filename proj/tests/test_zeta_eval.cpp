// Euler-Maclaurin zeta evaluation against frozen high-precision values and
// the independent eta-series route. The frozen constants were produced with
// a 30-digit arbitrary-precision evaluation and are exact to the printed
// digits:
//
//   zeta(1.5)  = 2.61237534868548834334856756792
//   zeta(2.5)  = 1.34148725725091717975676969335
//   zeta(3)    = 1.20205690315959428539973816151
//   zeta(4)    = 1.08232323371113819151600369654
//   pi^2/6     = 1.64493406684822643647241516665
//   zeta(0.75 + 100i) = 2.00299199525539583 - 0.05439207119009259 i
//   zeta(0.75 +  50i) = 0.23903524125986129 + 0.31824888870622502 i
//   first zero ordinate t1 = 14.1347251417346937904572519836

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "zeta_eval.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

using namespace zetalab;

namespace {

constexpr double kZeta15 = 2.61237534868548834334856756792;
constexpr double kZeta25 = 1.34148725725091717975676969335;
constexpr double kZeta3 = 1.20205690315959428539973816151;
constexpr double kZeta4 = 1.08232323371113819151600369654;
constexpr double kPi2Over6 = 1.64493406684822643647241516665;
constexpr double kFirstZero = 14.1347251417346937904572519836;

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected a zetalab::Error");
    return ErrorCode::domain;
}

} // namespace

TEST_CASE("zeta matches frozen real-axis values") {
    CHECK(std::abs(zeta(2.0, 0.0).real() - kPi2Over6) <= 1e-13 * kPi2Over6);
    CHECK(std::abs(zeta(1.5, 0.0).real() - kZeta15) <= 1e-13 * kZeta15);
    CHECK(std::abs(zeta(2.5, 0.0).real() - kZeta25) <= 1e-13 * kZeta25);
    CHECK(std::abs(zeta(2.0, 0.0).imag()) <= 1e-15);
    CHECK(std::abs(zeta(1.5, 0.0) * zeta(1.5, 0.0) * zeta(1.5, 0.0) * zeta(1.5, 0.0) /
                       kZeta3 -
                   38.7451441439013209983604949565) <= 1e-11);
}

TEST_CASE("zeta matches frozen off-axis values") {
    const std::complex<double> z100 = zeta(0.75, 100.0);
    CHECK(std::abs(z100.real() - 2.00299199525539583) <= 1e-9);
    CHECK(std::abs(z100.imag() - (-0.05439207119009259)) <= 1e-9);

    const std::complex<double> z50 = zeta(0.75, 50.0);
    CHECK(std::abs(z50.real() - 0.23903524125986129) <= 1e-9);
    CHECK(std::abs(z50.imag() - 0.31824888870622502) <= 1e-9);
}

TEST_CASE("eta-series oracle stands on its own") {
    CHECK(std::abs(zeta_oracle(2.0, 0.0).real() - kPi2Over6) <= 1e-12);
    CHECK(std::abs(zeta_oracle(1.5, 0.0).real() - kZeta15) <= 1e-12);
    const std::complex<double> z = zeta_oracle(0.75, 50.0);
    CHECK(std::abs(z.real() - 0.23903524125986129) <= 1e-11);
    CHECK(std::abs(z.imag() - 0.31824888870622502) <= 1e-11);
}

TEST_CASE("Euler-Maclaurin agrees with the eta oracle across the strip") {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> pick_sigma(0.45, 2.4);
    std::uniform_real_distribution<double> pick_t(0.5, 1000.0);
    for (int i = 0; i < 200; ++i) {
        double sigma = pick_sigma(rng);
        const double t = pick_t(rng);
        // stay clear of the pole guard at s = 1
        if (std::abs(sigma - 1.0) < 0.01 && t < 0.01) sigma += 0.05;
        const std::complex<double> a = zeta(sigma, t);
        const std::complex<double> b = zeta_oracle(sigma, t);
        CHECK(std::abs(a - b) <= 1e-8);
    }
}

TEST_CASE("conjugation symmetry holds to relative 1e-12") {
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> pick_sigma(0.45, 2.4);
    std::uniform_real_distribution<double> pick_t(0.1, 5000.0);
    for (int i = 0; i < 50; ++i) {
        const double sigma = pick_sigma(rng);
        const double t = pick_t(rng);
        const std::complex<double> up = zeta(sigma, t);
        const std::complex<double> down = zeta(sigma, -t);
        CHECK(std::abs(down - std::conj(up)) <= 1e-12 * std::abs(up));
    }
}

TEST_CASE("modulus collapses at the first critical zero") {
    CHECK(std::abs(zeta(0.5, kFirstZero)) < 1e-6);
    // a nudge of 0.01 in t restores a visibly nonzero modulus
    CHECK(std::abs(zeta(0.5, kFirstZero + 0.01)) > 1e-3);
}

TEST_CASE("more Bernoulli terms never hurt") {
    std::vector<double> worst;
    for (int order : {2, 4, 8, 12}) {
        ZetaEvalConfig cfg;
        cfg.bernoulli_order = order;
        cfg.target_abs_error = 1.0; // disable the accuracy gate for the scan
        double w = 0.0;
        for (double t : {5.0, 17.0, 51.0, 163.0, 499.0}) {
            const double err = std::abs(zeta(0.6, t, cfg) - zeta_oracle(0.6, t));
            w = std::max(w, err);
        }
        worst.push_back(w);
    }
    for (std::size_t i = 1; i < worst.size(); ++i)
        CHECK(worst[i] <= worst[i - 1] + 1e-13);
    CHECK(worst.back() <= 1e-10);
}

TEST_CASE("main-sum cutoff follows the configured scale") {
    ZetaEvalConfig cfg;
    CHECK(em_cutoff(cfg, 0.0) == 21);   // ceil(1 * max(1, 0)) + 20
    CHECK(em_cutoff(cfg, 100.0) == 120);
    CHECK(em_cutoff(cfg, 100.5) == 121);
    cfg.em_terms = 2.0;
    CHECK(em_cutoff(cfg, 100.0) == 220);
    CHECK(em_cutoff(cfg, 500.0) >= em_cutoff(cfg, 100.0));
}

TEST_CASE("em_tail remainder estimate covers the truncation") {
    // With the tail evaluated at two cutoffs, the difference of the full
    // values must sit inside the reported remainder estimates.
    const std::complex<double> s{0.75, 40.0};
    ZetaEvalConfig cfg;
    const EmTail tail = em_tail(s, static_cast<double>(em_cutoff(cfg, 40.0)), 6);
    CHECK(tail.err_est >= 0.0);
    CHECK(std::isfinite(tail.err_est));
    const std::complex<double> full = zeta(0.75, 40.0);
    const std::complex<double> oracle = zeta_oracle(0.75, 40.0);
    CHECK(std::abs(full - oracle) <= std::max(tail.err_est, 1e-9));
}

TEST_CASE("unit_phase tracks the fma-compensated angle") {
    // reference through 80-bit arithmetic on the same double inputs
    const double a = -std::log(2.0);
    for (double b : {1.0, 1234.5, 99991.25, 1.0e6}) {
        const long double p = static_cast<long double>(a) * static_cast<long double>(b);
        const std::complex<double> u = unit_phase(a, b);
        CHECK(std::abs(u.real() - static_cast<double>(cosl(p))) <= 5e-14);
        CHECK(std::abs(u.imag() - static_cast<double>(sinl(p))) <= 5e-14);
        CHECK(std::abs(std::abs(u) - 1.0) <= 1e-14);
    }
}

TEST_CASE("domain, pole, and configuration guards") {
    CHECK(code_of([] { zeta(0.39, 1.0); }) == ErrorCode::domain);
    CHECK(code_of([] { zeta(2.51, 1.0); }) == ErrorCode::domain);
    CHECK(code_of([] { zeta(1.0, 0.0); }) == ErrorCode::pole);
    CHECK(code_of([] { zeta(1.0, 1e-7); }) == ErrorCode::pole);
    CHECK_NOTHROW(zeta(1.0, 1.0)); // off the pole along t is fine

    ZetaEvalConfig bad;
    bad.bernoulli_order = 13;
    CHECK(code_of([&] { validate(bad); }) == ErrorCode::invalid_input);
    bad.bernoulli_order = 0;
    CHECK(code_of([&] { validate(bad); }) == ErrorCode::invalid_input);
    bad.bernoulli_order = 8;
    bad.em_terms = 0.0;
    CHECK(code_of([&] { validate(bad); }) == ErrorCode::invalid_input);
    bad.em_terms = 1.0;
    bad.target_abs_error = 0.0;
    CHECK(code_of([&] { validate(bad); }) == ErrorCode::invalid_input);

    CHECK(code_of([] { zeta_oracle(0.75, 2001.0); }) == ErrorCode::unsupported);
}

TEST_CASE("abs_pow_2k is literally |zeta|^{2k}") {
    for (int k = 1; k <= 6; ++k) {
        const double direct = abs_pow_2k(1.5, 7.7, k);
        const double expect = std::pow(std::abs(zeta(1.5, 7.7)), 2.0 * k);
        CHECK(direct == doctest::Approx(expect).epsilon(1e-12));
    }
    CHECK(abs_pow_2k(2.0, 0.0, 1) ==
          doctest::Approx(2.70580808427784547879000924135).epsilon(1e-12));
    CHECK(code_of([] { abs_pow_2k(1.5, 1.0, 0); }) == ErrorCode::domain);
    CHECK(code_of([] { abs_pow_2k(1.5, 1.0, 7); }) == ErrorCode::domain);
}

TEST_CASE("growth diagnostic: grids, ratios, and the exponent fit") {
    const std::vector<double> single{14.0};
    const GrowthReport one = growth_diagnostic(single);
    CHECK_FALSE(one.has_exponent);
    CHECK(one.ratio.size() == 1);
    CHECK(one.ratio[0] ==
          doctest::Approx(std::abs(zeta(0.5, 14.0)) * std::pow(14.0, -1.0 / 6.0)));

    // geometric grid: the subconvex ratio stays modest and the fitted
    // exponent sits well below the convexity slope 1/6
    std::vector<double> grid;
    for (int i = 0; i < 25; ++i)
        grid.push_back(10.0 * std::pow(1e4 / 10.0, i / 24.0));
    const GrowthReport rep = growth_diagnostic(grid);
    CHECK(rep.has_exponent);
    CHECK(rep.ratio_max <= 5.0);
    CHECK(rep.fitted_exponent < 1.0 / 6.0);
    CHECK(rep.abs_zeta.size() == grid.size());

    const std::vector<double> empty;
    CHECK(code_of([&] { growth_diagnostic(empty); }) == ErrorCode::invalid_input);
    const std::vector<double> low{5.0, 20.0};
    CHECK(code_of([&] { growth_diagnostic(low); }) == ErrorCode::domain);
    const std::vector<double> unsorted{20.0, 10.0};
    CHECK(code_of([&] { growth_diagnostic(unsorted); }) == ErrorCode::invalid_input);
    const std::vector<double> degenerate{50.0, 50.0, 50.0};
    CHECK(code_of([&] { growth_diagnostic(degenerate); }) == ErrorCode::invalid_input);
}
