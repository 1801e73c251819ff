#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "errors.hpp"

namespace zetalab {

// Euler-Maclaurin evaluation of zeta(sigma + it) on the strip
// 0.4 <= sigma <= 2.5, tuned for |t| up to ~1e5:
//
//   zeta(s) = sum_{n<=N} n^{-s} + N^{1-s}/(s-1) - N^{-s}/2
//           + sum_{r=1}^{M} B_{2r}/(2r)! (s)_{2r-1} N^{-s-2r+1} + R_M
//
// with the cutoff N tied to |t| so the correction series stays asymptotic.
// The remainder is estimated by |first omitted term| * |s+2M+1|/(sigma+2M+1).
struct ZetaEvalConfig {
    double em_terms = 1.0;         // main-sum cutoff scale: N = ceil(em_terms*max(1,|t|)) + 20
    int bernoulli_order = 8;       // number of Bernoulli correction terms M, <= 12
    double target_abs_error = 1e-9;
};

void validate(const ZetaEvalConfig& cfg);

// Main-sum cutoff for the pinned Euler-Maclaurin scheme.
std::size_t em_cutoff(const ZetaEvalConfig& cfg, double abs_t);

// Boundary + correction terms for a main sum truncated at n_cut:
//   N^{1-s}/(s-1) - N^{-s}/2 + sum_r B_{2r}/(2r)! (s)_{2r-1} N^{-s-2r+1}
struct EmTail {
    std::complex<double> value;
    double err_est;                // remainder bound for the omitted terms
};
EmTail em_tail(std::complex<double> s, double n_cut, int order);

// e^{i a b} with one fma to recover the rounding of the product a*b; the
// phase arguments here grow to ~1e6 rad where that last ulp matters.
inline std::complex<double> unit_phase(double a, double b) {
    double p = a * b;
    double e = std::fma(a, b, -p);
    double c = std::cos(p);
    double s = std::sin(p);
    return {c - e * s, s + e * c};
}

// zeta(sigma + it) by Euler-Maclaurin. Negative t by reflection
// zeta(conj(s)) = conj(zeta(s)). Throws: domain (sigma outside [0.4, 2.5]),
// pole (|s-1| < 1e-6), accuracy (remainder estimate above target).
std::complex<double> zeta(double sigma, double t, const ZetaEvalConfig& cfg = {});

// Independent cross-check through the alternating series
//   eta(s) = sum (-1)^{n-1} n^{-s},  zeta(s) = eta(s) / (1 - 2^{1-s}),
// summed directly to ~8|s| terms and finished with an Euler-transformed
// tail. Shares no code path with the Euler-Maclaurin route beyond complex
// arithmetic. Only meant for |t| <= 2000.
std::complex<double> zeta_oracle(double sigma, double t);

// |zeta(sigma+it)|^{2k}, the moment integrand.
double abs_pow_2k(double sigma, double t, int k, const ZetaEvalConfig& cfg = {});

// Subconvexity-flavoured growth diagnostic on the critical line: ratios
// |zeta(1/2+it)| / t^{1/6} over a grid, plus a least-squares exponent fit
// of log|zeta| against log t.
struct GrowthReport {
    std::vector<double> t;
    std::vector<double> abs_zeta;
    std::vector<double> ratio;      // |zeta| * t^{-1/6}
    double ratio_max = 0.0;
    double fitted_exponent = 0.0;
    bool has_exponent = false;      // false when the grid has a single point
};
GrowthReport growth_diagnostic(std::span<const double> t_grid,
                               const ZetaEvalConfig& cfg = {});

} // namespace zetalab
