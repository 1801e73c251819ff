#pragma once

#include <complex>
#include <cstdint>
#include <span>

#include "divisor.hpp"
#include "function_spec.hpp"
#include "quadrature.hpp"

namespace zetalab {

// Finite-horizon Besicovitch inner products
//
//   <f, g>_T = (1/T) integral_1^T f(t) conj(g(t)) dt
//
// against the Dirichlet-series predictions for zeta^k: the coefficient at
// frequency lambda = -log n is d_k(n) / n^sigma and zero off the
// logarithmic frequency set.
struct EmpiricalMean {
    double t_max = 0.0;
    std::complex<double> value;
    double quad_err = 0.0;
};
EmpiricalMean inner_product(const FunctionSpec& f, const FunctionSpec& g, double t_max,
                            const QuadratureConfig& qcfg = {},
                            const ZetaEvalConfig& zcfg = {});

struct FourierCoefficient {
    double lambda = 0.0;
    double t_max = 0.0;
    std::complex<double> empirical;
    std::complex<double> predicted;
    double abs_error = 0.0;
    double quad_err = 0.0;
};
// <zeta^k, e^{i lambda t}>_T with the predicted value matched to within
// 1e-12 of the frequency grid {-log n}.
FourierCoefficient fourier_coefficient(int k, double sigma, double lambda, double t_max,
                                       const QuadratureConfig& qcfg = {},
                                       const ZetaEvalConfig& zcfg = {});

// Bohr development of zeta^k truncated at n_terms:
// sum_{n<=N} d_k(n) n^{-sigma} e^{-i t log n}.
FunctionSpec bohr_partial_sum(int k, double sigma, std::uint64_t n_terms);

// Squared B^2 distance between zeta^k and its truncated development,
// empirically over [1, T] and analytically as the series tail
// sum_{n>N} d_k(n)^2 n^{-2 sigma} (partial to the table limit, plus bound).
struct B2Distance {
    int k = 0;
    double sigma = 0.0;
    std::uint64_t n_terms = 0;
    double t_max = 0.0;
    double empirical = 0.0;
    double analytic_tail = 0.0;
    double tail_bound = 0.0;
    double quad_err = 0.0;
};
B2Distance b2_distance(const DivisorTable& table, int k, double sigma,
                       std::uint64_t n_terms, double t_max,
                       const QuadratureConfig& qcfg = {},
                       const ZetaEvalConfig& zcfg = {});

// Empirical squared distance between zeta^k on two lines,
// (1/T) integral |zeta(sa+it)^k - zeta(sb+it)^k|^2 dt; its closed-form
// counterpart is cauchy_distance_closed_form. Identical lines short-circuit
// to exactly zero.
struct CauchyDistance {
    double value = 0.0;
    double quad_err = 0.0;
};
CauchyDistance cauchy_distance_empirical(int k, double sigma_a, double sigma_b,
                                         double t_max, const QuadratureConfig& qcfg = {},
                                         const ZetaEvalConfig& zcfg = {});

// Bessel partial sum over coefficients at distinct frequencies.
double parseval_sum(std::span<const FourierCoefficient> coeffs);

// Finite-horizon defect of two pure frequencies: the empirical mean of
// e^{i(l1-l2)t}, its closed form, and the bound 2 / (T |l1 - l2|).
struct OrthogonalityDefect {
    std::complex<double> empirical;
    std::complex<double> closed_form;
    double bound = 0.0;
    double quad_err = 0.0;
};
OrthogonalityDefect orthogonality_defect(double lambda1, double lambda2, double t_max,
                                         const QuadratureConfig& qcfg = {});

} // namespace zetalab
