#include "besicovitch.hpp"

#include <cmath>

#include "spec_integrand.hpp"

namespace zetalab {
namespace {

void check_horizon(double t_max) {
    require(std::isfinite(t_max) && t_max >= 1.0, ErrorCode::domain,
            "averaging horizon must satisfy T >= 1");
}

} // namespace

EmpiricalMean inner_product(const FunctionSpec& f, const FunctionSpec& g, double t_max,
                            const QuadratureConfig& qcfg, const ZetaEvalConfig& zcfg) {
    check_horizon(t_max);
    const FunctionSpec specs[2] = {f, g};
    auto integrand = make_spec_integrand(
        specs,
        [](double, std::span<const std::complex<double>> v) { return v[0] * std::conj(v[1]); },
        qcfg, zcfg, t_max);
    const IntegralResult res = integrate(1.0, t_max, qcfg, *integrand);
    return {t_max, res.value / t_max, res.err_est / t_max};
}

FourierCoefficient fourier_coefficient(int k, double sigma, double lambda, double t_max,
                                       const QuadratureConfig& qcfg,
                                       const ZetaEvalConfig& zcfg) {
    check_horizon(t_max);
    require(std::isfinite(lambda), ErrorCode::invalid_input, "lambda must be finite");
    require(k >= 1 && k <= 6, ErrorCode::domain, "k must be in [1, 6]");
    require(sigma > 0.5 && sigma <= 2.5, ErrorCode::domain,
            "coefficient predictions need sigma > 1/2");

    const FunctionSpec f = FunctionSpec::zeta_power(k, sigma);
    auto integrand = make_spec_integrand(
        std::span<const FunctionSpec>(&f, 1),
        [lambda](double t, std::span<const std::complex<double>> v) {
            // f(t) conj(e^{i lambda t})
            return v[0] * std::conj(unit_phase(lambda, t));
        },
        qcfg, zcfg, t_max);
    const IntegralResult res = integrate(1.0, t_max, qcfg, *integrand, nullptr, 1.0);

    FourierCoefficient out;
    out.lambda = lambda;
    out.t_max = t_max;
    out.empirical = res.value / t_max;
    out.quad_err = res.err_est / t_max;
    out.predicted = {0.0, 0.0};
    if (lambda <= 1e-12) {
        const double guess = std::exp(-lambda);
        const double rounded = std::nearbyint(guess);
        if (rounded >= 1.0 && rounded <= 9.0e15) {
            const auto n = static_cast<std::uint64_t>(rounded);
            if (std::abs(lambda + std::log(rounded)) <= 1e-12) {
                const double d = static_cast<double>(divisor_count_single(k, n));
                out.predicted = {d * std::pow(rounded, -sigma), 0.0};
            }
        }
    }
    out.abs_error = std::abs(out.empirical - out.predicted);
    return out;
}

FunctionSpec bohr_partial_sum(int k, double sigma, std::uint64_t n_terms) {
    require(k >= 1 && k <= 6, ErrorCode::domain, "k must be in [1, 6]");
    require(n_terms >= 1 && n_terms <= 100000, ErrorCode::resource,
            "Bohr partial sums support 1 <= N <= 1e5 terms");
    std::vector<FunctionSpec::BohrTerm> terms;
    terms.reserve(n_terms);
    for (std::uint64_t n = 1; n <= n_terms; ++n) {
        const double dn = static_cast<double>(n);
        const double d = static_cast<double>(divisor_count_single(k, n));
        terms.push_back({-std::log(dn), {d * std::pow(dn, -sigma), 0.0}});
    }
    return FunctionSpec::bohr_polynomial(std::move(terms));
}

B2Distance b2_distance(const DivisorTable& table, int k, double sigma,
                       std::uint64_t n_terms, double t_max, const QuadratureConfig& qcfg,
                       const ZetaEvalConfig& zcfg) {
    check_horizon(t_max);
    require(table.k == k, ErrorCode::invalid_input,
            "divisor table order does not match k");
    require(n_terms >= 1 && n_terms <= table.limit, ErrorCode::domain,
            "truncation order must lie within the divisor table");

    const SeriesValue full = series_value(table, sigma, table.limit);
    const SeriesValue head = series_value(table, sigma, n_terms);

    const FunctionSpec diff = FunctionSpec::difference(
        FunctionSpec::zeta_power(k, sigma), bohr_partial_sum(k, sigma, n_terms));
    auto integrand = make_spec_integrand(
        std::span<const FunctionSpec>(&diff, 1),
        [](double, std::span<const std::complex<double>> v) {
            return std::complex<double>{std::norm(v[0]), 0.0};
        },
        qcfg, zcfg, t_max);
    const double tail = full.partial_sum - head.partial_sum;
    const IntegralResult res = integrate(1.0, t_max, qcfg, *integrand, nullptr, tail);

    B2Distance out;
    out.k = k;
    out.sigma = sigma;
    out.n_terms = n_terms;
    out.t_max = t_max;
    out.empirical = res.value.real() / t_max;
    out.analytic_tail = tail;
    out.tail_bound = full.tail_bound;
    out.quad_err = res.err_est / t_max;
    return out;
}

CauchyDistance cauchy_distance_empirical(int k, double sigma_a, double sigma_b,
                                         double t_max, const QuadratureConfig& qcfg,
                                         const ZetaEvalConfig& zcfg) {
    check_horizon(t_max);
    require(k >= 1 && k <= 6, ErrorCode::domain, "k must be in [1, 6]");
    if (sigma_a == sigma_b) return {0.0, 0.0};

    const FunctionSpec specs[2] = {FunctionSpec::zeta_power(k, sigma_a),
                                   FunctionSpec::zeta_power(k, sigma_b)};
    auto integrand = make_spec_integrand(
        specs,
        [](double, std::span<const std::complex<double>> v) {
            return std::complex<double>{std::norm(v[0] - v[1]), 0.0};
        },
        qcfg, zcfg, t_max);
    // magnitude guess from the closed form over a short prefix
    double scale = 0.0;
    for (std::uint64_t n = 1; n <= 128; ++n) {
        const double dn = static_cast<double>(n);
        const double d = static_cast<double>(divisor_count_single(k, n));
        const double gap = std::pow(dn, -sigma_a) - std::pow(dn, -sigma_b);
        scale += d * d * gap * gap;
    }
    if (scale <= 0.0) scale = 1e-12;
    const IntegralResult res = integrate(1.0, t_max, qcfg, *integrand, nullptr, scale);
    return {res.value.real() / t_max, res.err_est / t_max};
}

double parseval_sum(std::span<const FourierCoefficient> coeffs) {
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            require(std::abs(coeffs[i].lambda - coeffs[j].lambda) > 1e-12,
                    ErrorCode::invalid_input,
                    "Bessel sum requires distinct frequencies");
    double s = 0.0;
    for (const auto& c : coeffs) s += std::norm(c.empirical);
    return s;
}

OrthogonalityDefect orthogonality_defect(double lambda1, double lambda2, double t_max,
                                         const QuadratureConfig& qcfg) {
    check_horizon(t_max);
    require(std::isfinite(lambda1) && std::isfinite(lambda2) && lambda1 != lambda2,
            ErrorCode::invalid_input, "frequencies must be finite and distinct");

    const EmpiricalMean mean = inner_product(FunctionSpec::exponential(lambda1),
                                             FunctionSpec::exponential(lambda2), t_max, qcfg);
    const double delta = lambda1 - lambda2;
    // (1/T) integral_1^T e^{i delta t} dt = (e^{i delta T} - e^{i delta}) / (i delta T)
    const std::complex<double> num =
        unit_phase(delta, t_max) - unit_phase(delta, 1.0);
    const std::complex<double> closed = num / std::complex<double>(0.0, delta * t_max);

    OrthogonalityDefect out;
    out.empirical = mean.value;
    out.closed_form = closed;
    out.bound = 2.0 / (t_max * std::abs(delta));
    out.quad_err = mean.quad_err;
    return out;
}

} // namespace zetalab
