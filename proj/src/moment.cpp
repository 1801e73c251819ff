#include "moment.hpp"

#include <cmath>
#include <limits>

#include "spec_integrand.hpp"

namespace zetalab {
namespace {

struct MomentPiece {
    double integral = 0.0;
    double err = 0.0;
};

MomentPiece moment_piece(int k, double sigma, double t_lo, double t_hi, double scale,
                         const QuadratureConfig& qcfg, const ZetaEvalConfig& zcfg) {
    const FunctionSpec f = FunctionSpec::zeta_power(k, sigma);
    auto integrand = make_spec_integrand(
        std::span<const FunctionSpec>(&f, 1),
        [](double, std::span<const std::complex<double>> v) {
            return std::complex<double>{std::norm(v[0]), 0.0};
        },
        qcfg, zcfg, t_hi);
    const IntegralResult res = integrate(t_lo, t_hi, qcfg, *integrand, nullptr, scale);
    return {res.value.real(), res.err_est};
}

MomentRecord make_record(const SeriesValue& series, int k, double sigma, double t_max,
                         double integral, double err) {
    MomentRecord rec;
    rec.k = k;
    rec.sigma = sigma;
    rec.t_max = t_max;
    rec.integral = integral;
    rec.average = integral / t_max;
    rec.target = series.partial_sum;
    rec.tail_bound = series.tail_bound;
    rec.rel_gap = std::abs(rec.average - rec.target) / rec.target;
    rec.quad_err = err / t_max;
    return rec;
}

void check_moment_args(const DivisorTable& table, int k, double sigma, double t_max) {
    require(k >= 1 && k <= 6, ErrorCode::domain, "moment order k must be in [1, 6]");
    require(table.k == k, ErrorCode::invalid_input,
            "divisor table order does not match the requested moment");
    require(std::isfinite(sigma) && sigma >= 0.5 && sigma <= 2.5, ErrorCode::domain,
            "moment requires sigma in [0.5, 2.5]");
    require(std::isfinite(t_max) && t_max >= 1.0, ErrorCode::domain,
            "moment horizon must satisfy T >= 1");
}

// Below sigma = 0.55 the comparison series diverges too slowly to bound, so
// diagnostic sweeps get an infinite target instead of a domain error.
SeriesValue series_or_divergent(const DivisorTable& table, double sigma) {
    if (sigma > 0.55) return series_value(table, sigma, table.limit);
    SeriesValue s;
    s.k = table.k;
    s.sigma = sigma;
    s.cutoff = 0;
    s.epsilon = 0.0;
    s.partial_sum = std::numeric_limits<double>::infinity();
    s.tail_bound = std::numeric_limits<double>::infinity();
    return s;
}

} // namespace

MomentRecord moment(const DivisorTable& table, int k, double sigma, double t_max,
                    const QuadratureConfig& qcfg, const ZetaEvalConfig& zcfg) {
    check_moment_args(table, k, sigma, t_max);
    const SeriesValue series = series_or_divergent(table, sigma);
    const double scale = sigma > 0.55 ? series.partial_sum : 1.0;
    const MomentPiece piece = moment_piece(k, sigma, 1.0, t_max, scale, qcfg, zcfg);
    return make_record(series, k, sigma, t_max, piece.integral, piece.err);
}

std::vector<MomentRecord> convergence_sweep(const DivisorTable& table, int k, double sigma,
                                            std::span<const double> t_list,
                                            const QuadratureConfig& qcfg,
                                            const ZetaEvalConfig& zcfg) {
    require(!t_list.empty(), ErrorCode::invalid_input, "horizon list must be non-empty");
    for (std::size_t i = 0; i < t_list.size(); ++i) {
        check_moment_args(table, k, sigma, t_list[i]);
        if (i > 0)
            require(t_list[i] > t_list[i - 1], ErrorCode::invalid_input,
                    "horizon list must be strictly ascending");
    }

    const SeriesValue series = series_or_divergent(table, sigma);
    const double scale = sigma > 0.55 ? series.partial_sum : 1.0;
    std::vector<MomentRecord> out;
    out.reserve(t_list.size());
    double integral = 0.0;
    double err = 0.0;
    double prev = 1.0;
    for (double t : t_list) {
        const MomentPiece piece = moment_piece(k, sigma, prev, t, scale, qcfg, zcfg);
        integral += piece.integral;
        err += piece.err;
        prev = t;
        out.push_back(make_record(series, k, sigma, t, integral, err));
    }
    return out;
}

ConvexityReport convexity_probe(const DivisorTable& table, int k,
                                std::span<const double> sigma_grid, double t_max,
                                const QuadratureConfig& qcfg, const ZetaEvalConfig& zcfg) {
    require(sigma_grid.size() >= 3, ErrorCode::invalid_input,
            "convexity probe needs at least three sigma values");
    const double step = sigma_grid[1] - sigma_grid[0];
    require(step >= 0.0, ErrorCode::invalid_input, "sigma grid must be ascending");
    for (std::size_t i = 1; i + 1 < sigma_grid.size(); ++i)
        require(std::abs((sigma_grid[i + 1] - sigma_grid[i]) - step) <= 1e-9,
                ErrorCode::invalid_input, "sigma grid must be equally spaced");

    ConvexityReport rep;
    for (double sigma : sigma_grid) {
        const MomentRecord rec = moment(table, k, sigma, t_max, qcfg, zcfg);
        rep.points.push_back({sigma, rec.average, rec.quad_err});
    }
    for (std::size_t i = 1; i + 1 < rep.points.size(); ++i) {
        const auto& l = rep.points[i - 1];
        const auto& m = rep.points[i];
        const auto& r = rep.points[i + 1];
        const double mean = 0.5 * (l.average + r.average);
        const double slack =
            0.5 * (l.quad_err + r.quad_err) + m.quad_err + 1e-12 * std::abs(mean);
        const bool ok = m.average <= mean + slack;
        rep.midpoint_ok.push_back(ok);
        rep.all_ok = rep.all_ok && ok;
    }
    return rep;
}

} // namespace zetalab
