#include "tauberian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spec_integrand.hpp"

namespace zetalab {
namespace {

// Panels whose exponential weight has fallen below this skip the two-half
// check; the 8-point rule alone is far past the needed accuracy there and
// the skipped check is charged to the error estimate.
constexpr double kCoarseWeight = 0.02;

// Tracks max |zeta|^{2k} / (1+t)^{k/3} over the accepted nodes. Observed
// values carry the e^{-xt} weight, which is divided back out.
class EnvelopeObserver final : public NodeObserver {
public:
    EnvelopeObserver(double x, double expo, std::vector<double>* slots)
        : x_(x), expo_(expo), slots_(slots) {}

    std::unique_ptr<NodeObserver> clone() const override {
        return std::make_unique<EnvelopeObserver>(x_, expo_, slots_);
    }
    void begin_block(std::size_t b) override {
        block_ = b;
        cur_ = 0.0;
    }
    void node(double t, std::complex<double> v, double) override {
        const double raw = std::abs(v) * std::exp(x_ * t);
        cur_ = std::max(cur_, raw * std::pow(1.0 + t, -expo_));
    }
    void end_block() override { (*slots_)[block_] = cur_; }
    void merge(std::size_t b) override { env = std::max(env, (*slots_)[b]); }

    double env = 0.0;

private:
    double x_;
    double expo_;
    std::vector<double>* slots_;
    std::size_t block_ = 0;
    double cur_ = 0.0;
};

void check_probe_args(int k, double x, double t_cut) {
    require(k >= 1 && k <= 6, ErrorCode::domain, "k must be in [1, 6]");
    require(std::isfinite(x) && x > 0.0, ErrorCode::domain,
            "Laplace abscissa x must be positive");
    require(std::isfinite(t_cut) && t_cut >= 2.0, ErrorCode::domain,
            "t_cut must be >= 2");
}

} // namespace

double default_t_cut(double x) {
    require(std::isfinite(x) && x > 0.0, ErrorCode::domain, "x must be positive");
    return std::clamp(25.0 / x, 50.0, 1e6);
}

LaplaceProbe laplace_probe(int k, double sigma, double x, double y, double t_cut,
                           const QuadratureConfig& qcfg, const ZetaEvalConfig& zcfg) {
    check_probe_args(k, x, t_cut);
    require(std::isfinite(y), ErrorCode::domain, "y must be finite");

    const FunctionSpec f = FunctionSpec::zeta_power(k, sigma);
    auto integrand = make_spec_integrand(
        std::span<const FunctionSpec>(&f, 1),
        [x, y](double t, std::span<const std::complex<double>> v) {
            const std::complex<double> w =
                std::exp(-x * t) * std::conj(unit_phase(y, t)); // e^{-(x+iy) t}
            return std::norm(v[0]) * w;
        },
        qcfg, zcfg, t_cut,
        [x, tol = kCoarseWeight](double t0) { return std::exp(-x * t0) < tol; });

    std::vector<double> slots(block_count(1.0, t_cut, qcfg), 0.0);
    const double expo = static_cast<double>(k) / 3.0;
    EnvelopeObserver obs(x, expo, &slots);
    const double scale = series_prefix(k, std::min(sigma, 2.5), 512);
    const IntegralResult res = integrate(1.0, t_cut, qcfg, *integrand, &obs, scale);

    LaplaceProbe out;
    out.k = k;
    out.sigma = sigma;
    out.x = x;
    out.y = y;
    out.t_cut = t_cut;
    out.value = res.value;
    out.envelope = obs.env;
    out.quad_err = res.err_est;
    const double margin = 1.0 - expo / (x * (1.0 + t_cut));
    if (margin > 0.1) {
        out.truncation_bound = obs.env * std::pow(1.0 + t_cut, expo) *
                               std::exp(-x * t_cut) / (x * margin);
    } else {
        out.truncation_bound = std::numeric_limits<double>::infinity();
    }
    return out;
}

std::vector<AbelRow> abel_probe(const DivisorTable& table, int k, double sigma,
                                std::span<const double> xs, const QuadratureConfig& qcfg,
                                const ZetaEvalConfig& zcfg, double t_cut_override) {
    require(!xs.empty(), ErrorCode::invalid_input, "x list must be non-empty");
    for (std::size_t i = 0; i < xs.size(); ++i) {
        require(std::isfinite(xs[i]) && xs[i] > 0.0, ErrorCode::domain,
                "Abel probe needs x > 0");
        if (i > 0)
            require(xs[i] < xs[i - 1], ErrorCode::invalid_input,
                    "x list must descend towards 0");
    }
    require(table.k == k, ErrorCode::invalid_input,
            "divisor table order does not match k");
    const SeriesValue series = series_value(table, sigma, table.limit);

    std::vector<AbelRow> rows;
    rows.reserve(xs.size());
    for (double x : xs) {
        const double t_cut = t_cut_override > 0.0 ? t_cut_override : default_t_cut(x);
        const LaplaceProbe probe = laplace_probe(k, sigma, x, 0.0, t_cut, qcfg, zcfg);
        AbelRow row;
        row.x = x;
        row.t_cut = t_cut;
        row.scaled = x * probe.value.real();
        row.target = series.partial_sum;
        row.rel_gap = std::abs(row.scaled - row.target) / row.target;
        row.truncation_bound = x * probe.truncation_bound;
        rows.push_back(row);
    }
    return rows;
}

AbelCesaroComparison abel_cesaro_compare(const DivisorTable& table, int k, double sigma,
                                         double t_max, const QuadratureConfig& qcfg,
                                         const ZetaEvalConfig& zcfg) {
    require(std::isfinite(t_max) && t_max >= 10.0, ErrorCode::domain,
            "comparison horizon must satisfy T >= 10");
    AbelCesaroComparison cmp;
    cmp.cesaro = moment(table, k, sigma, t_max, qcfg, zcfg);
    cmp.x = 1.0 / t_max;
    cmp.abel = laplace_probe(k, sigma, cmp.x, 0.0, 6.0 * t_max, qcfg, zcfg);
    cmp.cesaro_mean = cmp.cesaro.average;
    cmp.abel_scaled = cmp.x * cmp.abel.value.real();
    cmp.discrepancy = std::abs(cmp.cesaro_mean - cmp.abel_scaled) / cmp.cesaro_mean;
    return cmp;
}

ContinuityProbe line_continuity_probe(int k, std::span<const double> sigmas,
                                      double sigma_limit, double x,
                                      const QuadratureConfig& qcfg,
                                      const ZetaEvalConfig& zcfg) {
    require(!sigmas.empty(), ErrorCode::invalid_input, "sigma list must be non-empty");
    for (std::size_t i = 0; i < sigmas.size(); ++i) {
        require(sigmas[i] > sigma_limit, ErrorCode::invalid_input,
                "sigma list must stay above the limit line");
        if (i > 0)
            require(sigmas[i] < sigmas[i - 1], ErrorCode::invalid_input,
                    "sigma list must descend towards the limit");
    }
    const double t_cut = default_t_cut(x);
    ContinuityProbe probe;
    probe.at_limit = laplace_probe(k, sigma_limit, x, 0.0, t_cut, qcfg, zcfg);
    for (double s : sigmas) {
        const LaplaceProbe row = laplace_probe(k, s, x, 0.0, t_cut, qcfg, zcfg);
        probe.along.push_back({s, row.value, std::abs(row.value - probe.at_limit.value)});
    }
    return probe;
}

} // namespace zetalab
