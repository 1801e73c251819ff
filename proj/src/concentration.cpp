#include "concentration.hpp"

#include <algorithm>
#include <cmath>

#include "spec_integrand.hpp"

namespace zetalab {
namespace {

struct LevelBlock {
    std::vector<double> den;
    std::vector<double> mass;
    std::vector<std::uint32_t> crossings;
    std::complex<double> num;
    double den_total = 0.0;
};

// Accumulates the level-set counters and the weighted numerator from the
// carrier values f(t). Thread-safe through per-block slots written by
// worker-local clones and merged in block order.
class LevelObserver final : public NodeObserver {
public:
    enum class NumeratorKind { none, same_f_indicator, external_weight };

    LevelObserver(std::span<const double> thresholds, std::vector<LevelBlock>* slots,
                  NumeratorKind kind, bool stripped, double indicator_threshold,
                  std::function<std::complex<double>(double)> weight)
        : thresholds_(thresholds.begin(), thresholds.end()), slots_(slots), kind_(kind),
          stripped_(stripped), indicator_threshold_(indicator_threshold),
          weight_(std::move(weight)) {
        den.assign(thresholds_.size(), 0.0);
        mass.assign(thresholds_.size(), 0.0);
        crossings.assign(thresholds_.size(), 0);
    }

    std::unique_ptr<NodeObserver> clone() const override {
        return std::make_unique<LevelObserver>(
            std::span<const double>(thresholds_), slots_, kind_, stripped_,
            indicator_threshold_, weight_);
    }

    void begin_block(std::size_t b) override {
        block_ = b;
        cur_ = LevelBlock{};
        cur_.den.assign(thresholds_.size(), 0.0);
        cur_.mass.assign(thresholds_.size(), 0.0);
        cur_.crossings.assign(thresholds_.size(), 0);
        prev_amp_ = -1.0; // no previous node yet
    }

    void node(double t, std::complex<double> v, double w) override {
        const double amp = std::abs(v);
        const double energy = amp * amp;
        cur_.den_total += w * energy;
        for (std::size_t i = 0; i < thresholds_.size(); ++i) {
            if (amp > thresholds_[i]) {
                cur_.den[i] += w;
                cur_.mass[i] += w * energy;
            }
            if (prev_amp_ >= 0.0 &&
                (prev_amp_ > thresholds_[i]) != (amp > thresholds_[i]))
                ++cur_.crossings[i];
        }
        switch (kind_) {
            case NumeratorKind::none: break;
            case NumeratorKind::same_f_indicator:
                if (amp > indicator_threshold_)
                    cur_.num += w * (stripped_ ? std::complex<double>{energy, 0.0} : v * v);
                break;
            case NumeratorKind::external_weight:
                cur_.num += w * (stripped_ ? std::complex<double>{energy, 0.0} : v * v) *
                            weight_(t);
                break;
        }
        prev_amp_ = amp;
    }

    void end_block() override { (*slots_)[block_] = std::move(cur_); }

    void merge(std::size_t b) override {
        const LevelBlock& s = (*slots_)[b];
        for (std::size_t i = 0; i < thresholds_.size(); ++i) {
            den[i] += s.den[i];
            mass[i] += s.mass[i];
            crossings[i] += s.crossings[i];
        }
        num += s.num;
        den_total += s.den_total;
        ++blocks_merged;
    }

    std::vector<double> den, mass;
    std::vector<std::uint64_t> crossings;
    std::complex<double> num;
    double den_total = 0.0;
    std::size_t blocks_merged = 0;

private:
    std::vector<double> thresholds_;
    std::vector<LevelBlock>* slots_;
    NumeratorKind kind_;
    bool stripped_;
    double indicator_threshold_;
    std::function<std::complex<double>(double)> weight_;
    std::size_t block_ = 0;
    LevelBlock cur_;
    double prev_amp_ = -1.0;
};

void check_horizon(double t_max) {
    require(std::isfinite(t_max) && t_max >= 1.0, ErrorCode::domain,
            "horizon must satisfy T >= 1");
}

// Integrates the carrier f over [1, T] with the level observer attached.
// The integral of f itself is only used to steer panel refinement.
LevelObserver run_carrier(const FunctionSpec& f, std::span<const double> thresholds,
                          double t_max, const QuadratureConfig& qcfg,
                          const ZetaEvalConfig& zcfg, LevelObserver::NumeratorKind kind,
                          bool stripped, double indicator_threshold,
                          std::function<std::complex<double>(double)> weight,
                          double* quad_err) {
    auto integrand = make_spec_integrand(
        std::span<const FunctionSpec>(&f, 1),
        [](double, std::span<const std::complex<double>> v) { return v[0]; }, qcfg, zcfg,
        t_max);
    std::vector<LevelBlock> slots(block_count(1.0, t_max, qcfg));
    LevelObserver obs(thresholds, &slots, kind, stripped, indicator_threshold,
                      std::move(weight));
    const IntegralResult res = integrate(1.0, t_max, qcfg, *integrand, &obs, 1.0);
    if (quad_err) *quad_err = res.err_est;
    return obs;
}

} // namespace

ConcentrationProfile concentration_profile(const FunctionSpec& f,
                                           std::span<const double> thresholds,
                                           double t_max, const QuadratureConfig& qcfg,
                                           const ZetaEvalConfig& zcfg) {
    check_horizon(t_max);
    require(!thresholds.empty(), ErrorCode::invalid_input,
            "at least one threshold required");
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        require(std::isfinite(thresholds[i]) && thresholds[i] >= 0.0,
                ErrorCode::invalid_input, "thresholds must be finite and >= 0");
        if (i > 0)
            require(thresholds[i] > thresholds[i - 1], ErrorCode::invalid_input,
                    "thresholds must be strictly ascending");
    }

    double quad_err = 0.0;
    LevelObserver obs =
        run_carrier(f, thresholds, t_max, qcfg, zcfg, LevelObserver::NumeratorKind::none,
                    false, 0.0, {}, &quad_err);

    ConcentrationProfile out;
    out.t_max = t_max;
    out.thresholds.assign(thresholds.begin(), thresholds.end());
    out.mean_square = obs.den_total / t_max;
    out.quad_err = quad_err;
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        out.densities.push_back(obs.den[i] / t_max);
        out.mass_fractions.push_back(obs.den_total > 0.0 ? obs.mass[i] / obs.den_total
                                                         : 0.0);
        // one panel width per seen crossing, plus one per block for the
        // crossings a block boundary can hide
        out.density_errs.push_back(
            qcfg.panel_width *
            static_cast<double>(obs.crossings[i] + obs.blocks_merged) / t_max);
    }
    return out;
}

WeightedFunctional weighted_functional(const FunctionSpec& f, const FunctionSpec& g,
                                       double t_max, bool phase_stripped,
                                       const QuadratureConfig& qcfg,
                                       const ZetaEvalConfig& zcfg) {
    check_horizon(t_max);
    const auto sup = g.sup_bound();
    require(sup.has_value(), ErrorCode::domain,
            "weight g must admit a uniform bound from its shape");

    WeightedFunctional out;
    out.ess_sup_g = *sup;
    out.phase_stripped = phase_stripped;

    const bool same_indicator = g.kind() == FunctionSpec::Kind::indicator &&
                                g.indicator_base().same_node(f);
    double quad_err = 0.0;
    LevelObserver obs = [&] {
        const double dummy_threshold[1] = {0.0};
        if (same_indicator) {
            return run_carrier(f, dummy_threshold, t_max, qcfg, zcfg,
                               LevelObserver::NumeratorKind::same_f_indicator,
                               phase_stripped, g.indicator_threshold(), {}, &quad_err);
        }
        require(!g.contains_zeta() || g.kind() == FunctionSpec::Kind::indicator,
                ErrorCode::unsupported,
                "zeta-bearing weights are only supported as indicators");
        auto weight = [g, zcfg](double t) { return g.eval(t, zcfg); };
        return run_carrier(f, dummy_threshold, t_max, qcfg, zcfg,
                           LevelObserver::NumeratorKind::external_weight, phase_stripped,
                           0.0, weight, &quad_err);
    }();

    require(obs.den_total > 0.0, ErrorCode::domain,
            "weighted functional needs integral |f|^2 > 0");
    out.ratio = obs.num / obs.den_total;
    out.mean_square = obs.den_total / t_max;
    out.quad_err = quad_err;
    return out;
}

ApproxGap bounded_approx_gap(const FunctionSpec& f, const FunctionSpec& g, double t_max,
                             const QuadratureConfig& qcfg, const ZetaEvalConfig& zcfg) {
    check_horizon(t_max);
    const FunctionSpec diff = FunctionSpec::difference(f, g);
    auto integrand = make_spec_integrand(
        std::span<const FunctionSpec>(&diff, 1),
        [](double, std::span<const std::complex<double>> v) {
            return std::complex<double>{std::norm(v[0]), 0.0};
        },
        qcfg, zcfg, t_max);
    const IntegralResult res = integrate(1.0, t_max, qcfg, *integrand);
    return {res.value.real() / t_max, res.err_est / t_max};
}

std::vector<SpikeDemoRow> spike_null_set_demo(const FunctionSpec& spike_train,
                                              std::complex<double> baseline,
                                              std::span<const double> t_grid) {
    require(spike_train.kind() == FunctionSpec::Kind::spike_train,
            ErrorCode::invalid_input, "demo needs a spike train");
    require(!t_grid.empty(), ErrorCode::invalid_input, "T grid must be non-empty");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        require(std::isfinite(t_grid[i]) && t_grid[i] >= 2.0 && t_grid[i] <= 1e8,
                ErrorCode::domain, "demo horizons must lie in [2, 1e8]");
        if (i > 0)
            require(t_grid[i] > t_grid[i - 1], ErrorCode::invalid_input,
                    "T grid must be strictly ascending");
    }
    const auto& sp = spike_train.spike();
    const double base_energy = std::norm(baseline);

    std::vector<SpikeDemoRow> rows;
    rows.reserve(t_grid.size());
    for (double t_max : t_grid) {
        double support = 0.0;
        double spike_mass = 0.0;
        const auto hi = static_cast<std::uint64_t>(std::ceil(t_max)) + 1;
        for (std::uint64_t n = 2; n <= hi; ++n) {
            const double dn = static_cast<double>(n);
            const double half = 0.5 * sp.width(n);
            const double overlap =
                std::max(0.0, std::min(t_max, dn + half) - std::max(1.0, dn - half));
            if (overlap <= 0.0) continue;
            support += overlap;
            spike_mass += std::norm(baseline + sp.height(n)) * overlap;
        }
        const double total = base_energy * (t_max - 1.0 - support) + spike_mass;
        SpikeDemoRow row;
        row.t_max = t_max;
        row.support_density = support / t_max;
        row.mass_fraction = total > 0.0 ? spike_mass / total : 0.0;
        rows.push_back(row);
    }
    return rows;
}

} // namespace zetalab
