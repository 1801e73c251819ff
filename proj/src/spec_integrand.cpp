#include "spec_integrand.hpp"

#include <algorithm>
#include <array>

namespace zetalab {
namespace {

using Combine =
    std::function<std::complex<double>(double, std::span<const std::complex<double>>)>;

constexpr std::size_t kMaxSpecs = 4;

} // namespace

std::unique_ptr<PanelIntegrand> make_spec_integrand(
    std::span<const FunctionSpec> specs, Combine combine, const QuadratureConfig& qcfg,
    const ZetaEvalConfig& zcfg, double t_max, std::function<bool(double)> coarse) {
    require(!specs.empty() && specs.size() <= kMaxSpecs, ErrorCode::invalid_input,
            "between one and four specs per integrand");

    std::vector<double> sigmas;
    std::vector<CompiledSpec> compiled;
    bool spikes = false;
    for (const auto& spec : specs) {
        compiled.push_back(CompiledSpec::compile(spec, sigmas));
        spikes = spikes || spec.contains_spike();
    }
    const std::size_t n_specs = compiled.size();
    require(sigmas.size() <= kMaxSpecs, ErrorCode::unsupported,
            "at most four distinct zeta lines per integrand");

    if (!spikes && !sigmas.empty() && sigmas.size() <= 2) {
        auto plan = SweepPlan::build(qcfg, zcfg, t_max);
        auto map = [compiled, combine, n_specs](
                       double t, std::span<const std::complex<double>> z) {
            std::array<std::complex<double>, kMaxSpecs> vals;
            for (std::size_t i = 0; i < n_specs; ++i) vals[i] = compiled[i].fn(t, z);
            return combine(t, std::span<const std::complex<double>>(vals.data(), n_specs));
        };
        return std::make_unique<SweepMapIntegrand>(std::move(plan), sigmas, std::move(map),
                                                   std::move(coarse));
    }

    // pointwise route: zeta lines (if any) evaluated per point
    std::vector<FunctionSpec> owned(specs.begin(), specs.end());
    auto point = [compiled, combine, sigmas, zcfg, n_specs](double t) {
        std::array<std::complex<double>, kMaxSpecs> z;
        for (std::size_t l = 0; l < sigmas.size(); ++l) z[l] = zeta(sigmas[l], t, zcfg);
        std::span<const std::complex<double>> zs(z.data(), sigmas.size());
        std::array<std::complex<double>, kMaxSpecs> vals;
        for (std::size_t i = 0; i < n_specs; ++i) vals[i] = compiled[i].fn(t, zs);
        return combine(t, std::span<const std::complex<double>>(vals.data(), n_specs));
    };
    auto breaks = [owned](double t0, double t1, std::vector<double>& out) {
        for (const auto& spec : owned) spec.append_breakpoints(t0, t1, out);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
    };
    return std::make_unique<PointwiseIntegrand>(std::move(point), std::move(breaks));
}

} // namespace zetalab
