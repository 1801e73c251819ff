#pragma once

#include <functional>
#include <memory>

#include "function_spec.hpp"
#include "quadrature.hpp"
#include "zeta_sweep.hpp"

namespace zetalab {

// Builds the panel integrand computing combine(t, [f_0(t), ..., f_m(t)])
// for up to four specs. Zeta-bearing trees over at most two sigma lines and
// without spikes take the swept evaluator; anything else runs pointwise,
// with spike edges reported as panel breakpoints.
std::unique_ptr<PanelIntegrand> make_spec_integrand(
    std::span<const FunctionSpec> specs,
    std::function<std::complex<double>(double, std::span<const std::complex<double>>)> combine,
    const QuadratureConfig& qcfg, const ZetaEvalConfig& zcfg, double t_max,
    std::function<bool(double)> coarse = {});

} // namespace zetalab
