#pragma once

#include <complex>
#include <span>
#include <vector>

#include "function_spec.hpp"
#include "quadrature.hpp"

namespace zetalab {

// Level-set structure of |f| over [1, T], read off the accepted quadrature
// nodes of a single pass: for each threshold C,
//
//   density(C)       ~ meas{t in [1,T] : |f(t)| > C} / T
//   mass_fraction(C) ~ integral_{|f|>C} |f|^2 / integral |f|^2
//
// Node weights are exact on panels split at known discontinuities (spike
// edges), so spike-train profiles agree with their closed forms to
// round-off; for smooth f the density carries an uncertainty of roughly one
// panel width per level crossing, reported per threshold.
struct ConcentrationProfile {
    double t_max = 0.0;
    std::vector<double> thresholds;
    std::vector<double> densities;
    std::vector<double> mass_fractions;
    std::vector<double> density_errs;
    double mean_square = 0.0;  // (1/T) integral |f|^2
    double quad_err = 0.0;
};
ConcentrationProfile concentration_profile(const FunctionSpec& f,
                                           std::span<const double> thresholds,
                                           double t_max,
                                           const QuadratureConfig& qcfg = {},
                                           const ZetaEvalConfig& zcfg = {});

// Ratio functionals with a bounded weight g:
//
//   ratio = integral f^2 g dt / integral |f|^2 dt        (phase carried)
//   ratio = integral |f|^2 g dt / integral |f|^2 dt      (phase_stripped)
//
// g must admit a uniform bound from its shape (constant, Bohr polynomial,
// indicator, or differences of those). When g is an indicator whose base is
// literally the same tree as f, the weight is applied node-by-node from the
// carrier values, which makes the phase-stripped ratio coincide exactly
// with the profile mass fraction at the same threshold.
struct WeightedFunctional {
    std::complex<double> ratio;
    double ess_sup_g = 0.0;
    double mean_square = 0.0;  // denominator / T
    bool phase_stripped = false;
    double quad_err = 0.0;
};
WeightedFunctional weighted_functional(const FunctionSpec& f, const FunctionSpec& g,
                                       double t_max, bool phase_stripped,
                                       const QuadratureConfig& qcfg = {},
                                       const ZetaEvalConfig& zcfg = {});

// Mean squared gap (1/T) integral_1^T |f - g|^2 dt.
struct ApproxGap {
    double mean_square_gap = 0.0;
    double quad_err = 0.0;
};
ApproxGap bounded_approx_gap(const FunctionSpec& f, const FunctionSpec& g, double t_max,
                             const QuadratureConfig& qcfg = {},
                             const ZetaEvalConfig& zcfg = {});

// Closed forms for f = baseline + spike_train over [1, T]: the support of
// the spikes inside the window, its density, and the fraction of the energy
// integral |f|^2 it carries. Spikes overlapping the window edges count
// fractionally, so these match the quadrature route to round-off.
struct SpikeDemoRow {
    double t_max = 0.0;
    double support_density = 0.0;
    double mass_fraction = 0.0;
};
std::vector<SpikeDemoRow> spike_null_set_demo(const FunctionSpec& spike_train,
                                              std::complex<double> baseline,
                                              std::span<const double> t_grid);

} // namespace zetalab
