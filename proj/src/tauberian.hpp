#pragma once

#include <complex>
#include <span>
#include <vector>

#include "divisor.hpp"
#include "moment.hpp"
#include "quadrature.hpp"

namespace zetalab {

// Truncated Laplace transform of the moment density,
//
//   L_{sigma,k}(z) = integral_1^{t_cut} |zeta(sigma + it)|^{2k} e^{-z t} dt,
//   z = x + iy, x > 0,
//
// with a truncation majorant built from the empirically observed envelope
// E = max_{t <= t_cut} |zeta|^{2k} / (1+t)^{k/3}:
//
//   tail <= E (1+t_cut)^{k/3} e^{-x t_cut} / (x (1 - k / (3 x (1+t_cut)))).
//
// As x tends to 0+, x L_{sigma,k}(x) approaches the same mean value the
// Cesaro averages M_k(sigma, T)/T converge to.
struct LaplaceProbe {
    int k = 0;
    double sigma = 0.0;
    double x = 0.0;
    double y = 0.0;
    double t_cut = 0.0;
    std::complex<double> value;
    double truncation_bound = 0.0;
    double envelope = 0.0;
    double quad_err = 0.0;
};

LaplaceProbe laplace_probe(int k, double sigma, double x, double y, double t_cut,
                           const QuadratureConfig& qcfg = {},
                           const ZetaEvalConfig& zcfg = {});

// t_cut making e^{-x t_cut} ~ 1e-11, clamped to [50, 1e6].
double default_t_cut(double x);

// x L(x) against the divisor series target along a descending list of x.
struct AbelRow {
    double x = 0.0;
    double t_cut = 0.0;
    double scaled = 0.0;       // x * Re L(x)
    double target = 0.0;
    double rel_gap = 0.0;
    double truncation_bound = 0.0;
};
std::vector<AbelRow> abel_probe(const DivisorTable& table, int k, double sigma,
                                std::span<const double> xs,
                                const QuadratureConfig& qcfg = {},
                                const ZetaEvalConfig& zcfg = {},
                                double t_cut_override = 0.0);

// Abel (x = 1/T) against Cesaro (horizon T) smoothing of the same density.
// The Laplace cutoff is 6/x: the omitted tail is ~e^{-6} relative, two
// orders below the discrepancies this probe studies, at a quarter of the
// cost of driving e^{-x t_cut} to round-off.
struct AbelCesaroComparison {
    MomentRecord cesaro;
    LaplaceProbe abel;
    double x = 0.0;
    double cesaro_mean = 0.0;
    double abel_scaled = 0.0;
    double discrepancy = 0.0;    // |cesaro - abel| / cesaro
};
AbelCesaroComparison abel_cesaro_compare(const DivisorTable& table, int k, double sigma,
                                         double t_max, const QuadratureConfig& qcfg = {},
                                         const ZetaEvalConfig& zcfg = {});

// L_{sigma_j,k}(x) along sigma_j descending to sigma_limit, with the gaps
// |L_{sigma_j} - L_{sigma_limit}|.
struct ContinuityRow {
    double sigma = 0.0;
    std::complex<double> value;
    double gap = 0.0;
};
struct ContinuityProbe {
    std::vector<ContinuityRow> along;
    LaplaceProbe at_limit;
};
ContinuityProbe line_continuity_probe(int k, std::span<const double> sigmas,
                                      double sigma_limit, double x,
                                      const QuadratureConfig& qcfg = {},
                                      const ZetaEvalConfig& zcfg = {});

} // namespace zetalab
