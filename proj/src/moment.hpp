#pragma once

#include <span>
#include <vector>

#include "divisor.hpp"
#include "function_spec.hpp"
#include "quadrature.hpp"

namespace zetalab {

// 2k-th moment of zeta on the line sigma:
//
//   M_k(sigma, T) = integral_1^T |zeta(sigma + it)|^{2k} dt
//
// compared against its long-run mean value sum_n d_k(n)^2 n^{-2 sigma},
// approximated through the divisor table partial sum plus tail majorant.
struct MomentRecord {
    int k = 0;
    double sigma = 0.0;
    double t_max = 0.0;
    double integral = 0.0;
    double average = 0.0;    // integral / T
    double target = 0.0;     // series partial sum at the table cutoff
    double tail_bound = 0.0; // majorant for the series tail past the cutoff
    double rel_gap = 0.0;    // |average - target| / target
    double quad_err = 0.0;   // quadrature error estimate on the average
};

// Requires table.k == k, sigma in [0.5, 2.5], T >= 1. Below sigma = 0.55 the
// comparison series has no usable majorant, so target and tail_bound come
// back +inf and rel_gap NaN; the integral itself is still computed.
MomentRecord moment(const DivisorTable& table, int k, double sigma, double t_max,
                    const QuadratureConfig& qcfg = {}, const ZetaEvalConfig& zcfg = {});

// Moments at an ascending list of horizons, reusing each previous horizon's
// integral for the next segment.
std::vector<MomentRecord> convergence_sweep(const DivisorTable& table, int k, double sigma,
                                            std::span<const double> t_list,
                                            const QuadratureConfig& qcfg = {},
                                            const ZetaEvalConfig& zcfg = {});

// Midpoint convexity of sigma -> M_k(sigma, T) over an equally spaced grid.
// Each interior point is tested against the mean of its neighbours with an
// allowance for the three quadrature error estimates.
struct ConvexityPoint {
    double sigma = 0.0;
    double average = 0.0;
    double quad_err = 0.0;
};
struct ConvexityReport {
    std::vector<ConvexityPoint> points;
    std::vector<bool> midpoint_ok; // size points - 2
    bool all_ok = true;
};
ConvexityReport convexity_probe(const DivisorTable& table, int k,
                                std::span<const double> sigma_grid, double t_max,
                                const QuadratureConfig& qcfg = {},
                                const ZetaEvalConfig& zcfg = {});

} // namespace zetalab
