#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "quadrature.hpp"
#include "zeta_eval.hpp"

namespace zetalab {

// Swept Euler-Maclaurin evaluation of zeta(sigma + it) at every quadrature
// node of a panel run.
//
// The main sum sum_{n<=N} n^{-sigma} e^{-it log n} is advanced panel by
// panel: one anchor phasor per n carries e^{-it0 log n} for the current
// panel start, node values are anchor * rot where the rotation tables
// e^{-i delta_j log n} for the fixed node offsets delta_j are shared by
// every panel of equal width. Anchors advance across a panel by one complex
// multiply with e^{-i w log n} and are re-seeded exactly (sin/cos) at every
// 64-panel block boundary, so phase drift stays at a few ulps and any block
// is computed bit-identically no matter which worker runs it.
//
// The per-panel cutoff N is pinned from the panel's end, which dominates
// the pointwise cutoff of every node inside, keeping the correction series
// within its remainder bound.
struct SweepPlan {
    QuadratureConfig qcfg;
    ZetaEvalConfig zcfg;
    PanelLayout layout;
    std::size_t n_max = 0;               // covers em_cutoff at t_max
    std::vector<double> logn;            // log(n+1) at index n
    std::vector<double> adv_re, adv_im;  // e^{-i w log n}
    std::vector<std::vector<double>> rot_re, rot_im; // [3n][n_max]

    static std::shared_ptr<const SweepPlan> build(const QuadratureConfig& qcfg,
                                                  const ZetaEvalConfig& zcfg,
                                                  double t_max);
};

// One vertical line sigma = const. Holds the anchor state, so one instance
// per worker.
class ZetaLineSweep {
public:
    ZetaLineSweep(std::shared_ptr<const SweepPlan> plan, double sigma);

    double sigma() const { return sigma_; }

    // zeta at the standard node offsets of `panels` consecutive full panels
    // starting at t0. Row p of `out` (stride elements apart) receives the
    // values for panel p. Throws accuracy error if the correction remainder
    // exceeds the configured target anywhere.
    void compute_block(double t0, std::size_t panels, std::complex<double>* out,
                       std::size_t stride);

    // Pointwise fallback sharing the plan's evaluation config.
    std::complex<double> point(double t) const;

private:
    std::shared_ptr<const SweepPlan> plan_;
    double sigma_;
    std::vector<double> coeff_;          // n^{-sigma}
    std::vector<double> anc_re_, anc_im_;
    std::vector<double> pr_, pi_;        // chunk product buffers
};

// Integrand mapping the swept line values through a pointwise functional:
// out(t) = map(t, z) with z_l = zeta(sigma_l + it). At most two lines.
class SweepMapIntegrand final : public PanelIntegrand {
public:
    using Map = std::function<std::complex<double>(double, std::span<const std::complex<double>>)>;

    SweepMapIntegrand(std::shared_ptr<const SweepPlan> plan, std::vector<double> sigmas,
                      Map map, std::function<bool(double)> coarse = {});

    std::unique_ptr<PanelIntegrand> clone() const override;
    void begin_block(double t0, double t1) override;
    void eval_panel(double t0, std::span<const double> offsets,
                    std::span<std::complex<double>> out) override;
    void end_panel() override;
    void eval_points(std::span<const double> ts,
                     std::span<std::complex<double>> out) override;
    bool coarse_only(double t0) const override;

private:
    std::shared_ptr<const SweepPlan> plan_;
    std::vector<double> sigmas_;
    Map map_;
    std::function<bool(double)> coarse_;
    std::vector<ZetaLineSweep> lines_;
    std::vector<std::vector<std::complex<double>>> vals_; // per line, block rows
    std::size_t full_panels_ = 0;
    std::size_t panel_idx_ = 0;
};

} // namespace zetalab
