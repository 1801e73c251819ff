#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "errors.hpp"

namespace zetalab {

// Fixed-panel composite Gauss-Legendre scheme over [t_lo, t_hi].
//
// The range is cut into panels of the configured width (the last panel may
// be short). Each full panel is evaluated with the n-point rule and checked
// against the two-half refinement; panels that fail the check are halved
// recursively up to max_halvings before an accuracy error is raised. Panels
// are grouped into blocks of 64 that act as independent work units: block
// results are produced in a fixed per-block order and combined by a pairwise
// compensated reduction, so the output is byte-identical for any worker
// count.
struct QuadratureConfig {
    double panel_width = 0.25;
    int nodes_per_panel = 8;
    double refine_tol = 1e-6;  // relative, per panel
    int max_halvings = 12;
    int workers = 0;           // 0: hardware concurrency
};

void validate(const QuadratureConfig& cfg);

constexpr std::size_t kPanelsPerBlock = 64;

// Node offsets a full panel is sampled at: the n coarse nodes followed by
// the 2n nodes of the two half-panels. Shared by the engine and by the
// swept zeta evaluator, which precomputes rotation tables for exactly these
// offsets.
struct PanelLayout {
    double width = 0.0;
    int n = 0;
    std::vector<double> offsets;   // size 3n
    std::vector<double> w_coarse;  // size n, scaled by width
    std::vector<double> w_fine;    // size 2n, scaled by width/2
};
PanelLayout panel_layout(const QuadratureConfig& cfg);

// Integrand seen by the engine. Implementations must be cloneable so each
// worker thread gets private state; a clone must produce bit-identical
// values regardless of which blocks it is asked to evaluate.
class PanelIntegrand {
public:
    virtual ~PanelIntegrand() = default;
    virtual std::unique_ptr<PanelIntegrand> clone() const = 0;

    // Called once per block, ascending panel order within each worker.
    virtual void begin_block(double t0, double t1) { (void)t0; (void)t1; }
    // Values at the standard offsets of the full panel starting at t0.
    virtual void eval_panel(double t0, std::span<const double> offsets,
                            std::span<std::complex<double>> out) = 0;
    // Advance per-panel state; called once per panel of the block, in order.
    virtual void end_panel() {}
    // Arbitrary positions: refinement, short final panels, breakpoint pieces.
    virtual void eval_points(std::span<const double> ts,
                             std::span<std::complex<double>> out) = 0;
    // Interior discontinuities in (t0, t1), ascending. Panels holding any
    // are integrated piecewise between them.
    virtual void append_breakpoints(double t0, double t1,
                                    std::vector<double>& out) const {
        (void)t0; (void)t1; (void)out;
    }
    // Panels may opt out of the two-half check (used when an exponential
    // weight has made their contribution negligible); the coarse rule value
    // is then accepted as-is.
    virtual bool coarse_only(double t0) const { (void)t0; return false; }
};

// Wraps a plain callable as an integrand.
class PointwiseIntegrand final : public PanelIntegrand {
public:
    PointwiseIntegrand(std::function<std::complex<double>(double)> f,
                       std::function<void(double, double, std::vector<double>&)> breaks = {})
        : f_(std::move(f)), breaks_(std::move(breaks)) {}

    std::unique_ptr<PanelIntegrand> clone() const override {
        return std::make_unique<PointwiseIntegrand>(f_, breaks_);
    }
    void eval_panel(double t0, std::span<const double> offsets,
                    std::span<std::complex<double>> out) override {
        for (std::size_t i = 0; i < offsets.size(); ++i) out[i] = f_(t0 + offsets[i]);
    }
    void eval_points(std::span<const double> ts,
                     std::span<std::complex<double>> out) override {
        for (std::size_t i = 0; i < ts.size(); ++i) out[i] = f_(ts[i]);
    }
    void append_breakpoints(double t0, double t1,
                            std::vector<double>& out) const override {
        if (breaks_) breaks_(t0, t1, out);
    }

private:
    std::function<std::complex<double>(double)> f_;
    std::function<void(double, double, std::vector<double>&)> breaks_;
};

// Per-node observer. One clone per worker; begin_block/end_block bracket the
// nodes of a block, and merge() folds stored block states back in ascending
// block order on the calling thread.
class NodeObserver {
public:
    virtual ~NodeObserver() = default;
    virtual std::unique_ptr<NodeObserver> clone() const = 0;
    virtual void begin_block(std::size_t block_index) = 0;
    // An accepted quadrature node: integral == sum of value * weight over
    // every node reported.
    virtual void node(double t, std::complex<double> value, double weight) = 0;
    virtual void end_block() = 0;
    virtual void merge(std::size_t block_index) = 0;
};

struct IntegralResult {
    std::complex<double> value;
    double err_est = 0.0;
};

std::size_t panel_count(double t_lo, double t_hi, const QuadratureConfig& cfg);
std::size_t block_count(double t_lo, double t_hi, const QuadratureConfig& cfg);

// Integrate over [t_lo, t_hi]. scale_hint, when positive, is a magnitude
// scale for the whole integrand: the per-panel acceptance test becomes
// |I1 - I2| <= refine_tol * max(|I2|, scale_hint * panel_width), which stops
// pointless deep refinement of panels that are tiny against the final
// integral (e.g. near a zeta zero).
IntegralResult integrate(double t_lo, double t_hi, const QuadratureConfig& cfg,
                         PanelIntegrand& integrand, NodeObserver* observer = nullptr,
                         double scale_hint = 0.0);

// Deterministic pairwise reduction used for the cross-block sum.
std::complex<double> pairwise_sum(std::span<const std::complex<double>> xs);

} // namespace zetalab
