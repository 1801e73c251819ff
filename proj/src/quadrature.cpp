#include "quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "gauss_legendre.hpp"

namespace zetalab {
namespace {

constexpr double kWidthEps = 1e-12;

struct KahanComplex {
    std::complex<double> sum{0.0, 0.0};
    std::complex<double> comp{0.0, 0.0};
    void add(std::complex<double> x) {
        const std::complex<double> y = x - comp;
        const std::complex<double> t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    std::complex<double> value() const { return sum; }
};

struct BlockOut {
    std::complex<double> value{0.0, 0.0};
    double err = 0.0;
};

// Work shared by the per-block workers.
struct Job {
    double t_lo;
    double t_hi;
    const QuadratureConfig* cfg;
    const PanelLayout* layout;
    std::size_t n_panels;
    std::size_t n_blocks;
    double scale_hint;
    std::vector<BlockOut>* out;
};

class PanelWorker {
public:
    PanelWorker(const Job& job, PanelIntegrand& integrand, NodeObserver* obs)
        : job_(job), f_(integrand), obs_(obs),
          rule_(gauss_rule(job.cfg->nodes_per_panel)) {
        vals_.resize(job.layout->offsets.size());
    }

    void run_block(std::size_t b) {
        const double w = job_.cfg->panel_width;
        const std::size_t p_first = b * kPanelsPerBlock;
        const std::size_t p_last = std::min(p_first + kPanelsPerBlock, job_.n_panels);
        const double b_t0 = job_.t_lo + static_cast<double>(p_first) * w;
        const double b_t1 = std::min(job_.t_lo + static_cast<double>(p_last) * w, job_.t_hi);

        acc_ = KahanComplex{};
        err_ = 0.0;
        f_.begin_block(b_t0, b_t1);
        if (obs_) obs_->begin_block(b);
        for (std::size_t p = p_first; p < p_last; ++p) {
            const double t0 = job_.t_lo + static_cast<double>(p) * w;
            const double t1 = std::min(t0 + w, job_.t_hi);
            do_panel(t0, t1, t1 - t0 >= w - kWidthEps);
            f_.end_panel();
        }
        if (obs_) obs_->end_block();
        (*job_.out)[b] = {acc_.value(), err_};
    }

private:
    void do_panel(double t0, double t1, bool full) {
        breaks_.clear();
        f_.append_breakpoints(t0, t1, breaks_);
        if (!full || !breaks_.empty()) {
            piecewise(t0, t1);
            return;
        }

        const PanelLayout& lay = *job_.layout;
        const int n = lay.n;
        f_.eval_panel(t0, lay.offsets, vals_);

        std::complex<double> i1{0.0, 0.0};
        for (int j = 0; j < n; ++j) i1 += lay.w_coarse[j] * vals_[j];

        if (f_.coarse_only(t0)) {
            accept(i1, std::abs(i1) * job_.cfg->refine_tol);
            if (obs_)
                for (int j = 0; j < n; ++j)
                    obs_->node(t0 + lay.offsets[j], vals_[j], lay.w_coarse[j]);
            return;
        }

        std::complex<double> i2{0.0, 0.0};
        for (int j = 0; j < 2 * n; ++j) i2 += lay.w_fine[j] * vals_[n + j];

        const double diff = std::abs(i1 - i2);
        if (accepted(diff, std::abs(i2), t1 - t0)) {
            accept(i2, diff);
            if (obs_)
                for (int j = 0; j < 2 * n; ++j)
                    obs_->node(t0 + lay.offsets[n + j], vals_[n + j], lay.w_fine[j]);
            return;
        }
        // Fall back to the pointwise path for the whole panel so refinement
        // depth accounting starts from its top.
        refine(t0, t1, 0);
    }

    void piecewise(double t0, double t1) {
        double a = t0;
        for (double b : breaks_) {
            if (b <= a + kWidthEps) continue;
            if (b >= t1 - kWidthEps) break;
            refine(a, b, 0);
            a = b;
        }
        if (t1 > a + kWidthEps) refine(a, t1, 0);
    }

    bool accepted(double diff, double ref, double width) const {
        const double floor_ = job_.scale_hint > 0.0 ? job_.scale_hint * width : 0.0;
        return diff <= job_.cfg->refine_tol * std::max(ref, floor_) ||
               diff <= 1e-14 * (1.0 + ref);
    }

    std::complex<double> rule_value(double a, double b, bool observe) {
        const int n = static_cast<int>(rule_.nodes.size());
        pts_.resize(n);
        pv_.resize(n);
        const double h = b - a;
        for (int j = 0; j < n; ++j) pts_[j] = a + h * rule_.nodes[j];
        f_.eval_points(pts_, pv_);
        std::complex<double> s{0.0, 0.0};
        for (int j = 0; j < n; ++j) s += h * rule_.weights[j] * pv_[j];
        if (observe && obs_)
            for (int j = 0; j < n; ++j) obs_->node(pts_[j], pv_[j], h * rule_.weights[j]);
        return s;
    }

    void refine(double a, double b, int depth) {
        const double m = 0.5 * (a + b);
        const std::complex<double> i1 = rule_value(a, b, false);
        const std::complex<double> l = rule_value(a, m, false);
        const std::complex<double> r = rule_value(m, b, false);
        const std::complex<double> i2 = l + r;
        const double diff = std::abs(i1 - i2);
        if (accepted(diff, std::abs(i2), b - a)) {
            if (obs_) {
                // re-walk the halves so the observer sees the accepted nodes
                accept(rule_value(a, m, true) + rule_value(m, b, true), diff);
            } else {
                accept(i2, diff);
            }
            return;
        }
        if (depth >= job_.cfg->max_halvings)
            fail(ErrorCode::accuracy,
                 "panel [" + std::to_string(a) + ", " + std::to_string(b) +
                     "] did not converge after " + std::to_string(job_.cfg->max_halvings) +
                     " halvings");
        refine(a, m, depth + 1);
        refine(m, b, depth + 1);
    }

    void accept(std::complex<double> v, double err) {
        acc_.add(v);
        err_ += err;
    }

    const Job& job_;
    PanelIntegrand& f_;
    NodeObserver* obs_;
    const GaussRule& rule_;
    KahanComplex acc_;
    double err_ = 0.0;
    std::vector<std::complex<double>> vals_;
    std::vector<double> breaks_;
    std::vector<double> pts_;
    std::vector<std::complex<double>> pv_;
};

} // namespace

void validate(const QuadratureConfig& cfg) {
    require(std::isfinite(cfg.panel_width) && cfg.panel_width > 0.0,
            ErrorCode::invalid_input, "panel_width must be positive");
    require(cfg.nodes_per_panel >= 2 && cfg.nodes_per_panel <= 32,
            ErrorCode::invalid_input, "nodes_per_panel must be in [2, 32]");
    require(std::isfinite(cfg.refine_tol) && cfg.refine_tol > 0.0,
            ErrorCode::invalid_input, "refine_tol must be positive");
    require(cfg.max_halvings >= 0 && cfg.max_halvings <= 40,
            ErrorCode::invalid_input, "max_halvings must be in [0, 40]");
    require(cfg.workers >= 0, ErrorCode::invalid_input, "workers must be >= 0");
}

PanelLayout panel_layout(const QuadratureConfig& cfg) {
    const GaussRule& rule = gauss_rule(cfg.nodes_per_panel);
    const int n = cfg.nodes_per_panel;
    const double w = cfg.panel_width;
    PanelLayout lay;
    lay.width = w;
    lay.n = n;
    lay.offsets.resize(3 * static_cast<std::size_t>(n));
    lay.w_coarse.resize(n);
    lay.w_fine.resize(2 * static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        lay.offsets[j] = w * rule.nodes[j];
        lay.w_coarse[j] = w * rule.weights[j];
        lay.offsets[n + j] = 0.5 * w * rule.nodes[j];
        lay.offsets[2 * n + j] = 0.5 * w + 0.5 * w * rule.nodes[j];
        lay.w_fine[j] = 0.5 * w * rule.weights[j];
        lay.w_fine[n + j] = 0.5 * w * rule.weights[j];
    }
    return lay;
}

std::size_t panel_count(double t_lo, double t_hi, const QuadratureConfig& cfg) {
    if (t_hi <= t_lo + kWidthEps) return 0;
    return static_cast<std::size_t>(
        std::ceil((t_hi - t_lo) / cfg.panel_width - kWidthEps));
}

std::size_t block_count(double t_lo, double t_hi, const QuadratureConfig& cfg) {
    return (panel_count(t_lo, t_hi, cfg) + kPanelsPerBlock - 1) / kPanelsPerBlock;
}

std::complex<double> pairwise_sum(std::span<const std::complex<double>> xs) {
    if (xs.empty()) return {0.0, 0.0};
    if (xs.size() == 1) return xs[0];
    if (xs.size() == 2) return xs[0] + xs[1];
    const std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

IntegralResult integrate(double t_lo, double t_hi, const QuadratureConfig& cfg,
                         PanelIntegrand& integrand, NodeObserver* observer,
                         double scale_hint) {
    validate(cfg);
    require(std::isfinite(t_lo) && std::isfinite(t_hi) && t_hi >= t_lo,
            ErrorCode::invalid_input, "integration range must be finite with t_hi >= t_lo");

    const PanelLayout layout = panel_layout(cfg);
    const std::size_t n_panels = panel_count(t_lo, t_hi, cfg);
    const std::size_t n_blocks = (n_panels + kPanelsPerBlock - 1) / kPanelsPerBlock;
    if (n_blocks == 0) return {{0.0, 0.0}, 0.0};

    std::vector<BlockOut> blocks(n_blocks);
    Job job{t_lo, t_hi, &cfg, &layout, n_panels, n_blocks, scale_hint, &blocks};

    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    std::size_t workers = cfg.workers > 0 ? static_cast<std::size_t>(cfg.workers) : hw;
    workers = std::min(workers, n_blocks);

    if (workers <= 1) {
        PanelWorker w(job, integrand, observer);
        for (std::size_t b = 0; b < n_blocks; ++b) w.run_block(b);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::unique_ptr<PanelIntegrand>> fs(workers);
        std::vector<std::unique_ptr<NodeObserver>> os(workers);
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t wi = 0; wi < workers; ++wi) {
            fs[wi] = integrand.clone();
            if (observer) os[wi] = observer->clone();
            pool.emplace_back([&, wi] {
                try {
                    PanelWorker w(job, *fs[wi], observer ? os[wi].get() : nullptr);
                    for (;;) {
                        const std::size_t b = next.fetch_add(1);
                        if (b >= n_blocks) break;
                        w.run_block(b);
                    }
                } catch (...) {
                    errors[wi] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    if (observer)
        for (std::size_t b = 0; b < n_blocks; ++b) observer->merge(b);

    std::vector<std::complex<double>> vals(n_blocks);
    double err = 0.0;
    for (std::size_t b = 0; b < n_blocks; ++b) {
        vals[b] = blocks[b].value;
        err += blocks[b].err;
    }
    return {pairwise_sum(vals), err};
}

} // namespace zetalab
