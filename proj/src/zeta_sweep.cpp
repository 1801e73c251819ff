#include "zeta_sweep.hpp"

#include <algorithm>
#include <cmath>

namespace zetalab {
namespace {

// n-range processed per pass; keeps the rotation-table slices and product
// buffers resident in L2 while a whole block of panels reuses them.
constexpr std::size_t kChunk = 1024;

} // namespace

std::shared_ptr<const SweepPlan> SweepPlan::build(const QuadratureConfig& qcfg,
                                                  const ZetaEvalConfig& zcfg,
                                                  double t_max) {
    validate(qcfg);
    validate(zcfg);
    require(std::isfinite(t_max) && t_max >= 0.0, ErrorCode::invalid_input,
            "sweep plan needs a finite t_max");

    auto plan = std::make_shared<SweepPlan>();
    plan->qcfg = qcfg;
    plan->zcfg = zcfg;
    plan->layout = panel_layout(qcfg);
    // cutoff for the farthest panel end the engine can request
    const double t_top = t_max + qcfg.panel_width;
    plan->n_max = em_cutoff(zcfg, t_top);

    const std::size_t nm = plan->n_max;
    plan->logn.resize(nm);
    plan->adv_re.resize(nm);
    plan->adv_im.resize(nm);
    const std::size_t m = plan->layout.offsets.size();
    plan->rot_re.assign(m, std::vector<double>(nm));
    plan->rot_im.assign(m, std::vector<double>(nm));

    const double w = qcfg.panel_width;
    for (std::size_t i = 0; i < nm; ++i) {
        const double ln = std::log(static_cast<double>(i + 1));
        plan->logn[i] = ln;
        const std::complex<double> adv = unit_phase(w, ln);
        plan->adv_re[i] = adv.real();
        plan->adv_im[i] = -adv.imag(); // e^{-i w log n}
        for (std::size_t j = 0; j < m; ++j) {
            const std::complex<double> rot = unit_phase(plan->layout.offsets[j], ln);
            plan->rot_re[j][i] = rot.real();
            plan->rot_im[j][i] = -rot.imag();
        }
    }
    return plan;
}

ZetaLineSweep::ZetaLineSweep(std::shared_ptr<const SweepPlan> plan, double sigma)
    : plan_(std::move(plan)), sigma_(sigma) {
    const std::size_t nm = plan_->n_max;
    coeff_.resize(nm);
    for (std::size_t i = 0; i < nm; ++i)
        coeff_[i] = std::pow(static_cast<double>(i + 1), -sigma);
    anc_re_.resize(nm);
    anc_im_.resize(nm);
    pr_.resize(kChunk);
    pi_.resize(kChunk);
}

void ZetaLineSweep::compute_block(double t0, std::size_t panels,
                                  std::complex<double>* out, std::size_t stride) {
    const SweepPlan& pl = *plan_;
    const std::size_t m = pl.layout.offsets.size();
    const double w = pl.layout.width;
    require(panels >= 1 && panels <= kPanelsPerBlock, ErrorCode::invalid_input,
            "block size out of range");

    std::size_t ncut[kPanelsPerBlock];
    for (std::size_t p = 0; p < panels; ++p)
        ncut[p] = em_cutoff(pl.zcfg, t0 + static_cast<double>(p + 1) * w);
    const std::size_t n_end = ncut[panels - 1];
    require(n_end <= pl.n_max, ErrorCode::invalid_input,
            "sweep plan does not cover the requested block");

    // exact anchors at the block start
    for (std::size_t i = 0; i < n_end; ++i) {
        const std::complex<double> ph = unit_phase(t0, pl.logn[i]);
        anc_re_[i] = ph.real();
        anc_im_[i] = -ph.imag();
    }
    for (std::size_t p = 0; p < panels; ++p)
        for (std::size_t j = 0; j < m; ++j) out[p * stride + j] = 0.0;

    const double* const coeff = coeff_.data();
    double* const ar = anc_re_.data();
    double* const ai = anc_im_.data();
    double* const pr = pr_.data();
    double* const pi = pi_.data();

    for (std::size_t c0 = 0; c0 < n_end; c0 += kChunk) {
        const std::size_t ce = std::min(c0 + kChunk, n_end);
        for (std::size_t p = 0; p < panels; ++p) {
            const std::size_t np = std::min(ncut[p], ce);
            if (np > c0) {
                const std::size_t len = np - c0;
                const double* __restrict__ cs = coeff + c0;
                const double* __restrict__ xr = ar + c0;
                const double* __restrict__ xi = ai + c0;
                for (std::size_t i = 0; i < len; ++i) {
                    pr[i] = cs[i] * xr[i];
                    pi[i] = cs[i] * xi[i];
                }
                for (std::size_t j = 0; j < m; ++j) {
                    const double* __restrict__ rr = pl.rot_re[j].data() + c0;
                    const double* __restrict__ ri = pl.rot_im[j].data() + c0;
                    double sr = 0.0, si = 0.0;
                    for (std::size_t i = 0; i < len; ++i) {
                        sr += pr[i] * rr[i] - pi[i] * ri[i];
                        si += pr[i] * ri[i] + pi[i] * rr[i];
                    }
                    out[p * stride + j] += std::complex<double>(sr, si);
                }
            }
            // advance this chunk's anchors to the next panel start
            const double* __restrict__ vr = pl.adv_re.data() + c0;
            const double* __restrict__ vi = pl.adv_im.data() + c0;
            double* __restrict__ yr = ar + c0;
            double* __restrict__ yi = ai + c0;
            for (std::size_t i = 0, len = ce - c0; i < len; ++i) {
                const double nr = yr[i] * vr[i] - yi[i] * vi[i];
                const double ni = yr[i] * vi[i] + yi[i] * vr[i];
                yr[i] = nr;
                yi[i] = ni;
            }
        }
    }

    // correction terms per node, cutoff pinned at each panel's end
    for (std::size_t p = 0; p < panels; ++p) {
        const double tp = t0 + static_cast<double>(p) * w;
        for (std::size_t j = 0; j < m; ++j) {
            const std::complex<double> s(sigma_, tp + pl.layout.offsets[j]);
            const EmTail tail =
                em_tail(s, static_cast<double>(ncut[p]), pl.zcfg.bernoulli_order);
            if (tail.err_est > pl.zcfg.target_abs_error)
                fail(ErrorCode::accuracy,
                     "correction remainder above target near t = " + std::to_string(s.imag()));
            out[p * stride + j] += tail.value;
        }
    }
}

std::complex<double> ZetaLineSweep::point(double t) const {
    return zeta(sigma_, t, plan_->zcfg);
}

SweepMapIntegrand::SweepMapIntegrand(std::shared_ptr<const SweepPlan> plan,
                                     std::vector<double> sigmas, Map map,
                                     std::function<bool(double)> coarse)
    : plan_(std::move(plan)), sigmas_(std::move(sigmas)), map_(std::move(map)),
      coarse_(std::move(coarse)) {
    require(!sigmas_.empty() && sigmas_.size() <= 2, ErrorCode::invalid_input,
            "swept integrand supports one or two zeta lines");
    const std::size_t m = plan_->layout.offsets.size();
    for (double s : sigmas_) {
        lines_.emplace_back(plan_, s);
        vals_.emplace_back(kPanelsPerBlock * m);
    }
}

std::unique_ptr<PanelIntegrand> SweepMapIntegrand::clone() const {
    return std::make_unique<SweepMapIntegrand>(plan_, sigmas_, map_, coarse_);
}

void SweepMapIntegrand::begin_block(double t0, double t1) {
    const double w = plan_->layout.width;
    full_panels_ = static_cast<std::size_t>(std::floor((t1 - t0) / w + 1e-9));
    panel_idx_ = 0;
    const std::size_t m = plan_->layout.offsets.size();
    if (full_panels_ == 0) return;
    for (std::size_t l = 0; l < lines_.size(); ++l)
        lines_[l].compute_block(t0, full_panels_, vals_[l].data(), m);
}

void SweepMapIntegrand::eval_panel(double t0, std::span<const double> offsets,
                                   std::span<std::complex<double>> out) {
    const std::size_t m = plan_->layout.offsets.size();
    require(panel_idx_ < full_panels_, ErrorCode::invalid_input,
            "panel request outside the prepared block");
    std::complex<double> z[2];
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t l = 0; l < lines_.size(); ++l)
            z[l] = vals_[l][panel_idx_ * m + j];
        out[j] = map_(t0 + offsets[j], std::span<const std::complex<double>>(z, lines_.size()));
    }
}

void SweepMapIntegrand::end_panel() { ++panel_idx_; }

void SweepMapIntegrand::eval_points(std::span<const double> ts,
                                    std::span<std::complex<double>> out) {
    std::complex<double> z[2];
    for (std::size_t i = 0; i < ts.size(); ++i) {
        for (std::size_t l = 0; l < lines_.size(); ++l) z[l] = lines_[l].point(ts[i]);
        out[i] = map_(ts[i], std::span<const std::complex<double>>(z, lines_.size()));
    }
}

bool SweepMapIntegrand::coarse_only(double t0) const {
    return coarse_ ? coarse_(t0) : false;
}

} // namespace zetalab
