// Panel quadrature engine: Gauss-Legendre rules, refinement, breakpoint
// splitting, observers, and the deterministic parallel reduction. Closed
// forms used below:
//
//   int_1^3 (t^2 + i t) dt       = 26/3 + 4 i
//   int_0^{20} e^{3it} dt        = (e^{60i} - 1) / (3i)
//   int_{-8}^{8} e^{-t^2} dt     = sqrt(pi) erf(8)
//   int_0^1 t^15 dt              = 1/16   (degree 2n-1 = 15 for n = 8)

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gauss_legendre.hpp"
#include "quadrature.hpp"

#include <atomic>
#include <cmath>
#include <complex>
#include <cstring>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <random>
#include <vector>

using namespace zetalab;
using cplx = std::complex<double>;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected a zetalab::Error");
    return ErrorCode::domain;
}

// Observer that tallies sum of weights and weighted values.
// Mirrors the engine contract: worker clones buffer one block at a time and
// publish it into a shared slot vector from end_block; the root observer
// folds the slots in ascending order when the engine calls merge.
class SumObserver final : public NodeObserver {
public:
    struct Tally {
        double weight_sum = 0.0;
        cplx weighted_sum;
        std::vector<std::pair<double, double>> nodes; // (t, weight)
    };

    SumObserver(std::shared_ptr<Tally> out, std::shared_ptr<std::vector<Tally>> slots)
        : out_(std::move(out)), slots_(std::move(slots)) {}

    std::unique_ptr<NodeObserver> clone() const override {
        return std::make_unique<SumObserver>(out_, slots_);
    }
    void begin_block(std::size_t block_index) override {
        block_ = block_index;
        current_ = Tally{};
    }
    void node(double t, cplx value, double weight) override {
        current_.weight_sum += weight;
        current_.weighted_sum += value * weight;
        current_.nodes.emplace_back(t, weight);
    }
    void end_block() override { (*slots_)[block_] = std::move(current_); }
    void merge(std::size_t block_index) override {
        const Tally& b = (*slots_)[block_index];
        out_->weight_sum += b.weight_sum;
        out_->weighted_sum += b.weighted_sum;
        out_->nodes.insert(out_->nodes.end(), b.nodes.begin(), b.nodes.end());
    }

private:
    std::shared_ptr<Tally> out_;
    std::shared_ptr<std::vector<Tally>> slots_;
    std::size_t block_ = 0;
    Tally current_;
};

// Wrapper forcing coarse_only on every panel.
class CoarseOnly final : public PanelIntegrand {
public:
    explicit CoarseOnly(std::function<cplx(double)> f) : f_(std::move(f)) {}
    std::unique_ptr<PanelIntegrand> clone() const override {
        return std::make_unique<CoarseOnly>(f_);
    }
    void eval_panel(double t0, std::span<const double> offsets,
                    std::span<cplx> out) override {
        for (std::size_t i = 0; i < offsets.size(); ++i) out[i] = f_(t0 + offsets[i]);
    }
    void eval_points(std::span<const double> ts, std::span<cplx> out) override {
        for (std::size_t i = 0; i < ts.size(); ++i) out[i] = f_(ts[i]);
    }
    bool coarse_only(double) const override { return true; }

private:
    std::function<cplx(double)> f_;
};

} // namespace

TEST_CASE("Gauss-Legendre rules on [0,1]") {
    for (int n = 2; n <= 32; ++n) {
        const GaussRule& rule = gauss_rule(n);
        REQUIRE(rule.nodes.size() == static_cast<std::size_t>(n));
        double wsum = 0.0;
        for (double w : rule.weights) wsum += w;
        CHECK(std::abs(wsum - 1.0) <= 1e-14);
        for (int i = 0; i < n; ++i) {
            CHECK(rule.nodes[i] > 0.0);
            CHECK(rule.nodes[i] < 1.0);
            CHECK(std::abs(rule.nodes[i] + rule.nodes[n - 1 - i] - 1.0) <= 1e-14);
            if (i > 0) CHECK(rule.nodes[i] > rule.nodes[i - 1]);
        }
    }
    // n = 8 integrates degree 15 exactly
    const GaussRule& r8 = gauss_rule(8);
    double v = 0.0;
    for (int i = 0; i < 8; ++i) v += r8.weights[i] * std::pow(r8.nodes[i], 15);
    CHECK(std::abs(v - 1.0 / 16.0) <= 1e-14);

    CHECK_THROWS_AS(gauss_rule(1), Error);
    CHECK_THROWS_AS(gauss_rule(33), Error);
}

TEST_CASE("panel and block counts") {
    QuadratureConfig cfg;
    CHECK(panel_count(1.0, 17.0, cfg) == 64);
    CHECK(block_count(1.0, 17.0, cfg) == 1);
    CHECK(panel_count(1.0, 17.1, cfg) == 65);
    CHECK(block_count(1.0, 17.1, cfg) == 2);
    CHECK(panel_count(1.0, 1.0, cfg) == 0);

    const PanelLayout layout = panel_layout(cfg);
    CHECK(layout.offsets.size() == 24); // n coarse + 2n fine
    CHECK(layout.w_coarse.size() == 8);
    CHECK(layout.w_fine.size() == 16);
    double coarse = 0.0, fine = 0.0;
    for (double w : layout.w_coarse) coarse += w;
    for (double w : layout.w_fine) fine += w;
    CHECK(std::abs(coarse - cfg.panel_width) <= 1e-15);
    CHECK(std::abs(fine - cfg.panel_width) <= 1e-15);
}

TEST_CASE("polynomial and oscillatory closed forms") {
    QuadratureConfig cfg;
    PointwiseIntegrand poly([](double t) { return cplx{t * t, t}; });
    const IntegralResult a = integrate(1.0, 3.0, cfg, poly);
    CHECK(std::abs(a.value - cplx{26.0 / 3.0, 4.0}) <= 1e-12);

    PointwiseIntegrand osc([](double t) { return std::exp(cplx{0.0, 3.0 * t}); });
    const cplx expect = (std::exp(cplx{0.0, 60.0}) - 1.0) / cplx{0.0, 3.0};
    const IntegralResult b = integrate(0.0, 20.0, cfg, osc);
    CHECK(std::abs(b.value - expect) <= 1e-9);

    PointwiseIntegrand gauss([](double t) { return cplx{std::exp(-t * t), 0.0}; });
    const IntegralResult c = integrate(-8.0, 8.0, cfg, gauss);
    CHECK(std::abs(c.value.real() - std::sqrt(std::numbers::pi)) <= 1e-10);
    CHECK(c.err_est >= 0.0);
}

TEST_CASE("results are byte-identical across worker counts") {
    auto f = [](double t) {
        return cplx{std::sin(12.0 * t), std::cos(5.0 * t) * std::exp(std::sin(t))};
    };
    std::vector<IntegralResult> results;
    for (int workers : {1, 3, 8}) {
        QuadratureConfig cfg;
        cfg.workers = workers;
        PointwiseIntegrand pi(f);
        results.push_back(integrate(0.0, 100.0, cfg, pi));
    }
    for (std::size_t i = 1; i < results.size(); ++i) {
        CHECK(std::memcmp(&results[i].value, &results[0].value, sizeof(cplx)) == 0);
        CHECK(results[i].err_est == results[0].err_est);
    }
}

TEST_CASE("declared breakpoints make a step function exact") {
    const double c = 2.345678901234;
    auto f = [c](double t) { return cplx{t < c ? 1.0 : 5.0, 0.0}; };
    auto breaks = [c](double t0, double t1, std::vector<double>& out) {
        if (t0 < c && c < t1) out.push_back(c);
    };
    QuadratureConfig cfg;
    PointwiseIntegrand pi(f, breaks);
    const IntegralResult r = integrate(1.0, 4.0, cfg, pi);
    const double expect = (c - 1.0) + 5.0 * (4.0 - c);
    CHECK(std::abs(r.value.real() - expect) <= 1e-13);
}

TEST_CASE("observer nodes reproduce the integral and the window") {
    QuadratureConfig cfg;
    auto tally = std::make_shared<SumObserver::Tally>();
    auto slots = std::make_shared<std::vector<SumObserver::Tally>>(
        block_count(1.0, 33.0, cfg));
    SumObserver obs(tally, slots);
    PointwiseIntegrand pi([](double t) { return cplx{std::sin(30.0 * t), 0.0}; });
    const IntegralResult r = integrate(1.0, 33.0, cfg, pi, &obs);
    CHECK(std::abs(tally->weight_sum - 32.0) <= 1e-10);
    CHECK(std::abs(tally->weighted_sum - r.value) <= 1e-10);
    CHECK_FALSE(tally->nodes.empty());
    for (const auto& [t, w] : tally->nodes) {
        CHECK(t >= 1.0);
        CHECK(t <= 33.0);
        CHECK(w > 0.0);
    }
}

TEST_CASE("observer node stream is identical for 1 and 4 workers") {
    auto run = [](int workers) {
        QuadratureConfig cfg;
        cfg.workers = workers;
        auto tally = std::make_shared<SumObserver::Tally>();
        auto slots = std::make_shared<std::vector<SumObserver::Tally>>(
            block_count(0.0, 50.0, cfg));
        SumObserver obs(tally, slots);
        PointwiseIntegrand pi(
            [](double t) { return cplx{std::cos(7.0 * t), std::sin(3.0 * t)}; });
        integrate(0.0, 50.0, cfg, pi, &obs);
        return tally;
    };
    const auto a = run(1);
    const auto b = run(4);
    REQUIRE(a->nodes.size() == b->nodes.size());
    for (std::size_t i = 0; i < a->nodes.size(); ++i) {
        CHECK(a->nodes[i].first == b->nodes[i].first);
        CHECK(a->nodes[i].second == b->nodes[i].second);
    }
    CHECK(a->weighted_sum.real() == b->weighted_sum.real());
    CHECK(a->weighted_sum.imag() == b->weighted_sum.imag());
}

TEST_CASE("an undeclared discontinuity exhausts the halvings") {
    QuadratureConfig cfg;
    cfg.refine_tol = 1e-14;
    cfg.max_halvings = 2;
    const double c = 2.10710678118; // away from any dyadic split point
    PointwiseIntegrand pi([c](double t) { return cplx{t < c ? 0.0 : 1.0, 0.0}; });
    try {
        integrate(1.0, 4.0, cfg, pi);
        FAIL("expected an accuracy error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::accuracy);
        CHECK(std::string(e.what()).find("panel") != std::string::npos);
    }
}

TEST_CASE("coarse_only panels skip the refinement correction") {
    // sin(30 t) is badly underresolved by the coarse rule alone, so the
    // coarse-only route must reproduce the manual composite sum, not the
    // refined integral.
    QuadratureConfig cfg;
    const PanelLayout layout = panel_layout(cfg);
    auto f = [](double t) { return cplx{std::sin(30.0 * t), 0.0}; };
    CoarseOnly integrand(f);
    const IntegralResult r = integrate(1.0, 9.0, cfg, integrand);

    cplx manual{0.0, 0.0};
    const std::size_t panels = panel_count(1.0, 9.0, cfg);
    for (std::size_t p = 0; p < panels; ++p) {
        const double t0 = 1.0 + static_cast<double>(p) * cfg.panel_width;
        for (int i = 0; i < layout.n; ++i)
            manual += f(t0 + layout.offsets[i]) * layout.w_coarse[i];
    }
    CHECK(std::abs(r.value - manual) <= 1e-9 * std::max(1.0, std::abs(manual)));

    PointwiseIntegrand refined(f);
    const IntegralResult full = integrate(1.0, 9.0, cfg, refined);
    const double closed = (std::cos(30.0) - std::cos(270.0)) / 30.0;
    CHECK(std::abs(full.value.real() - closed) <= 1e-9);
}

TEST_CASE("scale hint suppresses refinement where the integrand dips") {
    // (t-5)^2 (1 + sin(40t)/2) dips through zero at t = 5; without a scale
    // hint the per-panel relative test chases the oscillation down to the
    // dip's own tiny magnitude, with one it stops at the global scale.
    auto counter = std::make_shared<std::atomic<long>>(0);
    auto make = [counter]() {
        return PointwiseIntegrand([counter](double t) {
            counter->fetch_add(1, std::memory_order_relaxed);
            const double sq = (t - 5.0) * (t - 5.0);
            return cplx{sq * (1.0 + 0.5 * std::sin(40.0 * t)), 0.0};
        });
    };
    QuadratureConfig cfg;
    cfg.workers = 1;

    counter->store(0);
    PointwiseIntegrand plain = make();
    const IntegralResult no_hint = integrate(1.0, 9.0, cfg, plain);
    const long evals_no_hint = counter->load();

    counter->store(0);
    PointwiseIntegrand hinted = make();
    const IntegralResult with_hint = integrate(1.0, 9.0, cfg, hinted, nullptr, 16.0);
    const long evals_with_hint = counter->load();

    CHECK(evals_with_hint <= evals_no_hint);
    CHECK(std::abs(with_hint.value - no_hint.value) <=
          1e-4 * std::abs(no_hint.value));
}

TEST_CASE("pairwise sum matches long-double accumulation") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<cplx> xs(1000);
    long double re = 0.0, im = 0.0;
    for (auto& x : xs) {
        x = cplx{u(rng) * std::pow(10.0, 6.0 * u(rng)), u(rng)};
        re += x.real();
        im += x.imag();
    }
    const cplx s = pairwise_sum(xs);
    CHECK(std::abs(s.real() - static_cast<double>(re)) <=
          1e-12 * std::max(1.0, std::abs(static_cast<double>(re))));
    CHECK(std::abs(s.imag() - static_cast<double>(im)) <= 1e-12 * 1000);
    CHECK(pairwise_sum({}) == cplx{0.0, 0.0});
    const std::vector<cplx> one{cplx{3.5, -2.5}};
    CHECK(pairwise_sum(one) == one[0]);
}

TEST_CASE("configuration guards") {
    QuadratureConfig cfg;
    cfg.panel_width = 0.0;
    CHECK(code_of([&] { validate(cfg); }) == ErrorCode::invalid_input);
    cfg = {};
    cfg.nodes_per_panel = 1;
    CHECK(code_of([&] { validate(cfg); }) == ErrorCode::invalid_input);
    cfg = {};
    cfg.nodes_per_panel = 33;
    CHECK(code_of([&] { validate(cfg); }) == ErrorCode::invalid_input);
    cfg = {};
    cfg.refine_tol = 0.0;
    CHECK(code_of([&] { validate(cfg); }) == ErrorCode::invalid_input);
    cfg = {};
    cfg.max_halvings = -1;
    CHECK(code_of([&] { validate(cfg); }) == ErrorCode::invalid_input);
    cfg = {};
    cfg.workers = -1;
    CHECK(code_of([&] { validate(cfg); }) == ErrorCode::invalid_input);

    QuadratureConfig ok;
    PointwiseIntegrand pi([](double t) { return cplx{t, 0.0}; });
    CHECK(code_of([&] { integrate(3.0, 1.0, ok, pi); }) == ErrorCode::invalid_input);
}
