#include "encal/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "encal/errors.hpp"
#include "parallel.hpp"

namespace encal {

namespace {

// Probability bounds evaluated slightly left of zero come from float noise in
// deconvolution shifts, not from a genuinely vacuous argument.
constexpr double kNegativeSlack = 1e-9;

constexpr double kSlopeSlack = 1e-9;

struct OpGrid {
    double step;
    std::size_t count;  // grid points k*step for k in [0, count)
};

OpGrid common_grid(const PiecewiseFn& f, const PiecewiseFn& g) {
    double step = std::min(f.grid_step(), g.grid_step());
    double horizon = std::max(f.last_t(), g.last_t());
    auto n = static_cast<std::size_t>(std::ceil(horizon / step - 1e-9));
    return {step, n + 1};
}

std::vector<double> sample(const PiecewiseFn& f, double step, std::size_t count) {
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k) out[k] = f(static_cast<double>(k) * step);
    return out;
}

bool slope_exceeds(double a, double b) {
    return a > b + kSlopeSlack * std::max({1.0, std::fabs(a), std::fabs(b)});
}

}  // namespace

PiecewiseFn min_plus_convolve(const PiecewiseFn& f, const PiecewiseFn& g) {
    auto [step, n] = common_grid(f, g);
    std::vector<double> fs = sample(f, step, n);
    std::vector<double> gs = sample(g, step, n);
    std::vector<double> h(n);
    detail::parallel_chunks(n, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t t = lo; t < hi; ++t) {
            double best = fs[0] + gs[t];
            for (std::size_t s = 1; s <= t; ++s) best = std::min(best, fs[s] + gs[t - s]);
            h[t] = best;
        }
    });
    return PiecewiseFn::from_samples(h, step,
                                     std::min(f.terminal_slope(), g.terminal_slope()));
}

PiecewiseFn max_plus_convolve(const PiecewiseFn& f, const PiecewiseFn& g) {
    auto [step, n] = common_grid(f, g);
    std::vector<double> fs = sample(f, step, n);
    std::vector<double> gs = sample(g, step, n);
    std::vector<double> h(n);
    detail::parallel_chunks(n, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t t = lo; t < hi; ++t) {
            double best = fs[0] + gs[t];
            for (std::size_t s = 1; s <= t; ++s) best = std::max(best, fs[s] + gs[t - s]);
            h[t] = best;
        }
    });
    return PiecewiseFn::from_samples(h, step,
                                     std::max(f.terminal_slope(), g.terminal_slope()));
}

double min_plus_deconvolve_at(const PiecewiseFn& f, const PiecewiseFn& g, double t) {
    if (slope_exceeds(f.terminal_slope(), g.terminal_slope()))
        throw DivergentDeconvolution("terminal slope of f exceeds terminal slope of g");
    auto [step, n] = common_grid(f, g);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k <= n; ++k) {  // one grid step past the last breakpoint
        double s = static_cast<double>(k) * step;
        best = std::max(best, f(t + s) - g(s));
    }
    return best;
}

PiecewiseFn min_plus_deconvolve(const PiecewiseFn& f, const PiecewiseFn& g) {
    if (slope_exceeds(f.terminal_slope(), g.terminal_slope()))
        throw DivergentDeconvolution("terminal slope of f exceeds terminal slope of g");
    auto [step, n] = common_grid(f, g);
    std::vector<double> h(n);
    detail::parallel_chunks(n, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t t = lo; t < hi; ++t) {
            double tt = static_cast<double>(t) * step;
            double best = -std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k <= n; ++k) {
                double s = static_cast<double>(k) * step;
                best = std::max(best, f(tt + s) - g(s));
            }
            h[t] = best;
        }
    });
    return PiecewiseFn::from_samples(h, step, f.terminal_slope());
}

double horizontal_distance(const PiecewiseFn& f, const PiecewiseFn& g) {
    if (slope_exceeds(f.terminal_slope(), g.terminal_slope()))
        throw UnboundedDistance("terminal slope of f exceeds terminal slope of g");
    auto [step, n] = common_grid(f, g);
    // Beyond the last breakpoint both sides are affine and slope(f) <= slope(g),
    // so the needed shift is non-increasing there; the grid sup is attained on
    // [0, horizon].
    double best = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double t = static_cast<double>(k) * step;
        double u = g.first_reach(f(t));
        best = std::max(best, u - t);
    }
    return std::max(best, 0.0);
}

Curve::Curve(PiecewiseFn fn) : fn_(std::move(fn)) {
    if (fn_.value_at_zero() < -1e-12) throw SemanticError("curve must be non-negative at 0");
    if (!fn_.is_non_decreasing()) throw SemanticError("curve must be non-decreasing");
}

Curve Curve::affine(double rate, double offset, double step, double horizon) {
    return Curve(PiecewiseFn::affine(rate, offset, step, horizon));
}

Curve Curve::rate_latency(double rate, double latency, double step, double horizon) {
    return Curve(PiecewiseFn::rate_latency(rate, latency, step, horizon));
}

Curve Curve::zero(double step) { return Curve(PiecewiseFn::zero(step)); }

BoundingFn::BoundingFn(PiecewiseFn fn) : fn_(std::move(fn)) {
    if (!fn_.is_non_increasing()) throw SemanticError("bounding function must be non-increasing");
    for (const auto& p : fn_.points())
        if (p.v < -1e-12) throw SemanticError("bounding function must be non-negative");
}

BoundingFn BoundingFn::exponential(double scale, double decay, double step, double horizon) {
    return BoundingFn(PiecewiseFn::exponential(scale, decay, step, horizon));
}

BoundingFn BoundingFn::zero(double step) { return BoundingFn(PiecewiseFn::zero(step)); }

double BoundingFn::prob(double x) const {
    if (x < -kNegativeSlack) return 1.0;
    return clamp_one(fn_(std::max(x, 0.0)));
}

double eval_bounding(const PiecewiseFn& f, double x) {
    if (x < -kNegativeSlack) return 1.0;
    return f(std::max(x, 0.0));
}

CdfFn::CdfFn(PiecewiseFn fn) : fn_(std::move(fn)) {
    if (!fn_.is_non_decreasing()) throw SemanticError("cdf must be non-decreasing");
    if (fn_.value_at_zero() < -1e-12) throw SemanticError("cdf must be non-negative");
    if (fn_.last_v() > 1.0 + 1e-12) throw SemanticError("cdf must not exceed 1");
}

CdfFn CdfFn::complement_of(const BoundingFn& f) {
    return CdfFn(clamp_above(f.fn(), 1.0).complemented(1.0));
}

CdfFn stieltjes_convolve(const CdfFn& F, const CdfFn& G) {
    auto [step, n] = common_grid(F.fn(), G.fn());
    std::vector<double> fs = sample(F.fn(), step, n);
    std::vector<double> gs = sample(G.fn(), step, n);
    std::vector<double> h(n);
    detail::parallel_chunks(n, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            double acc = fs[i] * gs[0];  // mass of G at the origin
            for (std::size_t k = 1; k <= i; ++k) acc += fs[i - k] * (gs[k] - gs[k - 1]);
            h[i] = std::min(std::max(acc, 0.0), 1.0);
        }
    });
    return CdfFn(PiecewiseFn::from_samples(h, step, 0.0));
}

}  // namespace encal
