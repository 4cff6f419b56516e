#pragma once

// Brute-force reference implementations for the grid operators, written
// straight from the operator definitions. They share nothing with the library
// code paths except the documented grid rule (finer step, horizon = larger
// last breakpoint), so agreement is a real check.

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "encal/piecewise.hpp"

namespace oracle {

struct Grid {
    double step;
    std::size_t count;
};

inline Grid grid_of(const encal::PiecewiseFn& f, const encal::PiecewiseFn& g) {
    double step = std::min(f.grid_step(), g.grid_step());
    double horizon = std::max(f.last_t(), g.last_t());
    auto n = static_cast<std::size_t>(std::ceil(horizon / step - 1e-9));
    return {step, n + 1};
}

inline std::vector<double> min_plus_convolve(const encal::PiecewiseFn& f,
                                             const encal::PiecewiseFn& g) {
    Grid gr = grid_of(f, g);
    std::vector<double> out(gr.count);
    for (std::size_t t = 0; t < gr.count; ++t) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s <= t; ++s) {
            double v = f(static_cast<double>(s) * gr.step) +
                       g(static_cast<double>(t - s) * gr.step);
            best = std::min(best, v);
        }
        out[t] = best;
    }
    return out;
}

inline std::vector<double> max_plus_convolve(const encal::PiecewiseFn& f,
                                             const encal::PiecewiseFn& g) {
    Grid gr = grid_of(f, g);
    std::vector<double> out(gr.count);
    for (std::size_t t = 0; t < gr.count; ++t) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s <= t; ++s) {
            double v = f(static_cast<double>(s) * gr.step) +
                       g(static_cast<double>(t - s) * gr.step);
            best = std::max(best, v);
        }
        out[t] = best;
    }
    return out;
}

inline std::vector<double> min_plus_deconvolve(const encal::PiecewiseFn& f,
                                               const encal::PiecewiseFn& g) {
    Grid gr = grid_of(f, g);
    std::vector<double> out(gr.count);
    for (std::size_t t = 0; t < gr.count; ++t) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s <= gr.count; ++s) {  // one step past the horizon
            double sv = static_cast<double>(s) * gr.step;
            best = std::max(best, f(static_cast<double>(t) * gr.step + sv) - g(sv));
        }
        out[t] = best;
    }
    return out;
}

// Grid search over (t, tau) pairs for the maximum horizontal distance; tau is
// quantized, so results match the exact routine only up to one grid step.
inline double horizontal_distance(const encal::PiecewiseFn& f, const encal::PiecewiseFn& g,
                                  double tau_max) {
    Grid gr = grid_of(f, g);
    double best = 0.0;
    for (std::size_t t = 0; t < gr.count; ++t) {
        double tv = static_cast<double>(t) * gr.step;
        double need = f(tv);
        double tau = tau_max;
        for (double cand = 0.0; cand <= tau_max; cand += gr.step) {
            if (g(tv + cand) >= need) {
                tau = cand;
                break;
            }
        }
        best = std::max(best, tau);
    }
    return best;
}

// Random non-decreasing piecewise-linear function with f(0) = 0.
inline encal::PiecewiseFn random_curve(std::mt19937_64& rng, double step, double horizon,
                                       std::size_t max_breaks = 100) {
    std::uniform_int_distribution<std::size_t> nb(2, max_breaks);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::size_t n = nb(rng);
    std::vector<double> ts{0.0};
    for (std::size_t i = 1; i < n; ++i) ts.push_back(u(rng) * horizon);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    std::vector<encal::PiecewiseFn::Point> pts;
    double v = 0.0;
    for (double t : ts) {
        pts.push_back({t, v});
        v += u(rng) * 2.0;
    }
    return encal::PiecewiseFn(std::move(pts), u(rng) * 2.0, step);
}

// Random non-increasing non-negative piecewise-linear function.
inline encal::PiecewiseFn random_bounding(std::mt19937_64& rng, double step, double horizon,
                                          double start = 1.0) {
    std::uniform_int_distribution<std::size_t> nb(2, 20);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::size_t n = nb(rng);
    std::vector<double> ts{0.0};
    for (std::size_t i = 1; i < n; ++i) ts.push_back(u(rng) * horizon);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    std::vector<encal::PiecewiseFn::Point> pts;
    double v = start;
    for (double t : ts) {
        pts.push_back({t, v});
        v *= u(rng);
    }
    return encal::PiecewiseFn(std::move(pts), 0.0, step);
}

}  // namespace oracle
