#pragma once

#include "encal/piecewise.hpp"

namespace encal {

inline double clamp_plus(double x) { return x > 0.0 ? x : 0.0; }
inline double clamp_one(double x) { return x < 1.0 ? x : 1.0; }

// Every operator below evaluates on the shared uniform grid of its inputs:
// step = the finer of the two grid steps, grid points k*step for k = 0..N with
// N*step covering the larger of the two last breakpoints. Results carry one
// breakpoint per grid point.

// (min,+) convolution  h(t) = min_{0<=s<=t} f(s) + g(t-s).
// Terminal slope of the result is min of the input slopes.
PiecewiseFn min_plus_convolve(const PiecewiseFn& f, const PiecewiseFn& g);

// (min,+) deconvolution  h(t) = max_{s in [0, S_max]} f(t+s) - g(s) with
// S_max = larger last breakpoint plus one grid step. Requires
// terminal_slope(f) <= terminal_slope(g); throws DivergentDeconvolution.
PiecewiseFn min_plus_deconvolve(const PiecewiseFn& f, const PiecewiseFn& g);

// Value of the deconvolution at a single t without materializing the curve.
double min_plus_deconvolve_at(const PiecewiseFn& f, const PiecewiseFn& g, double t);

// (max,+) convolution  h(t) = max_{0<=s<=t} f(s) + g(t-s).
PiecewiseFn max_plus_convolve(const PiecewiseFn& f, const PiecewiseFn& g);

// Maximum horizontal distance: sup over grid t of inf{tau >= 0 : f(t) <= g(t+tau)}.
// Requires g to eventually dominate f; throws UnboundedDistance otherwise.
double horizontal_distance(const PiecewiseFn& f, const PiecewiseFn& g);

// Non-negative wide-sense increasing function (arrival/service/charging curves).
class Curve {
public:
    explicit Curve(PiecewiseFn fn);

    static Curve affine(double rate, double offset, double step, double horizon);
    static Curve rate_latency(double rate, double latency, double step, double horizon);
    static Curve zero(double step);

    double operator()(double t) const { return fn_(t); }
    const PiecewiseFn& fn() const { return fn_; }

private:
    PiecewiseFn fn_;
};

// Non-negative wide-sense decreasing function bounding a violation probability.
// `prob` applies the [.]_1 clamp and treats any negative argument as the
// vacuous bound 1.
class BoundingFn {
public:
    explicit BoundingFn(PiecewiseFn fn);

    static BoundingFn exponential(double scale, double decay, double step, double horizon);
    static BoundingFn zero(double step);

    double prob(double x) const;
    double operator()(double x) const { return fn_(x); }
    const PiecewiseFn& fn() const { return fn_; }

private:
    PiecewiseFn fn_;
};

// Probability evaluation of a raw bounding-family function (e.g. the output of
// a convolution of bounding functions): vacuous 1 below zero, raw value above.
double eval_bounding(const PiecewiseFn& f, double x);

// Cumulative distribution function on the grid; values clamped to [0, 1].
class CdfFn {
public:
    explicit CdfFn(PiecewiseFn fn);

    // 1 - [f]_1 for a bounding function f (the CCDF complement).
    static CdfFn complement_of(const BoundingFn& f);

    double operator()(double x) const { return fn_(x); }
    const PiecewiseFn& fn() const { return fn_; }

private:
    PiecewiseFn fn_;
};

// Discrete Riemann-Stieltjes convolution
//   H(x) = sum_{k : y_k <= x} F(x - y_k) * (G(y_k) - G(y_{k-1}))
// over grid points y_k = k*step, with G(y_{-1}) taken as 0 so an atom of G at
// the origin contributes F(x) * G(0).
CdfFn stieltjes_convolve(const CdfFn& F, const CdfFn& G);

}  // namespace encal
