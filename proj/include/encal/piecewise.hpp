#pragma once

#include <cstddef>
#include <vector>

namespace encal {

// Piecewise-linear real function on [0, inf).
//
// The function is defined by breakpoints with strictly increasing abscissae
// (the first one at t = 0), linear interpolation between them and linear
// extrapolation with `terminal_slope` beyond the last one. `grid_step` records
// the resolution the instance was sampled at and drives the grid every
// operator in algebra.hpp evaluates on.
//
// Values are immutable after construction; evaluation is const and
// re-entrant, so instances can be shared freely across threads.
class PiecewiseFn {
public:
    struct Point {
        double t;
        double v;
    };

    PiecewiseFn(std::vector<Point> points, double terminal_slope, double grid_step);

    // Closed-form families sampled onto the uniform grid {0, step, 2*step, ...}
    // up to `horizon`.
    static PiecewiseFn affine(double rate, double offset, double step, double horizon);
    static PiecewiseFn rate_latency(double rate, double latency, double step, double horizon);
    static PiecewiseFn exponential(double scale, double decay, double step, double horizon);
    static PiecewiseFn constant(double value, double step);
    static PiecewiseFn zero(double step);

    // Builds from per-grid-point samples values[k] = f(k*step).
    static PiecewiseFn from_samples(const std::vector<double>& values, double step,
                                    double terminal_slope);

    double operator()(double t) const;

    double grid_step() const { return grid_step_; }
    double terminal_slope() const { return terminal_slope_; }
    double last_t() const { return points_.back().t; }
    double last_v() const { return points_.back().v; }
    double value_at_zero() const { return points_.front().v; }
    const std::vector<Point>& points() const { return points_; }

    bool is_non_decreasing(double slack = 1e-12) const;
    bool is_non_increasing(double slack = 1e-12) const;

    // f + c
    PiecewiseFn shifted(double dv) const;
    // c - f
    PiecewiseFn complemented(double c) const;

    // Smallest u >= 0 with f(u) >= v, resolved exactly on the linear segments.
    // Requires a non-decreasing function; throws UnboundedDistance when the
    // function never reaches v.
    double first_reach(double v) const;

private:
    std::vector<Point> points_;
    double terminal_slope_;
    double grid_step_;
};

// Pointwise sum on the merged breakpoint set; terminal slopes add.
PiecewiseFn add(const PiecewiseFn& f, const PiecewiseFn& g);

// Pointwise min/max with crossing points inserted exactly.
PiecewiseFn pointwise_min(const PiecewiseFn& f, const PiecewiseFn& g);
PiecewiseFn pointwise_max(const PiecewiseFn& f, const PiecewiseFn& g);

// max(f, floor) / min(f, ceiling) against a constant level.
PiecewiseFn clamp_below(const PiecewiseFn& f, double floor);
PiecewiseFn clamp_above(const PiecewiseFn& f, double ceiling);

}  // namespace encal
