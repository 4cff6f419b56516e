#include "encal/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "encal/errors.hpp"

namespace encal {

namespace {

constexpr double kZeroSlack = 1e-12;

void validate_points(const std::vector<PiecewiseFn::Point>& pts, double grid_step) {
    if (pts.empty()) throw std::invalid_argument("piecewise function needs at least one point");
    if (pts.front().t != 0.0) throw std::invalid_argument("first breakpoint must sit at t = 0");
    if (!(grid_step > 0.0)) throw std::invalid_argument("grid step must be positive");
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (!(pts[i].t > pts[i - 1].t))
            throw std::invalid_argument("breakpoints must be strictly increasing in t");
    }
    for (const auto& p : pts) {
        if (!std::isfinite(p.t) || !std::isfinite(p.v))
            throw std::invalid_argument("breakpoints must be finite");
    }
}

}  // namespace

PiecewiseFn::PiecewiseFn(std::vector<Point> points, double terminal_slope, double grid_step)
    : points_(std::move(points)), terminal_slope_(terminal_slope), grid_step_(grid_step) {
    validate_points(points_, grid_step_);
    if (std::isnan(terminal_slope_))
        throw std::invalid_argument("terminal slope must not be NaN");
}

PiecewiseFn PiecewiseFn::affine(double rate, double offset, double step, double horizon) {
    auto n = static_cast<std::size_t>(std::ceil(horizon / step - 1e-9));
    std::vector<Point> pts;
    pts.reserve(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        double t = static_cast<double>(k) * step;
        pts.push_back({t, rate * t + offset});
    }
    return PiecewiseFn(std::move(pts), rate, step);
}

PiecewiseFn PiecewiseFn::rate_latency(double rate, double latency, double step, double horizon) {
    auto n = static_cast<std::size_t>(std::ceil(horizon / step - 1e-9));
    std::vector<Point> pts;
    pts.reserve(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        double t = static_cast<double>(k) * step;
        pts.push_back({t, rate * std::max(t - latency, 0.0)});
    }
    return PiecewiseFn(std::move(pts), rate, step);
}

PiecewiseFn PiecewiseFn::exponential(double scale, double decay, double step, double horizon) {
    auto n = static_cast<std::size_t>(std::ceil(horizon / step - 1e-9));
    std::vector<Point> pts;
    pts.reserve(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        double t = static_cast<double>(k) * step;
        pts.push_back({t, scale * std::exp(-decay * t)});
    }
    return PiecewiseFn(std::move(pts), 0.0, step);
}

PiecewiseFn PiecewiseFn::constant(double value, double step) {
    return PiecewiseFn({{0.0, value}}, 0.0, step);
}

PiecewiseFn PiecewiseFn::zero(double step) { return constant(0.0, step); }

PiecewiseFn PiecewiseFn::from_samples(const std::vector<double>& values, double step,
                                      double terminal_slope) {
    std::vector<Point> pts;
    pts.reserve(values.size());
    for (std::size_t k = 0; k < values.size(); ++k)
        pts.push_back({static_cast<double>(k) * step, values[k]});
    return PiecewiseFn(std::move(pts), terminal_slope, step);
}

double PiecewiseFn::operator()(double t) const {
    if (t < 0.0) {
        if (t < -kZeroSlack) throw std::invalid_argument("evaluation at negative time");
        t = 0.0;
    }
    if (t >= points_.back().t) {
        if (t == points_.back().t) return points_.back().v;
        if (std::isinf(terminal_slope_))
            throw std::invalid_argument("cannot extrapolate with infinite terminal slope");
        return points_.back().v + terminal_slope_ * (t - points_.back().t);
    }
    // first point with p.t > t, predecessor starts the segment containing t
    auto it = std::upper_bound(points_.begin(), points_.end(), t,
                               [](double x, const Point& p) { return x < p.t; });
    const Point& hi = *it;
    const Point& lo = *(it - 1);
    if (t == lo.t) return lo.v;
    double w = (t - lo.t) / (hi.t - lo.t);
    return lo.v + w * (hi.v - lo.v);
}

bool PiecewiseFn::is_non_decreasing(double slack) const {
    for (std::size_t i = 1; i < points_.size(); ++i) {
        double scale = std::max({1.0, std::fabs(points_[i].v), std::fabs(points_[i - 1].v)});
        if (points_[i].v < points_[i - 1].v - slack * scale) return false;
    }
    return terminal_slope_ >= -slack;
}

bool PiecewiseFn::is_non_increasing(double slack) const {
    for (std::size_t i = 1; i < points_.size(); ++i) {
        double scale = std::max({1.0, std::fabs(points_[i].v), std::fabs(points_[i - 1].v)});
        if (points_[i].v > points_[i - 1].v + slack * scale) return false;
    }
    return terminal_slope_ <= slack;
}

PiecewiseFn PiecewiseFn::shifted(double dv) const {
    std::vector<Point> pts = points_;
    for (auto& p : pts) p.v += dv;
    return PiecewiseFn(std::move(pts), terminal_slope_, grid_step_);
}

PiecewiseFn PiecewiseFn::complemented(double c) const {
    std::vector<Point> pts = points_;
    for (auto& p : pts) p.v = c - p.v;
    return PiecewiseFn(std::move(pts), -terminal_slope_, grid_step_);
}

double PiecewiseFn::first_reach(double v) const {
    if (points_.front().v >= v) return 0.0;
    for (std::size_t i = 1; i < points_.size(); ++i) {
        if (points_[i].v >= v) {
            const Point& lo = points_[i - 1];
            const Point& hi = points_[i];
            if (hi.v == lo.v) return hi.t;  // flat segment that already sits at v
            return lo.t + (v - lo.v) * (hi.t - lo.t) / (hi.v - lo.v);
        }
    }
    if (terminal_slope_ > 0.0 && !std::isinf(terminal_slope_))
        return points_.back().t + (v - points_.back().v) / terminal_slope_;
    throw UnboundedDistance("function never reaches the requested level");
}

namespace {

// Sorted union of breakpoint abscissae, truncated to [0, max last t].
std::vector<double> merged_ts(const PiecewiseFn& f, const PiecewiseFn& g) {
    std::vector<double> ts;
    ts.reserve(f.points().size() + g.points().size());
    for (const auto& p : f.points()) ts.push_back(p.t);
    for (const auto& p : g.points()) ts.push_back(p.t);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    return ts;
}

enum class Extremum { Min, Max };

PiecewiseFn pointwise_extremum(const PiecewiseFn& f, const PiecewiseFn& g, Extremum which) {
    const bool lower = which == Extremum::Min;
    std::vector<double> ts = merged_ts(f, g);
    std::vector<PiecewiseFn::Point> pts;
    pts.reserve(ts.size() + 8);

    auto pick = [&](double a, double b) { return lower ? std::min(a, b) : std::max(a, b); };

    double prev_t = ts.front();
    double prev_f = f(prev_t), prev_g = g(prev_t);
    pts.push_back({prev_t, pick(prev_f, prev_g)});
    for (std::size_t i = 1; i < ts.size(); ++i) {
        double t = ts[i];
        double fv = f(t), gv = g(t);
        double d0 = prev_f - prev_g, d1 = fv - gv;
        if ((d0 < 0.0 && d1 > 0.0) || (d0 > 0.0 && d1 < 0.0)) {
            // the segments cross strictly inside (prev_t, t); solve the lerp
            double tc = prev_t + (t - prev_t) * (-d0) / (d1 - d0);
            if (tc > prev_t && tc < t) {
                double fc = f(tc);
                pts.push_back({tc, fc});  // f(tc) == g(tc) up to rounding
            }
        }
        pts.push_back({t, pick(fv, gv)});
        prev_t = t;
        prev_f = fv;
        prev_g = gv;
    }

    // Crossing beyond the last breakpoint: both sides are affine there.
    double T = ts.back();
    double d0 = f(T) - g(T);
    double ds = f.terminal_slope() - g.terminal_slope();
    if (ds != 0.0 && d0 != 0.0 && ((d0 < 0.0) != (ds < 0.0))) {
        double tc = T - d0 / ds;
        if (tc > T) pts.push_back({tc, f(tc)});
    }

    // Whichever side lies on the chosen envelope beyond the final point
    // dictates the terminal slope; ties resolve to the matching extremum.
    double probe = pts.back().t + 1.0;
    double fv = f(probe), gv = g(probe);
    double slope;
    if (fv == gv)
        slope = lower ? std::min(f.terminal_slope(), g.terminal_slope())
                      : std::max(f.terminal_slope(), g.terminal_slope());
    else if ((fv < gv) == lower)
        slope = f.terminal_slope();
    else
        slope = g.terminal_slope();

    // drop accidental duplicates produced by crossings landing on breakpoints
    std::vector<PiecewiseFn::Point> dedup;
    dedup.reserve(pts.size());
    for (const auto& p : pts) {
        if (!dedup.empty() && p.t <= dedup.back().t) continue;
        dedup.push_back(p);
    }
    return PiecewiseFn(std::move(dedup), slope, std::min(f.grid_step(), g.grid_step()));
}

}  // namespace

PiecewiseFn add(const PiecewiseFn& f, const PiecewiseFn& g) {
    std::vector<double> ts = merged_ts(f, g);
    std::vector<PiecewiseFn::Point> pts;
    pts.reserve(ts.size());
    for (double t : ts) pts.push_back({t, f(t) + g(t)});
    return PiecewiseFn(std::move(pts), f.terminal_slope() + g.terminal_slope(),
                       std::min(f.grid_step(), g.grid_step()));
}

PiecewiseFn pointwise_min(const PiecewiseFn& f, const PiecewiseFn& g) {
    return pointwise_extremum(f, g, Extremum::Min);
}

PiecewiseFn pointwise_max(const PiecewiseFn& f, const PiecewiseFn& g) {
    return pointwise_extremum(f, g, Extremum::Max);
}

PiecewiseFn clamp_below(const PiecewiseFn& f, double floor) {
    return pointwise_max(f, PiecewiseFn::constant(floor, f.grid_step()));
}

PiecewiseFn clamp_above(const PiecewiseFn& f, double ceiling) {
    return pointwise_min(f, PiecewiseFn::constant(ceiling, f.grid_step()));
}

}  // namespace encal
