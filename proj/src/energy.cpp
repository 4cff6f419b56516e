#include "encal/energy.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "encal/errors.hpp"

namespace encal {

double EnergyBoundPair::lower(double x) const {
    return clamp_plus(eval_bounding(conv_lower, x - shift_lower) - 1.0);
}

double EnergyBoundPair::upper(double x) const {
    return clamp_one(eval_bounding(conv_upper, x - shift_upper));
}

EnergyBoundPair residual_energy_bounds(const SecModel& sec, const SedModel& sed) {
    double shift_lower = min_plus_deconvolve_at(sec.alpha1.fn(), sed.beta1.fn(), 0.0);
    double shift_upper = min_plus_deconvolve_at(sec.alpha2.fn(), sed.beta2.fn(), 0.0);
    return EnergyBoundPair{max_plus_convolve(sec.f1.fn(), sed.g1.fn()),
                           min_plus_convolve(sec.f2.fn(), sed.g2.fn()), shift_lower, shift_upper};
}

namespace {

// Maps each linear segment's rate through `via` and re-integrates, preserving
// the breakpoint abscissae.
Curve transform_segments(const Curve& c, const PowerRate& p, bool inverse) {
    const auto& pts = c.fn().points();
    auto via = [&](double rate) { return inverse ? p.rate(rate) : p.power(rate); };
    std::vector<PiecewiseFn::Point> out;
    out.reserve(pts.size());
    double acc = 0.0;
    out.push_back({0.0, 0.0});
    for (std::size_t i = 1; i < pts.size(); ++i) {
        double len = pts[i].t - pts[i - 1].t;
        double rate = (pts[i].v - pts[i - 1].v) / len;
        acc += via(rate) * len;
        out.push_back({pts[i].t, acc});
    }
    double slope = via(c.fn().terminal_slope());
    return Curve(PiecewiseFn(std::move(out), slope, c.fn().grid_step()));
}

}  // namespace

Curve energy_to_service_curve(const Curve& c, const PowerRate& p) {
    return transform_segments(c, p, /*inverse=*/true);
}

Curve service_to_energy_curve(const Curve& s, const PowerRate& p) {
    return transform_segments(s, p, /*inverse=*/false);
}

namespace {

Curve sum_curves(std::span<const SecModel> sources, bool upper) {
    PiecewiseFn acc = upper ? sources[0].alpha2.fn() : sources[0].alpha1.fn();
    for (std::size_t i = 1; i < sources.size(); ++i)
        acc = add(acc, upper ? sources[i].alpha2.fn() : sources[i].alpha1.fn());
    return Curve(std::move(acc));
}

}  // namespace

SecModel combine_sources(std::span<const SecModel> sources) {
    if (sources.empty()) throw std::invalid_argument("no sources to combine");
    if (sources.size() == 1) return sources[0];

    PiecewiseFn lower = sources[0].f1.fn();
    PiecewiseFn upper = sources[0].f2.fn();
    for (std::size_t i = 1; i < sources.size(); ++i) {
        lower = max_plus_convolve(lower, sources[i].f1.fn());
        upper = min_plus_convolve(upper, sources[i].f2.fn());
    }
    double excess = static_cast<double>(sources.size()) - 1.0;
    lower = clamp_below(lower.shifted(-excess), 0.0);

    return SecModel(sum_curves(sources, false), BoundingFn(std::move(lower)),
                    sum_curves(sources, true), BoundingFn(std::move(upper)));
}

SecModel combine_sources_independent(std::span<const SecModel> sources) {
    if (sources.empty()) throw std::invalid_argument("no sources to combine");
    if (sources.size() == 1) return sources[0];

    auto fold = [&](auto&& pick) {
        CdfFn acc = CdfFn::complement_of(pick(sources[0]));
        for (std::size_t i = 1; i < sources.size(); ++i)
            acc = stieltjes_convolve(acc, CdfFn::complement_of(pick(sources[i])));
        return BoundingFn(clamp_below(acc.fn().complemented(1.0), 0.0));
    };
    BoundingFn lower = fold([](const SecModel& s) -> const BoundingFn& { return s.f1; });
    BoundingFn upper = fold([](const SecModel& s) -> const BoundingFn& { return s.f2; });

    return SecModel(sum_curves(sources, false), std::move(lower), sum_curves(sources, true),
                    std::move(upper));
}

double energy_outage_bound(const SecModel& sec, const ServiceModel& service, const PowerRate& p,
                           double x) {
    if (service.kind != ServiceKind::Ssc)
        throw std::invalid_argument("energy outage bound needs a strict service model");
    Curve budget = service_to_energy_curve(service.beta, p);
    double shift = min_plus_deconvolve_at(sec.alpha2.fn(), budget.fn(), 0.0);
    PiecewiseFn conv = min_plus_convolve(sec.f2.fn(), service.g.fn());
    return clamp_plus(1.0 - clamp_one(eval_bounding(conv, x - shift)));
}

}  // namespace encal
