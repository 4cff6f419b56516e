#pragma once

#include <span>

#include "encal/models.hpp"

namespace encal {

// Two-sided bound on Prob{E(t) > x} for the residual energy E = C - C*.
// `conv_lower`/`conv_upper` hold the bounding-function convolutions; the
// shifts place them on the x axis.
struct EnergyBoundPair {
    PiecewiseFn conv_lower;  // max-plus convolution of the lower bounding pair
    PiecewiseFn conv_upper;  // min-plus convolution of the upper bounding pair
    double shift_lower;
    double shift_upper;

    double lower(double x) const;
    double upper(double x) const;
};

// Residual-energy bounds from a charging model and a discharging model.
// Throws DivergentDeconvolution when an envelope shift does not converge.
EnergyBoundPair residual_energy_bounds(const SecModel& sec, const SedModel& sed);

// Service amount supportable by a cumulative energy curve: per-segment
// integration of P^-1 applied to the segment rates.
Curve energy_to_service_curve(const Curve& c, const PowerRate& p);

// Energy consumed by a cumulative service curve: per-segment integration of P
// applied to the segment rates.
Curve service_to_energy_curve(const Curve& s, const PowerRate& p);

// Aggregate of sources charging one store simultaneously, valid under any
// dependence between them. Curves add; the lower bounding functions combine
// by max-plus convolution minus (N-1), the upper ones by min-plus convolution.
SecModel combine_sources(std::span<const SecModel> sources);

// Tighter aggregate valid when the sources are statistically independent:
// bounding functions combine through the Stieltjes convolution of their
// complementary distributions, folded pairwise left to right.
SecModel combine_sources_independent(std::span<const SecModel> sources);

// Lower bound on Prob{E(t) < x} when the node blindly executes an
// energy-oblivious schedule with strict service model `service`.
double energy_outage_bound(const SecModel& sec, const ServiceModel& service, const PowerRate& p,
                           double x);

}  // namespace encal
