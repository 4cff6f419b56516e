#pragma once

#include <span>

#include "encal/energy.hpp"
#include "encal/models.hpp"

namespace encal {

// One tandem stage: an energy-oblivious service model, the charging model of
// the source powering it, and the device power-rate map.
struct EnergyConstrainedNode {
    ServiceModel service;
    SecModel energy;
    PowerRate power;
};

// Service actually available once the energy constraint is applied:
// bounding function g (x) conv f2, curve beta min the charge-supportable
// service curve. Requires an sc-kind service model.
ServiceModel effective_service(const ServiceModel& service, const SecModel& sec,
                               const PowerRate& p);

// Delay bound: the maximum horizontal distance between alpha + x and the
// effective curve, violated with probability at most (f conv g_eff)(x).
DelayBoundResult delay_bound(const ArrivalModel& arrival, const ServiceModel& effective,
                             double x);

// Backlog bound: Prob{B(t) > x} <= (f conv g_eff)(x - (alpha dec beta_eff)(0)).
double backlog_bound(const ArrivalModel& arrival, const ServiceModel& effective, double x);

// Equivalent single service model of a tandem of energy-constrained nodes:
// per-node effective models folded with (min,+) convolution.
ServiceModel concatenate(std::span<const EnergyConstrainedNode> nodes);

}  // namespace encal
