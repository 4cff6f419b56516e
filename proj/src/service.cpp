#include "encal/service.hpp"

#include <stdexcept>

#include "encal/errors.hpp"

namespace encal {

ServiceModel effective_service(const ServiceModel& service, const SecModel& sec,
                               const PowerRate& p) {
    if (service.kind != ServiceKind::Sc)
        throw std::invalid_argument("effective service needs an sc-kind model");
    Curve supportable = energy_to_service_curve(sec.alpha2, p);
    Curve curve(pointwise_min(service.beta.fn(), supportable.fn()));
    BoundingFn bound(min_plus_convolve(service.g.fn(), sec.f2.fn()));
    return ServiceModel{std::move(curve), std::move(bound), ServiceKind::Sc};
}

DelayBoundResult delay_bound(const ArrivalModel& arrival, const ServiceModel& effective,
                             double x) {
    double delay = horizontal_distance(arrival.alpha.fn().shifted(x), effective.beta.fn());
    PiecewiseFn conv = min_plus_convolve(arrival.f.fn(), effective.g.fn());
    return DelayBoundResult{delay, clamp_one(eval_bounding(conv, x)), x};
}

double backlog_bound(const ArrivalModel& arrival, const ServiceModel& effective, double x) {
    double shift = min_plus_deconvolve_at(arrival.alpha.fn(), effective.beta.fn(), 0.0);
    PiecewiseFn conv = min_plus_convolve(arrival.f.fn(), effective.g.fn());
    return clamp_one(eval_bounding(conv, x - shift));
}

ServiceModel concatenate(std::span<const EnergyConstrainedNode> nodes) {
    if (nodes.empty()) throw std::invalid_argument("no nodes to concatenate");
    ServiceModel net = effective_service(nodes[0].service, nodes[0].energy, nodes[0].power);
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        ServiceModel eff = effective_service(nodes[i].service, nodes[i].energy, nodes[i].power);
        net = ServiceModel{Curve(min_plus_convolve(net.beta.fn(), eff.beta.fn())),
                           BoundingFn(min_plus_convolve(net.g.fn(), eff.g.fn())),
                           ServiceKind::Sc};
    }
    return net;
}

}  // namespace encal
