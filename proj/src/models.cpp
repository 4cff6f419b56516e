#include "encal/models.hpp"

#include <cmath>

#include "encal/errors.hpp"

namespace encal {

PowerRate PowerRate::identity() { return PowerRate(Kind::Identity); }

PowerRate PowerRate::quadratic() { return PowerRate(Kind::Quadratic); }

PowerRate PowerRate::table(PiecewiseFn forward) {
    if (std::fabs(forward.value_at_zero()) > 1e-12)
        throw SemanticError("power-rate table must map rate 0 to power 0");
    if (!forward.is_non_decreasing())
        throw SemanticError("power-rate table must be non-decreasing");
    PowerRate p(Kind::Table);
    p.forward_ = std::move(forward);
    return p;
}

double PowerRate::power(double rate) const {
    if (rate < 0.0) rate = 0.0;  // slope noise from finite differences
    switch (kind_) {
        case Kind::Identity: return rate;
        case Kind::Quadratic: return rate * rate;
        case Kind::Table: return (*forward_)(rate);
    }
    return 0.0;
}

double PowerRate::rate(double power) const {
    if (power < 0.0) power = 0.0;
    switch (kind_) {
        case Kind::Identity: return power;
        case Kind::Quadratic: return std::sqrt(power);
        case Kind::Table:
            try {
                return forward_->first_reach(power);
            } catch (const UnboundedDistance&) {
                throw NonInvertiblePower("requested power exceeds the range of the device map");
            }
    }
    return 0.0;
}

namespace {

void require_dominates(const Curve& lo, const Curve& hi, const char* what) {
    // envelope ordering checked on the union of breakpoints plus a tail probe
    for (const auto& p : lo.fn().points()) {
        double scale = std::max(1.0, std::fabs(p.v));
        if (p.v > hi(p.t) + 1e-9 * scale) throw SemanticError(what);
    }
    for (const auto& p : hi.fn().points()) {
        double scale = std::max(1.0, std::fabs(p.v));
        if (lo(p.t) > p.v + 1e-9 * scale) throw SemanticError(what);
    }
    double probe = std::max(lo.fn().last_t(), hi.fn().last_t()) + 1.0;
    if (lo(probe) > hi(probe) + 1e-9 * std::max(1.0, std::fabs(hi(probe))) &&
        lo.fn().terminal_slope() > hi.fn().terminal_slope())
        throw SemanticError(what);
}

}  // namespace

SecModel::SecModel(Curve lower_curve, BoundingFn lower_bound, Curve upper_curve,
                   BoundingFn upper_bound)
    : alpha1(std::move(lower_curve)),
      f1(std::move(lower_bound)),
      alpha2(std::move(upper_curve)),
      f2(std::move(upper_bound)) {
    require_dominates(alpha1, alpha2, "charging lower curve must not exceed the upper curve");
}

SedModel::SedModel(Curve budget_curve, BoundingFn upper_bound, Curve floor_curve,
                   BoundingFn lower_bound)
    : beta1(std::move(budget_curve)),
      g1(std::move(upper_bound)),
      beta2(std::move(floor_curve)),
      g2(std::move(lower_bound)) {
    require_dominates(beta2, beta1, "discharging floor curve must not exceed the budget curve");
}

}  // namespace encal
