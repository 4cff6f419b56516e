#pragma once

#include <optional>

#include "encal/algebra.hpp"

namespace encal {

// Monotone map from instantaneous service rate to power draw, forward(0) = 0.
// rate() is the generalized inverse inf{r : P(r) >= y}, which stays total over
// flat segments of the forward map.
class PowerRate {
public:
    static PowerRate identity();
    static PowerRate quadratic();
    static PowerRate table(PiecewiseFn forward);

    double power(double rate) const;
    double rate(double power) const;

    bool is_identity() const { return kind_ == Kind::Identity; }

private:
    enum class Kind { Identity, Quadratic, Table };
    explicit PowerRate(Kind kind) : kind_(kind) {}

    Kind kind_;
    std::optional<PiecewiseFn> forward_;
};

// Stochastic energy charging model: lower/upper envelope pair on the
// cumulative charged energy, each with its bounding function.
struct SecModel {
    SecModel(Curve lower_curve, BoundingFn lower_bound, Curve upper_curve,
             BoundingFn upper_bound);

    Curve alpha1;
    BoundingFn f1;
    Curve alpha2;
    BoundingFn f2;
};

// Stochastic energy discharging model: budget curve beta1 (upper) and floor
// curve beta2 (lower) on the cumulative consumed energy, coupled to charging
// through the (min,+) convolution with the charge process.
struct SedModel {
    SedModel(Curve budget_curve, BoundingFn upper_bound, Curve floor_curve,
             BoundingFn lower_bound);

    Curve beta1;
    BoundingFn g1;
    Curve beta2;
    BoundingFn g2;
};

// Virtual-backlog-centric stochastic arrival model.
struct ArrivalModel {
    Curve alpha;
    BoundingFn f;
};

enum class ServiceKind { Sc, Ssc };

// Stochastic service curve; `kind` selects which guarantees may consume it
// (sup-form over prefixes vs the per-interval strict form).
struct ServiceModel {
    Curve beta;
    BoundingFn g;
    ServiceKind kind = ServiceKind::Sc;
};

struct DelayBoundResult {
    double delay;
    double violation_prob;
    double threshold_x;
};

}  // namespace encal
