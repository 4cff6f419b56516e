#pragma once

#include <string>
#include <vector>

#include "encal/scenario.hpp"
#include "encal/simulate.hpp"

namespace encal {

struct ValidationRow {
    std::string metric;
    double x;
    double empirical;
    double lower;   // analytical lower bound (0 when the metric has none)
    double upper;   // analytical upper bound (1 when the metric has none)
    long replications;
    double se;      // binomial standard error of the empirical estimate
    bool asserted;  // informational rows never fail the report
    bool pass;      // empirical within [lower - 3se, upper + 3se]
};

struct ValidationReport {
    std::vector<std::string> header;  // provenance: defaults and seeds
    std::vector<ValidationRow> rows;

    bool all_pass() const;
};

// Runs the scenario's replications, estimates every empirical probability at
// the sampled times and x grid, and compares them against the analytical
// bounds. Replications execute on `threads` workers (0 = auto) and aggregate
// in replication order, so the report is identical for any worker count.
// Throws ModelMismatch when a generator violates its declared charging or
// discharging envelope beyond three standard errors.
ValidationReport validate(const Scenario& scenario, unsigned threads = 0);

// One replication (the master-seed stream) of the scenario's path and energy
// store, for trace dumps and debugging.
struct SingleRun {
    std::vector<sim::NodeTrace> chain;        // in path order
    std::optional<sim::EnergyTrace> energy;   // present when [discharge] is set
};

SingleRun simulate_once(const Scenario& scenario);

}  // namespace encal
