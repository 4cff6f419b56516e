#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "encal/models.hpp"

namespace encal::sim {

// Cumulative sample path on a uniform step grid; values[0] = 0 and the
// sequence is non-decreasing.
struct Trace {
    double step = 0.0;
    std::vector<double> values;

    double horizon() const { return step * static_cast<double>(values.size() - 1); }
    double at(std::size_t k) const { return values[k]; }
};

// --- trace generators -------------------------------------------------------

struct ConstantSpec {
    double rate;

    bool operator==(const ConstantSpec&) const = default;
};

// Two-state Markov source: emits at `rate` while on; sojourn times are
// geometric with the given means (in time units).
struct OnOffSpec {
    double rate;
    double mean_on;
    double mean_off;

    bool operator==(const OnOffSpec&) const = default;
};

// Poisson(event_rate) arrivals of exponential(mean_jump) increments per step.
struct CompoundPoissonSpec {
    double event_rate;
    double mean_jump;

    bool operator==(const CompoundPoissonSpec&) const = default;
};

// Constant rate plus uniform per-step noise in [-amplitude, amplitude].
struct JitterSpec {
    double rate;
    double amplitude;

    bool operator==(const JitterSpec&) const = default;
};

using GeneratorSpec = std::variant<ConstantSpec, OnOffSpec, CompoundPoissonSpec, JitterSpec>;

// Long-run mean rate implied by the spec parameters.
double mean_rate(const GeneratorSpec& spec);

// Throws InvalidSpec when parameters could produce negative increments.
void validate_spec(const GeneratorSpec& spec);

// Deterministic derivation of per-replication / per-role RNG streams from one
// master seed (splitmix64 of master xor golden-ratio multiple of index+1), so
// parallel and serial runs draw identical randomness.
std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index);

Trace generate_trace(const GeneratorSpec& spec, double step, double horizon, std::uint64_t seed);

// --- single node ------------------------------------------------------------

// One simulated node history. `available` is the cumulative service the node
// could deliver: min of the scheduled service and the charge-supportable
// service. Departures additionally never outrun the stored energy.
struct NodeTrace {
    Trace arrival;
    Trace departure;
    Trace charged;
    Trace consumed;
    Trace available;
    std::vector<double> energy;   // charged - consumed
    std::vector<double> backlog;  // arrival - departure
    std::vector<double> delays;   // virtual FIFO delay per step; +inf if censored
};

// FIFO fluid server with an energy-oblivious cumulative schedule, powered by
// the given charging trace through the power-rate map.
NodeTrace run_node(const Trace& arrival, const Trace& charging, const Curve& schedule,
                   const PowerRate& p);

// --- standalone energy store -------------------------------------------------

// Charging trace drained greedily by a fixed energy budget:
// consumed(t) = min((C conv budget)(t), C(t)) with the convolution evaluated
// over the step grid.
struct EnergyTrace {
    Trace charged;
    Trace consumed;
    std::vector<double> energy;
};

EnergyTrace run_energy_system(const Trace& charging, const Curve& budget);

// --- tandem -----------------------------------------------------------------

struct TandemNodeConfig {
    GeneratorSpec charging;
    Curve schedule;
    PowerRate power;
};

// Per replication, node i+1 is fed the departures of node i. Returns
// chains[replication][node]; replication seeds derive from `seed` via
// substream_seed, so results are reproducible and order-independent.
std::vector<std::vector<NodeTrace>> run_tandem(std::span<const TandemNodeConfig> nodes,
                                               const GeneratorSpec& flow, double step,
                                               double horizon, int replications,
                                               std::uint64_t seed);

// --- statistics --------------------------------------------------------------

struct Ccdf {
    std::vector<double> prob;
    std::vector<double> se;
};

// Empirical Prob{sample > x} with binomial standard errors, per grid point.
Ccdf empirical_ccdf(std::span<const double> samples, std::span<const double> xs);

}  // namespace encal::sim
