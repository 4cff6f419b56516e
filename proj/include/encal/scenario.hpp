#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "encal/models.hpp"
#include "encal/simulate.hpp"

namespace encal {

// Function literal from the scenario grammar:
//   affine(rate, offset) | ratelatency(R, T) | exp(a, theta) | zero
//   | pwl[(t,v),...]
struct FnLiteral {
    enum class Kind { Affine, RateLatency, Exp, Zero, Pwl };
    Kind kind = Kind::Zero;
    std::vector<double> params;
    std::vector<std::pair<double, double>> pts;

    bool operator==(const FnLiteral&) const = default;
};

struct SourceCfg {
    std::string name;
    FnLiteral alpha1, f1, alpha2, f2;
    sim::GeneratorSpec generator;

    bool operator==(const SourceCfg&) const = default;
};

struct DischargeCfg {
    FnLiteral beta1, g1, beta2, g2;

    bool operator==(const DischargeCfg&) const = default;
};

struct FlowCfg {
    std::string name;
    FnLiteral alpha, f;
    sim::GeneratorSpec generator;

    bool operator==(const FlowCfg&) const = default;
};

struct NodeCfg {
    std::string name;
    FnLiteral beta, g;
    bool sc = true;
    bool ssc = false;
    std::string source;

    bool operator==(const NodeCfg&) const = default;
};

struct PowerCfg {
    enum class Kind { Identity, Quadratic, Pwl };
    Kind kind = Kind::Identity;
    std::vector<std::pair<double, double>> pts;

    bool operator==(const PowerCfg&) const = default;
};

struct AnalysisCfg {
    double grid_step = 1e-3;
    double horizon = 20.0;
    double xmax = 5.0;
    double xstep = 0.25;
    double sim_step = 1e-2;
    long replications = 10000;
    std::uint64_t seed = 42;
    std::vector<double> t_samples = {0.25, 0.5, 1.0};

    bool operator==(const AnalysisCfg&) const = default;
};

struct Scenario {
    AnalysisCfg analysis;
    PowerCfg power;
    std::vector<SourceCfg> sources;
    std::optional<DischargeCfg> discharge;
    std::vector<FlowCfg> flows;
    std::vector<NodeCfg> nodes;
    std::vector<std::string> path;

    bool operator==(const Scenario&) const = default;
};

// Parses the key-value scenario document. Throws ParseError (with line) on
// malformed text and SemanticError on unresolved references, class
// violations or out-of-range parameters.
Scenario parse_scenario(const std::string& text);

// Canonical text form; parse(serialize(s)) == s.
std::string serialize_scenario(const Scenario& scenario);

// --- materialized models ----------------------------------------------------

struct BuiltNode {
    std::string name;
    ServiceModel service;            // sc-kind model of the schedule
    std::optional<ServiceModel> strict;  // ssc variant when declared
    std::size_t source_index;
};

struct BuiltScenario {
    PowerRate power;
    std::vector<SecModel> sources;        // parallel to scenario.sources
    std::optional<SedModel> discharge;
    std::optional<ArrivalModel> flow;     // the single analyzed flow
    std::vector<BuiltNode> path_nodes;    // in path order
};

// Samples every literal onto the analysis grids and validates model classes.
BuiltScenario build_models(const Scenario& scenario);

// Literal sampling helpers (curves on [0, horizon], bounds on [0, xmax]).
Curve to_curve(const FnLiteral& lit, double step, double horizon);
BoundingFn to_bounding(const FnLiteral& lit, double step, double horizon);

}  // namespace encal
