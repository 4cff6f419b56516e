#include "encal/commands.hpp"

#include <filesystem>

#include "encal/csv.hpp"
#include "encal/energy.hpp"
#include "encal/service.hpp"

namespace encal {

namespace {

namespace fs = std::filesystem;

std::string prep_dir(const std::string& outdir) {
    fs::create_directories(outdir);
    return (fs::path(outdir) / "").string();
}

std::vector<double> xgrid(const AnalysisCfg& a) {
    std::vector<double> xs;
    for (double x = 0.0; x <= a.xmax + 1e-9; x += a.xstep) xs.push_back(x);
    return xs;
}

struct BoundRow {
    std::string metric;
    double x;
    double value;
};

std::vector<BoundRow> bound_rows(const Scenario& sc, const BuiltScenario& built) {
    std::vector<BoundRow> rows;
    std::vector<double> xs = xgrid(sc.analysis);

    if (built.sources.size() > 1) {
        SecModel dep = combine_sources(built.sources);
        SecModel ind = combine_sources_independent(built.sources);
        for (double x : xs) rows.push_back({"sources.f1.dependent", x, dep.f1(x)});
        for (double x : xs) rows.push_back({"sources.f2.dependent", x, dep.f2(x)});
        for (double x : xs) rows.push_back({"sources.f1.independent", x, ind.f1(x)});
        for (double x : xs) rows.push_back({"sources.f2.independent", x, ind.f2(x)});
    }

    if (built.discharge) {
        SecModel combined = combine_sources(built.sources);
        EnergyBoundPair pair = residual_energy_bounds(combined, *built.discharge);
        for (double x : xs) rows.push_back({"energy.lower", x, pair.lower(x)});
        for (double x : xs) rows.push_back({"energy.upper", x, pair.upper(x)});
    }

    if (built.flow && !built.path_nodes.empty()) {
        std::vector<EnergyConstrainedNode> nodes;
        for (const auto& n : built.path_nodes)
            nodes.push_back({n.service, built.sources[n.source_index], built.power});

        for (std::size_t i = 0; i < built.path_nodes.size(); ++i) {
            const auto& n = built.path_nodes[i];
            std::string prefix = "node." + n.name + ".";
            if (n.strict) {
                for (double x : xs)
                    rows.push_back({prefix + "outage_lb", x,
                                    energy_outage_bound(built.sources[n.source_index], *n.strict,
                                                        built.power, x)});
            }
            ServiceModel eff =
                effective_service(n.service, built.sources[n.source_index], built.power);
            for (double x : xs) {
                DelayBoundResult d = delay_bound(*built.flow, eff, x);
                rows.push_back({prefix + "delay_h", x, d.delay});
                rows.push_back({prefix + "delay_prob", x, d.violation_prob});
            }
            for (double x : xs)
                rows.push_back({prefix + "backlog", x, backlog_bound(*built.flow, eff, x)});
        }

        ServiceModel net = concatenate(nodes);
        for (double x : xs) {
            DelayBoundResult d = delay_bound(*built.flow, net, x);
            rows.push_back({"path.delay_h", x, d.delay});
            rows.push_back({"path.delay_prob", x, d.violation_prob});
        }
        for (double x : xs)
            rows.push_back({"path.backlog", x, backlog_bound(*built.flow, net, x)});
    }
    return rows;
}

void write_node_trace(const std::string& path, const sim::NodeTrace& nt) {
    CsvWriter csv(path);
    csv.raw_row("t,A,A_star,C,C_star,E,B");
    for (std::size_t k = 0; k < nt.arrival.values.size(); ++k) {
        csv.begin_row();
        csv.field(static_cast<double>(k) * nt.arrival.step);
        csv.field(nt.arrival.values[k]);
        csv.field(nt.departure.values[k]);
        csv.field(nt.charged.values[k]);
        csv.field(nt.consumed.values[k]);
        csv.field(nt.energy[k]);
        csv.field(nt.backlog[k]);
        csv.end_row();
    }
}

void write_energy_trace(const std::string& path, const sim::EnergyTrace& et) {
    CsvWriter csv(path);
    csv.raw_row("t,C,C_star,E");
    for (std::size_t k = 0; k < et.charged.values.size(); ++k) {
        csv.begin_row();
        csv.field(static_cast<double>(k) * et.charged.step);
        csv.field(et.charged.values[k]);
        csv.field(et.consumed.values[k]);
        csv.field(et.energy[k]);
        csv.end_row();
    }
}

void dump_single_run(const Scenario& sc, const std::string& dir) {
    SingleRun run = simulate_once(sc);
    for (std::size_t i = 0; i < run.chain.size(); ++i)
        write_node_trace(dir + "trace_node_" + sc.path[i] + ".csv", run.chain[i]);
    if (run.energy) write_energy_trace(dir + "trace_energy.csv", *run.energy);
}

}  // namespace

int cmd_bounds(const Scenario& sc, const std::string& outdir) {
    std::string dir = prep_dir(outdir);
    BuiltScenario built = build_models(sc);
    CsvWriter csv(dir + "bounds.csv");
    csv.raw_row("metric,x,value");
    for (const auto& row : bound_rows(sc, built)) {
        csv.begin_row();
        csv.field(row.metric);
        csv.field(row.x);
        csv.field(row.value);
        csv.end_row();
    }
    return 0;
}

int cmd_validate(const Scenario& sc, const std::string& outdir, bool dump_traces,
                 unsigned threads) {
    std::string dir = prep_dir(outdir);
    ValidationReport report = validate(sc, threads);
    CsvWriter csv(dir + "validate.csv");
    for (const auto& line : report.header) csv.comment(line);
    csv.raw_row("metric,x,empirical,analytical_lower,analytical_upper,replications,std_error,asserted,pass");
    for (const auto& r : report.rows) {
        csv.begin_row();
        csv.field(r.metric);
        csv.field(r.x);
        csv.field(r.empirical);
        csv.field(r.lower);
        csv.field(r.upper);
        csv.field(r.replications);
        csv.field(r.se);
        csv.field(std::string(r.asserted ? "yes" : "no"));
        csv.field(std::string(r.pass ? "pass" : "FAIL"));
        csv.end_row();
    }
    if (dump_traces) dump_single_run(sc, dir);
    return report.all_pass() ? 0 : 4;
}

int cmd_simulate(const Scenario& sc, const std::string& outdir) {
    std::string dir = prep_dir(outdir);
    dump_single_run(sc, dir);
    return 0;
}

int cmd_plotdata(const Scenario& sc, const std::string& outdir, unsigned threads) {
    std::string dir = prep_dir(outdir);
    BuiltScenario built = build_models(sc);
    CsvWriter csv(dir + "plotdata.csv");
    csv.raw_row("metric,series,x,value");

    std::vector<double> xs = xgrid(sc.analysis);
    if (built.sources.size() > 1) {
        SecModel dep = combine_sources(built.sources);
        SecModel ind = combine_sources_independent(built.sources);
        auto emit = [&](const std::string& metric, const std::string& series,
                        const BoundingFn& f) {
            for (double x : xs) {
                csv.begin_row();
                csv.field(metric);
                csv.field(series);
                csv.field(x);
                csv.field(f(x));
                csv.end_row();
            }
        };
        emit("source_lower", "dependent", dep.f1);
        emit("source_upper", "dependent", dep.f2);
        emit("source_lower", "independent", ind.f1);
        emit("source_upper", "independent", ind.f2);
    }

    for (const auto& row : bound_rows(sc, built)) {
        csv.begin_row();
        csv.field(row.metric);
        csv.field(std::string("analytical"));
        csv.field(row.x);
        csv.field(row.value);
        csv.end_row();
    }

    bool simulatable = built.discharge || (built.flow && !built.path_nodes.empty());
    if (simulatable) {
        ValidationReport report = validate(sc, threads);
        for (const auto& r : report.rows) {
            csv.begin_row();
            csv.field(r.metric);
            csv.field(std::string("empirical"));
            csv.field(r.x);
            csv.field(r.empirical);
            csv.end_row();
            csv.begin_row();
            csv.field(r.metric);
            csv.field(std::string("analytical_lower"));
            csv.field(r.x);
            csv.field(r.lower);
            csv.end_row();
            csv.begin_row();
            csv.field(r.metric);
            csv.field(std::string("analytical_upper"));
            csv.field(r.x);
            csv.field(r.upper);
            csv.end_row();
        }
    }
    return 0;
}

}  // namespace encal
