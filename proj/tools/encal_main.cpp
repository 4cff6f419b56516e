#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "encal/commands.hpp"
#include "encal/errors.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw encal::Error("cannot read scenario file " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

struct CommonOpts {
    std::string scenario_path;
    std::string output = ".";
    double grid_step = 0.0;
    double horizon = 0.0;
    long replications = 0;
    long long seed = -1;
    bool dump_traces = false;
    unsigned threads = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--scenario", opts.scenario_path, "scenario file")->required();
    cmd->add_option("--output", opts.output, "output directory");
    cmd->add_option("--grid-step", opts.grid_step, "override analysis grid step");
    cmd->add_option("--horizon", opts.horizon, "override analysis horizon");
    cmd->add_option("--replications", opts.replications, "override replication count");
    cmd->add_option("--seed", opts.seed, "override master seed");
    cmd->add_option("--threads", opts.threads, "replication worker threads (0 = auto)");
    cmd->add_flag("--dump-traces", opts.dump_traces, "write replication-0 traces");
}

encal::Scenario load(const CommonOpts& opts) {
    encal::Scenario sc = encal::parse_scenario(read_file(opts.scenario_path));
    if (opts.grid_step > 0.0) sc.analysis.grid_step = opts.grid_step;
    if (opts.horizon > 0.0) sc.analysis.horizon = opts.horizon;
    if (opts.replications > 0) sc.analysis.replications = opts.replications;
    if (opts.seed >= 0) sc.analysis.seed = static_cast<std::uint64_t>(opts.seed);
    return sc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stochastic network calculus for renewable-energy systems"};
    app.require_subcommand(1);

    CommonOpts opts;
    CLI::App* bounds = app.add_subcommand("bounds", "analytical bounds to CSV");
    CLI::App* validate = app.add_subcommand("validate", "Monte-Carlo bound validation");
    CLI::App* simulate = app.add_subcommand("simulate", "dump one replication's traces");
    CLI::App* plotdata = app.add_subcommand("plotdata", "merged analytical/empirical series");
    for (CLI::App* cmd : {bounds, validate, simulate, plotdata}) add_common(cmd, opts);

    CLI11_PARSE(app, argc, argv);

    try {
        encal::Scenario sc = load(opts);
        if (bounds->parsed()) return encal::cmd_bounds(sc, opts.output);
        if (validate->parsed())
            return encal::cmd_validate(sc, opts.output, opts.dump_traces, opts.threads);
        if (simulate->parsed()) return encal::cmd_simulate(sc, opts.output);
        return encal::cmd_plotdata(sc, opts.output, opts.threads);
    } catch (const encal::ParseError& e) {
        std::fprintf(stderr, "parse error: %s\n", e.what());
        return 1;
    } catch (const encal::SemanticError& e) {
        std::fprintf(stderr, "semantic error: %s\n", e.what());
        return 2;
    } catch (const encal::InvalidSpec& e) {
        std::fprintf(stderr, "semantic error: %s\n", e.what());
        return 2;
    } catch (const encal::ModelMismatch& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 4;
    } catch (const encal::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
