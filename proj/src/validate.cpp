#include "encal/validate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

#include "encal/energy.hpp"
#include "encal/errors.hpp"
#include "encal/service.hpp"

namespace encal {

namespace {

constexpr double kDelayMargin = 1.25;  // simulate past the horizon so late work can drain

std::string fmt_t(double t) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", t);
    return buf;
}

std::vector<double> make_xgrid(const AnalysisCfg& a) {
    std::vector<double> xs;
    for (double x = 0.0; x <= a.xmax + 1e-9; x += a.xstep) xs.push_back(x);
    return xs;
}

std::vector<double> sample_on_sim_grid(const Curve& c, double step, std::size_t count) {
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k) out[k] = c(static_cast<double>(k) * step);
    return out;
}

// Largest suffix gap  max_{0<=i<=kt} [X(i,kt) - env(t_kt - t_i)].
double sup_process(const std::vector<double>& cumulative, const std::vector<double>& env,
                   std::size_t kt) {
    double best = -std::numeric_limits<double>::infinity();
    double end = cumulative[kt];
    for (std::size_t i = 0; i <= kt; ++i)
        best = std::max(best, end - cumulative[i] - env[kt - i]);
    return best;
}

double inf_process(const std::vector<double>& cumulative, const std::vector<double>& env,
                   std::size_t kt) {
    double best = std::numeric_limits<double>::infinity();
    double end = cumulative[kt];
    for (std::size_t i = 0; i <= kt; ++i)
        best = std::min(best, end - cumulative[i] - env[kt - i]);
    return best;
}

// Virtual FIFO delay at step kt, interpolated; +inf when the run ends first.
double delay_at(const sim::Trace& arrival, const sim::Trace& departure, std::size_t kt) {
    double target = arrival.values[kt];
    const auto& d = departure.values;
    auto it = std::lower_bound(d.begin() + static_cast<std::ptrdiff_t>(kt), d.end(), target);
    if (it == d.end()) return std::numeric_limits<double>::infinity();
    auto j = static_cast<std::size_t>(it - d.begin());
    double t_hit;
    if (j == kt || d[j - 1] >= target) {
        t_hit = static_cast<double>(j) * departure.step;
    } else {
        double w = (target - d[j - 1]) / (d[j] - d[j - 1]);
        t_hit = (static_cast<double>(j - 1) + w) * departure.step;
    }
    return std::max(0.0, t_hit - static_cast<double>(kt) * arrival.step);
}

struct Analytics {
    std::vector<double> xs;
    std::optional<EnergyBoundPair> energy;
    std::vector<double> backlog_bounds;              // per x
    std::vector<double> delay_h;                     // per x
    std::vector<double> delay_probs;                 // per x
    std::vector<std::vector<double>> outage_bounds;  // per ssc node, per x
    std::vector<std::size_t> outage_node;            // path index per outage row set
    SecModel combined;
    std::optional<ServiceModel> net;
};

Analytics build_analytics(const Scenario& sc, const BuiltScenario& built) {
    Analytics out{make_xgrid(sc.analysis),
                  {},
                  {},
                  {},
                  {},
                  {},
                  {},
                  combine_sources(built.sources),
                  {}};
    if (built.discharge)
        out.energy = residual_energy_bounds(out.combined, *built.discharge);

    if (!built.path_nodes.empty() && built.flow) {
        std::vector<EnergyConstrainedNode> nodes;
        for (const auto& n : built.path_nodes)
            nodes.push_back({n.service, built.sources[n.source_index], built.power});
        out.net = concatenate(nodes);
        for (double x : out.xs) {
            out.backlog_bounds.push_back(backlog_bound(*built.flow, *out.net, x));
            DelayBoundResult d = delay_bound(*built.flow, *out.net, x);
            out.delay_h.push_back(d.delay);
            out.delay_probs.push_back(d.violation_prob);
        }
        for (std::size_t i = 0; i < built.path_nodes.size(); ++i) {
            const auto& n = built.path_nodes[i];
            if (!n.strict) continue;
            std::vector<double> bounds;
            for (double x : out.xs)
                bounds.push_back(energy_outage_bound(built.sources[n.source_index], *n.strict,
                                                     built.power, x));
            out.outage_bounds.push_back(std::move(bounds));
            out.outage_node.push_back(i);
        }
    }
    return out;
}

// Everything a replication worker needs, prepared once.
struct SimPlan {
    double step;
    std::size_t n_steps;        // simulated steps (inclusive of index 0)
    std::vector<std::size_t> t_idx;
    std::vector<double> t_values;

    const Scenario* scenario;
    const BuiltScenario* built;

    // per source: envelopes presampled on the sim grid
    std::vector<std::vector<double>> alpha1_s, alpha2_s;
    std::vector<double> flow_alpha_s;
    std::vector<std::vector<double>> beta_dot_at_t;  // per path node, per t sample
};

SimPlan make_plan(const Scenario& sc, const BuiltScenario& built) {
    SimPlan plan;
    plan.scenario = &sc;
    plan.built = &built;
    plan.step = sc.analysis.sim_step;
    double horizon_sim = sc.analysis.horizon * kDelayMargin;
    plan.n_steps =
        static_cast<std::size_t>(std::ceil(horizon_sim / plan.step - 1e-9)) + 1;
    for (double f : sc.analysis.t_samples) {
        auto k = static_cast<std::size_t>(std::llround(f * sc.analysis.horizon / plan.step));
        k = std::min(k, plan.n_steps - 1);
        plan.t_idx.push_back(k);
        plan.t_values.push_back(static_cast<double>(k) * plan.step);
    }
    for (const auto& s : built.sources) {
        plan.alpha1_s.push_back(sample_on_sim_grid(s.alpha1, plan.step, plan.n_steps));
        plan.alpha2_s.push_back(sample_on_sim_grid(s.alpha2, plan.step, plan.n_steps));
    }
    if (built.flow)
        plan.flow_alpha_s = sample_on_sim_grid(built.flow->alpha, plan.step, plan.n_steps);
    for (const auto& n : built.path_nodes) {
        Curve budget = service_to_energy_curve(n.service.beta, built.power);
        std::vector<double> at_t;
        for (std::size_t k : plan.t_idx) at_t.push_back(budget(static_cast<double>(k) * plan.step));
        plan.beta_dot_at_t.push_back(std::move(at_t));
    }
    return plan;
}

// Per-replication sample values, flattened as [t_sample][...].
struct RepSamples {
    std::vector<double> energy;              // per t
    std::vector<double> sed_gap;             // per t
    std::vector<double> sec_sup, sec_inf;    // per (source, t)
    std::vector<double> flow_sup;            // per t
    std::vector<double> backlog, delay;      // per t
    std::vector<double> outage_energy;       // per (path node, t)
};

RepSamples run_replication(const SimPlan& plan, std::uint64_t rep_index) {
    const Scenario& sc = *plan.scenario;
    const BuiltScenario& built = *plan.built;
    double step = plan.step;
    double horizon_sim = static_cast<double>(plan.n_steps - 1) * step;
    std::uint64_t rep_seed = sim::substream_seed(sc.analysis.seed, rep_index);
    std::size_t n_nodes = built.path_nodes.size();

    RepSamples out;

    // tandem path fed by the flow generator
    std::vector<sim::Trace> node_charges(n_nodes);
    sim::Trace arrival, final_departure;
    if (built.flow) {
        arrival = sim::generate_trace(sc.flows.front().generator, step, horizon_sim,
                                      sim::substream_seed(rep_seed, 0));
        sim::Trace stage = arrival;
        for (std::size_t i = 0; i < n_nodes; ++i) {
            const auto& node = built.path_nodes[i];
            const auto& src_cfg = sc.sources[node.source_index];
            node_charges[i] = sim::generate_trace(src_cfg.generator, step, horizon_sim,
                                                  sim::substream_seed(rep_seed, 1 + i));
            sim::NodeTrace nt =
                sim::run_node(stage, node_charges[i], node.service.beta, built.power);
            stage = std::move(nt.departure);
        }
        final_departure = std::move(stage);
    }

    // standalone energy store driven by the sum of all source traces
    if (built.discharge) {
        sim::Trace combined;
        for (std::size_t j = 0; j < built.sources.size(); ++j) {
            sim::Trace c = sim::generate_trace(sc.sources[j].generator, step, horizon_sim,
                                               sim::substream_seed(rep_seed, 1 + n_nodes + j));
            if (j == 0) {
                combined = std::move(c);
            } else {
                for (std::size_t k = 0; k < combined.values.size(); ++k)
                    combined.values[k] += c.values[k];
            }
            // per-source charging envelope compliance
            for (std::size_t ti = 0; ti < plan.t_idx.size(); ++ti) {
                std::size_t kt = plan.t_idx[ti];
                out.sec_sup.push_back(sup_process(c.values, plan.alpha2_s[j], kt));
                out.sec_inf.push_back(inf_process(c.values, plan.alpha1_s[j], kt));
            }
        }
        sim::EnergyTrace et = sim::run_energy_system(combined, built.discharge->beta1);
        for (std::size_t kt : plan.t_idx) out.energy.push_back(et.energy[kt]);
        // gap between the budget process C conv beta1 and actual consumption,
        // recomputed from the definition so the check stays independent of the
        // incremental evaluation inside run_energy_system
        for (std::size_t kt : plan.t_idx) {
            double conv = std::numeric_limits<double>::infinity();
            const Curve& b1 = built.discharge->beta1;
            for (std::size_t i = 0; i <= kt; ++i) {
                double s = static_cast<double>(i) * step;
                conv = std::min(conv, b1(s) + combined.values[kt - i]);
            }
            conv = std::min(conv, combined.values[kt]);
            double consumed = et.consumed.values[kt];
            out.sed_gap.push_back(conv - consumed);
        }
    }

    if (built.flow) {
        for (std::size_t ti = 0; ti < plan.t_idx.size(); ++ti) {
            std::size_t kt = plan.t_idx[ti];
            out.flow_sup.push_back(sup_process(arrival.values, plan.flow_alpha_s, kt));
            out.backlog.push_back(arrival.values[kt] - final_departure.values[kt]);
            out.delay.push_back(delay_at(arrival, final_departure, kt));
        }
        for (std::size_t i = 0; i < n_nodes; ++i) {
            if (!built.path_nodes[i].strict) continue;
            for (std::size_t ti = 0; ti < plan.t_idx.size(); ++ti)
                out.outage_energy.push_back(node_charges[i].values[plan.t_idx[ti]] -
                                            plan.beta_dot_at_t[i][ti]);
        }
    }
    return out;
}

double binom_se(double p, double n) { return std::sqrt(p * (1.0 - p) / n); }

}  // namespace

bool ValidationReport::all_pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const ValidationRow& r) { return r.pass; });
}

ValidationReport validate(const Scenario& sc, unsigned threads) {
    BuiltScenario built = build_models(sc);
    Analytics analytics = build_analytics(sc, built);
    SimPlan plan = make_plan(sc, built);

    auto reps = static_cast<std::size_t>(sc.analysis.replications);
    std::vector<RepSamples> samples(reps);

    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    unsigned workers = threads ? threads : std::clamp(hw, 2u, 8u);
    workers = std::min<unsigned>(workers, static_cast<unsigned>(reps));

    std::atomic<std::size_t> progress{0};
    auto work = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t r = lo; r < hi; ++r) {
            samples[r] = run_replication(plan, r);
            std::size_t done = ++progress;
            if (reps >= 10 && done % (reps / 10) == 0)
                std::fprintf(stderr, "replications: %zu/%zu\n", done, reps);
        }
    };
    if (workers <= 1) {
        work(0, reps);
    } else {
        std::vector<std::thread> pool;
        std::size_t chunk = (reps + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            std::size_t lo = w * chunk;
            std::size_t hi = std::min(reps, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(work, lo, hi);
        }
        for (auto& t : pool) t.join();
    }

    ValidationReport report;
    const auto& a = sc.analysis;
    auto hdr = [&report](const std::string& k, const std::string& v) {
        report.header.push_back("# " + k + " = " + v);
    };
    char buf[64];
    auto num = [&buf](double v) {
        std::snprintf(buf, sizeof(buf), "%g", v);
        return std::string(buf);
    };
    hdr("grid_step", num(a.grid_step));
    hdr("horizon", num(a.horizon));
    hdr("xmax", num(a.xmax));
    hdr("xstep", num(a.xstep));
    hdr("sim_step", num(a.sim_step));
    hdr("replications", std::to_string(a.replications));
    hdr("seed", std::to_string(a.seed));
    {
        std::string ts;
        for (std::size_t i = 0; i < a.t_samples.size(); ++i)
            ts += (i ? ", " : "") + num(a.t_samples[i]);
        hdr("t_samples", ts);
    }

    const auto& xs = analytics.xs;
    auto n = static_cast<double>(reps);
    std::size_t n_t = plan.t_idx.size();

    auto gather = [&](auto&& pick, std::size_t offset) {
        std::vector<double> col(reps);
        for (std::size_t r = 0; r < reps; ++r) col[r] = pick(samples[r], offset);
        return col;
    };

    auto add_rows = [&](const std::string& metric, const std::vector<double>& col,
                        auto&& lower_at, auto&& upper_at, bool asserted, bool below_threshold) {
        for (std::size_t xi = 0; xi < xs.size(); ++xi) {
            double x = xs[xi];
            double count = 0.0;
            for (double v : col) {
                if (below_threshold ? (v < x) : (v > x)) count += 1.0;
            }
            double p = count / n;
            double se = binom_se(p, n);
            double lo = lower_at(xi), up = upper_at(xi);
            bool pass = !asserted || (p >= lo - 3.0 * se && p <= up + 3.0 * se);
            report.rows.push_back({metric, x, p, lo, up, static_cast<long>(reps), se, asserted,
                                   pass});
        }
    };

    bool sec_sed_ok = true;
    std::string first_mismatch;

    for (std::size_t ti = 0; ti < n_t; ++ti) {
        std::string at = "[t=" + fmt_t(plan.t_values[ti]) + "]";

        if (built.discharge) {
            // charging envelopes per source
            for (std::size_t j = 0; j < built.sources.size(); ++j) {
                const auto& f2 = built.sources[j].f2;
                const auto& f1 = built.sources[j].f1;
                auto sup_col = gather([&](const RepSamples& s, std::size_t o) { return s.sec_sup[o]; },
                                      j * n_t + ti);
                auto inf_col = gather([&](const RepSamples& s, std::size_t o) { return s.sec_inf[o]; },
                                      j * n_t + ti);
                std::size_t before = report.rows.size();
                add_rows("envelope.source." + sc.sources[j].name + ".upper" + at, sup_col,
                         [](std::size_t) { return 0.0; },
                         [&](std::size_t xi) { return f2.prob(xs[xi]); }, true, false);
                add_rows("envelope.source." + sc.sources[j].name + ".lower" + at, inf_col,
                         [&](std::size_t xi) { return f1.prob(xs[xi]); },
                         [](std::size_t) { return 1.0; }, true, false);
                for (std::size_t r = before; r < report.rows.size(); ++r)
                    if (!report.rows[r].pass && sec_sed_ok) {
                        sec_sed_ok = false;
                        first_mismatch = report.rows[r].metric;
                    }
            }
            // discharging envelope
            const auto& g1 = built.discharge->g1;
            const auto& g2 = built.discharge->g2;
            auto gap_col = gather([&](const RepSamples& s, std::size_t o) { return s.sed_gap[o]; },
                                  ti);
            std::size_t before = report.rows.size();
            add_rows("envelope.discharge" + at, gap_col,
                     [&](std::size_t xi) { return g1.prob(xs[xi]); },
                     [&](std::size_t xi) { return g2.prob(xs[xi]); }, true, false);
            for (std::size_t r = before; r < report.rows.size(); ++r)
                if (!report.rows[r].pass && sec_sed_ok) {
                    sec_sed_ok = false;
                    first_mismatch = report.rows[r].metric;
                }

            // residual energy vs the two-sided bound
            auto e_col = gather([&](const RepSamples& s, std::size_t o) { return s.energy[o]; }, ti);
            add_rows("energy" + at, e_col,
                     [&](std::size_t xi) { return analytics.energy->lower(xs[xi]); },
                     [&](std::size_t xi) { return analytics.energy->upper(xs[xi]); }, true, false);
        }

        if (built.flow && analytics.net) {
            const auto& f = built.flow->f;
            auto w_col = gather([&](const RepSamples& s, std::size_t o) { return s.flow_sup[o]; }, ti);
            add_rows("envelope.flow." + sc.flows.front().name + at, w_col,
                     [](std::size_t) { return 0.0; },
                     [&](std::size_t xi) { return f.prob(xs[xi]); }, true, false);

            auto b_col = gather([&](const RepSamples& s, std::size_t o) { return s.backlog[o]; }, ti);
            add_rows("backlog" + at, b_col, [](std::size_t) { return 0.0; },
                     [&](std::size_t xi) { return analytics.backlog_bounds[xi]; }, true, false);

            // delay thresholds vary per x: empirical Prob{D > h(x)}
            auto d_col = gather([&](const RepSamples& s, std::size_t o) { return s.delay[o]; }, ti);
            for (std::size_t xi = 0; xi < xs.size(); ++xi) {
                double h = analytics.delay_h[xi];
                double count = 0.0;
                for (double v : d_col)
                    if (v > h) count += 1.0;
                double p = count / n;
                double se = binom_se(p, n);
                double up = analytics.delay_probs[xi];
                report.rows.push_back({"delay" + at, xs[xi], p, 0.0, up,
                                       static_cast<long>(reps), se, true, p <= up + 3.0 * se});
            }

            for (std::size_t oi = 0; oi < analytics.outage_bounds.size(); ++oi) {
                auto col = gather(
                    [&](const RepSamples& s, std::size_t o) { return s.outage_energy[o]; },
                    oi * n_t + ti);
                const auto& name = built.path_nodes[analytics.outage_node[oi]].name;
                add_rows("outage." + name + at, col,
                         [&](std::size_t xi) { return analytics.outage_bounds[oi][xi]; },
                         [](std::size_t) { return 1.0; }, false, true);
            }
        }
    }

    if (!sec_sed_ok)
        throw ModelMismatch("generator violates its declared envelope (first failure: " +
                            first_mismatch + ")");
    return report;
}

SingleRun simulate_once(const Scenario& sc) {
    BuiltScenario built = build_models(sc);
    double step = sc.analysis.sim_step;
    double horizon_sim = sc.analysis.horizon * kDelayMargin;
    std::uint64_t rep_seed = sim::substream_seed(sc.analysis.seed, 0);
    std::size_t n_nodes = built.path_nodes.size();

    SingleRun out;
    if (built.flow) {
        sim::Trace stage = sim::generate_trace(sc.flows.front().generator, step, horizon_sim,
                                               sim::substream_seed(rep_seed, 0));
        for (std::size_t i = 0; i < n_nodes; ++i) {
            const auto& node = built.path_nodes[i];
            sim::Trace charging =
                sim::generate_trace(sc.sources[node.source_index].generator, step, horizon_sim,
                                    sim::substream_seed(rep_seed, 1 + i));
            out.chain.push_back(sim::run_node(stage, charging, node.service.beta, built.power));
            stage = out.chain.back().departure;
        }
    }
    if (built.discharge) {
        sim::Trace combined;
        for (std::size_t j = 0; j < built.sources.size(); ++j) {
            sim::Trace c =
                sim::generate_trace(sc.sources[j].generator, step, horizon_sim,
                                    sim::substream_seed(rep_seed, 1 + n_nodes + j));
            if (j == 0) combined = std::move(c);
            else
                for (std::size_t k = 0; k < combined.values.size(); ++k)
                    combined.values[k] += c.values[k];
        }
        out.energy = sim::run_energy_system(combined, built.discharge->beta1);
    }
    return out;
}

}  // namespace encal
