#include "encal/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>

#include "encal/errors.hpp"

namespace encal::sim {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::size_t step_count(double step, double horizon) {
    return static_cast<std::size_t>(std::ceil(horizon / step - 1e-9)) + 1;
}

}  // namespace

std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master ^ (0x9E3779B97F4A7C15ull * (index + 1)));
}

double mean_rate(const GeneratorSpec& spec) {
    return std::visit(
        [](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, ConstantSpec>) return s.rate;
            if constexpr (std::is_same_v<T, OnOffSpec>)
                return s.rate * s.mean_on / (s.mean_on + s.mean_off);
            if constexpr (std::is_same_v<T, CompoundPoissonSpec>)
                return s.event_rate * s.mean_jump;
            if constexpr (std::is_same_v<T, JitterSpec>) return s.rate;
        },
        spec);
}

void validate_spec(const GeneratorSpec& spec) {
    std::visit(
        [](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, ConstantSpec>) {
                if (!(s.rate >= 0.0)) throw InvalidSpec("constant rate must be >= 0");
            }
            if constexpr (std::is_same_v<T, OnOffSpec>) {
                if (!(s.rate >= 0.0)) throw InvalidSpec("on rate must be >= 0");
                if (!(s.mean_on > 0.0) || !(s.mean_off > 0.0))
                    throw InvalidSpec("mean sojourn times must be positive");
            }
            if constexpr (std::is_same_v<T, CompoundPoissonSpec>) {
                if (!(s.event_rate >= 0.0)) throw InvalidSpec("event rate must be >= 0");
                if (!(s.mean_jump > 0.0)) throw InvalidSpec("mean jump must be positive");
            }
            if constexpr (std::is_same_v<T, JitterSpec>) {
                if (!(s.rate >= 0.0)) throw InvalidSpec("rate must be >= 0");
                if (!(s.amplitude >= 0.0) || s.amplitude > s.rate)
                    throw InvalidSpec("jitter amplitude must lie in [0, rate]");
            }
        },
        spec);
}

Trace generate_trace(const GeneratorSpec& spec, double step, double horizon,
                     std::uint64_t seed) {
    validate_spec(spec);
    std::size_t n = step_count(step, horizon);
    Trace trace{step, std::vector<double>(n, 0.0)};

    if (const auto* c = std::get_if<ConstantSpec>(&spec)) {
        for (std::size_t k = 1; k < n; ++k)
            trace.values[k] = c->rate * (static_cast<double>(k) * step);
        return trace;
    }

    std::mt19937_64 rng(seed);
    if (const auto* o = std::get_if<OnOffSpec>(&spec)) {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double duty = o->mean_on / (o->mean_on + o->mean_off);
        double p_leave_on = std::min(1.0, step / o->mean_on);
        double p_leave_off = std::min(1.0, step / o->mean_off);
        bool on = u(rng) < duty;  // stationary start
        double acc = 0.0;
        for (std::size_t k = 1; k < n; ++k) {
            if (on) acc += o->rate * step;
            trace.values[k] = acc;
            on = on ? (u(rng) >= p_leave_on) : (u(rng) < p_leave_off);
        }
        return trace;
    }
    if (const auto* cp = std::get_if<CompoundPoissonSpec>(&spec)) {
        std::poisson_distribution<int> events(cp->event_rate * step);
        std::exponential_distribution<double> jump(1.0 / cp->mean_jump);
        double acc = 0.0;
        for (std::size_t k = 1; k < n; ++k) {
            int m = events(rng);
            for (int i = 0; i < m; ++i) acc += jump(rng);
            trace.values[k] = acc;
        }
        return trace;
    }
    const auto& j = std::get<JitterSpec>(spec);
    std::uniform_real_distribution<double> noise(-j.amplitude, j.amplitude);
    double acc = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        acc += (j.rate + noise(rng)) * step;
        trace.values[k] = acc;
    }
    return trace;
}

namespace {

void require_compatible(const Trace& a, const Trace& b) {
    if (a.step != b.step || a.values.size() != b.values.size())
        throw StepMismatch("traces must share step and horizon");
}

// Fills the per-step virtual FIFO delay: smallest tau with A*(t+tau) >= A(t),
// linearly interpolated between steps; +inf when the run ends first.
void fill_delays(const Trace& arrival, const Trace& departure, std::vector<double>& delays) {
    std::size_t n = arrival.values.size();
    delays.assign(n, 0.0);
    double step = arrival.step;
    std::size_t j = 0;
    for (std::size_t k = 0; k < n; ++k) {
        double target = arrival.values[k];
        if (j < k) j = k;
        while (j < n && departure.values[j] < target) ++j;
        if (j >= n) {
            delays[k] = std::numeric_limits<double>::infinity();
            continue;
        }
        double t_hit;
        if (j == 0 || departure.values[j - 1] >= target) {
            t_hit = static_cast<double>(j) * step;
            if (j > 0) {
                // walk left over a flat stretch that already sits at the target
                std::size_t i = j;
                while (i > 0 && departure.values[i - 1] >= target) --i;
                t_hit = static_cast<double>(i) * step;
            }
        } else {
            double lo = departure.values[j - 1];
            double hi = departure.values[j];
            double w = (target - lo) / (hi - lo);
            t_hit = (static_cast<double>(j - 1) + w) * step;
        }
        delays[k] = std::max(0.0, t_hit - static_cast<double>(k) * step);
    }
}

}  // namespace

NodeTrace run_node(const Trace& arrival, const Trace& charging, const Curve& schedule,
                   const PowerRate& p) {
    require_compatible(arrival, charging);
    std::size_t n = arrival.values.size();
    double step = arrival.step;

    NodeTrace node;
    node.arrival = arrival;
    node.charged = charging;
    node.departure = Trace{step, std::vector<double>(n, 0.0)};
    node.consumed = Trace{step, std::vector<double>(n, 0.0)};
    node.available = Trace{step, std::vector<double>(n, 0.0)};
    node.energy.assign(n, 0.0);
    node.backlog.assign(n, 0.0);

    double supportable = 0.0;  // integral of P^-1 over realized charge rates
    for (std::size_t k = 1; k < n; ++k) {
        double t = static_cast<double>(k) * step;
        double charge_inc = charging.values[k] - charging.values[k - 1];
        supportable += p.rate(charge_inc / step) * step;
        double avail = std::min(schedule(t), supportable);
        node.available.values[k] = avail;

        double prev_out = node.departure.values[k - 1];
        double pending = arrival.values[k] - prev_out;
        double room = avail - prev_out;
        double stored = node.energy[k - 1] + charge_inc;
        double energy_cap = p.rate(stored / step) * step;
        double served = std::max(0.0, std::min({pending, room, energy_cap}));

        node.departure.values[k] = prev_out + served;
        node.consumed.values[k] =
            node.consumed.values[k - 1] + p.power(served / step) * step;
        node.energy[k] = charging.values[k] - node.consumed.values[k];
        node.backlog[k] = arrival.values[k] - node.departure.values[k];
    }
    fill_delays(node.arrival, node.departure, node.delays);
    return node;
}

namespace {

// Budget curve reduced to its distinct linear pieces so the per-step (min,+)
// evaluation can keep one sliding-window minimum per piece.
struct BudgetSegment {
    std::size_t lo;  // first s-grid index of the piece
    std::size_t hi;  // last s-grid index (inclusive); SIZE_MAX = unbounded tail
    double base;     // budget value at s = lo*step
    double slope;
};

std::vector<BudgetSegment> coalesce_budget(const Curve& budget, double step) {
    const auto& pts = budget.fn().points();
    std::vector<BudgetSegment> segs;
    auto index_of = [step](double t) {
        return static_cast<std::size_t>(std::llround(t / step));
    };
    std::size_t start = 0;
    double slope = pts.size() > 1 ? (pts[1].v - pts[0].v) / (pts[1].t - pts[0].t)
                                  : budget.fn().terminal_slope();
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
        double s2 = (pts[i + 1].v - pts[i].v) / (pts[i + 1].t - pts[i].t);
        if (std::fabs(s2 - slope) > 1e-9 * std::max(1.0, std::fabs(slope))) {
            segs.push_back({index_of(pts[start].t), index_of(pts[i].t), pts[start].v, slope});
            start = i;
            slope = s2;
        }
    }
    if (pts.size() > 1)
        segs.push_back({index_of(pts[start].t), index_of(pts.back().t), pts[start].v, slope});
    // extrapolation tail
    double tail_base = pts.back().v;
    if (!segs.empty() && std::fabs(budget.fn().terminal_slope() - segs.back().slope) <
                             1e-9 * std::max(1.0, std::fabs(segs.back().slope))) {
        segs.back().hi = SIZE_MAX;
    } else {
        segs.push_back({index_of(pts.back().t), SIZE_MAX, tail_base,
                        budget.fn().terminal_slope()});
    }
    return segs;
}

// Sliding-window minimum over a fixed index window via a monotone deque.
class SlidingMin {
public:
    void push(std::size_t idx, double value) {
        while (!dq_.empty() && dq_.back().second >= value) dq_.pop_back();
        dq_.emplace_back(idx, value);
    }
    void evict_before(std::size_t idx) {
        while (!dq_.empty() && dq_.front().first < idx) dq_.pop_front();
    }
    bool empty() const { return dq_.empty(); }
    double min() const { return dq_.front().second; }

private:
    std::deque<std::pair<std::size_t, double>> dq_;
};

}  // namespace

EnergyTrace run_energy_system(const Trace& charging, const Curve& budget) {
    std::size_t n = charging.values.size();
    double step = charging.step;
    EnergyTrace out;
    out.charged = charging;
    out.consumed = Trace{step, std::vector<double>(n, 0.0)};
    out.energy.assign(n, 0.0);

    // consumed(t_k) = min over grid s of budget(s) + C(t_k - s), clamped by C.
    // Each budget piece contributes min over a sliding window of
    // W_j(u) = C(u) - slope_j * u*step, plus an affine term in t_k.
    std::vector<BudgetSegment> segs = coalesce_budget(budget, step);
    std::vector<SlidingMin> windows(segs.size());

    for (std::size_t k = 0; k < n; ++k) {
        double t = static_cast<double>(k) * step;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < segs.size(); ++j) {
            const auto& seg = segs[j];
            if (seg.lo > k) continue;
            // u-window for s in [seg.lo, min(seg.hi, k)]
            std::size_t u_new = k - seg.lo;  // largest u entering this step
            std::size_t u_min = seg.hi >= k ? 0 : k - seg.hi;
            // entering u values: window right edge moves by one per step
            windows[j].push(u_new, charging.values[u_new] -
                                       seg.slope * static_cast<double>(u_new) * step);
            windows[j].evict_before(u_min);
            double s_base = static_cast<double>(seg.lo) * step;
            double affine = seg.base + seg.slope * (t - s_base);
            // W(u) + base + slope*(t - s_lo) - slope*(u*step - 0) folded in W
            best = std::min(best, windows[j].min() + affine -
                                      seg.slope * 0.0);
        }
        double consumed = std::min(best, charging.values[k]);
        if (k > 0) consumed = std::max(consumed, out.consumed.values[k - 1]);
        out.consumed.values[k] = std::max(0.0, consumed);
        out.energy[k] = charging.values[k] - out.consumed.values[k];
    }
    return out;
}

std::vector<std::vector<NodeTrace>> run_tandem(std::span<const TandemNodeConfig> nodes,
                                               const GeneratorSpec& flow, double step,
                                               double horizon, int replications,
                                               std::uint64_t seed) {
    if (nodes.empty()) throw std::invalid_argument("tandem needs at least one node");
    std::vector<std::vector<NodeTrace>> chains;
    chains.reserve(static_cast<std::size_t>(replications));
    for (int rep = 0; rep < replications; ++rep) {
        std::uint64_t rep_seed = substream_seed(seed, static_cast<std::uint64_t>(rep));
        Trace arrival = generate_trace(flow, step, horizon, substream_seed(rep_seed, 0));
        std::vector<NodeTrace> chain;
        chain.reserve(nodes.size());
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            Trace charging = generate_trace(nodes[i].charging, step, horizon,
                                            substream_seed(rep_seed, i + 1));
            chain.push_back(run_node(arrival, charging, nodes[i].schedule, nodes[i].power));
            arrival = chain.back().departure;
        }
        chains.push_back(std::move(chain));
    }
    return chains;
}

Ccdf empirical_ccdf(std::span<const double> samples, std::span<const double> xs) {
    if (samples.empty()) throw EmptySamples("no samples");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    double n = static_cast<double>(sorted.size());
    Ccdf out;
    out.prob.reserve(xs.size());
    out.se.reserve(xs.size());
    for (double x : xs) {
        auto it = std::upper_bound(sorted.begin(), sorted.end(), x);
        double p = static_cast<double>(sorted.end() - it) / n;
        out.prob.push_back(p);
        out.se.push_back(std::sqrt(p * (1.0 - p) / n));
    }
    return out;
}

}  // namespace encal::sim
