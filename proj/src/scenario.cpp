#include "encal/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "encal/errors.hpp"

namespace encal {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool valid_name(const std::string& s) {
    if (s.empty() || (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_'))
        return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_';
    });
}

double parse_number(const std::string& tok, int line) {
    const char* begin = tok.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || !std::isfinite(v))
        throw ParseError(line, "expected a number, got '" + tok + "'");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(trim(cur));
    return out;
}

// (t,v) pair list: (a,b),(c,d),...
std::vector<std::pair<double, double>> parse_pairs(const std::string& body, int line) {
    std::vector<std::pair<double, double>> pts;
    std::size_t i = 0;
    while (i < body.size()) {
        while (i < body.size() && (body[i] == ',' || std::isspace(static_cast<unsigned char>(body[i])))) ++i;
        if (i >= body.size()) break;
        if (body[i] != '(') throw ParseError(line, "expected '(' in point list");
        std::size_t close = body.find(')', i);
        if (close == std::string::npos) throw ParseError(line, "unterminated point");
        auto parts = split(body.substr(i + 1, close - i - 1), ',');
        if (parts.size() != 2) throw ParseError(line, "point needs two coordinates");
        pts.emplace_back(parse_number(parts[0], line), parse_number(parts[1], line));
        i = close + 1;
    }
    if (pts.empty()) throw ParseError(line, "empty point list");
    return pts;
}

FnLiteral parse_fn_literal(const std::string& text, int line) {
    std::string s = trim(text);
    FnLiteral lit;
    if (s == "zero") {
        lit.kind = FnLiteral::Kind::Zero;
        return lit;
    }
    if (s.rfind("pwl[", 0) == 0) {
        if (s.back() != ']') throw ParseError(line, "unterminated pwl literal");
        lit.kind = FnLiteral::Kind::Pwl;
        lit.pts = parse_pairs(s.substr(4, s.size() - 5), line);
        return lit;
    }
    std::size_t open = s.find('(');
    if (open == std::string::npos || s.back() != ')')
        throw ParseError(line, "malformed function literal '" + s + "'");
    std::string head = trim(s.substr(0, open));
    auto args = split(s.substr(open + 1, s.size() - open - 2), ',');
    std::vector<double> params;
    for (const auto& a : args) params.push_back(parse_number(a, line));

    auto expect = [&](std::size_t n, FnLiteral::Kind k) {
        if (params.size() != n)
            throw ParseError(line, head + " takes " + std::to_string(n) + " parameters");
        lit.kind = k;
        lit.params = params;
    };
    if (head == "affine") expect(2, FnLiteral::Kind::Affine);
    else if (head == "ratelatency") expect(2, FnLiteral::Kind::RateLatency);
    else if (head == "exp") expect(2, FnLiteral::Kind::Exp);
    else throw ParseError(line, "unknown function '" + head + "'");
    return lit;
}

sim::GeneratorSpec parse_generator(const std::string& text, int line) {
    std::string s = trim(text);
    std::size_t open = s.find('(');
    if (open == std::string::npos || s.back() != ')')
        throw ParseError(line, "malformed generator literal '" + s + "'");
    std::string head = trim(s.substr(0, open));
    auto args = split(s.substr(open + 1, s.size() - open - 2), ',');
    std::vector<double> p;
    for (const auto& a : args) p.push_back(parse_number(a, line));

    auto want = [&](std::size_t n) {
        if (p.size() != n)
            throw ParseError(line, head + " takes " + std::to_string(n) + " parameters");
    };
    if (head == "constant") {
        want(1);
        return sim::ConstantSpec{p[0]};
    }
    if (head == "onoff") {
        want(3);
        return sim::OnOffSpec{p[0], p[1], p[2]};
    }
    if (head == "cpoisson") {
        want(2);
        return sim::CompoundPoissonSpec{p[0], p[1]};
    }
    if (head == "jitter") {
        want(2);
        return sim::JitterSpec{p[0], p[1]};
    }
    throw ParseError(line, "unknown generator '" + head + "'");
}

struct Section {
    std::string kind;
    std::string name;
    int line;
    std::map<std::string, std::pair<std::string, int>> entries;  // key -> (value, line)
};

std::vector<Section> split_sections(const std::string& text) {
    std::vector<Section> sections;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError(line_no, "unterminated section header");
            auto header = split(trim(line.substr(1, line.size() - 2)), ' ');
            std::vector<std::string> words;
            for (auto& w : header)
                if (!w.empty()) words.push_back(w);
            if (words.empty()) throw ParseError(line_no, "empty section header");
            Section sec;
            sec.kind = words[0];
            sec.line = line_no;
            if (words.size() > 1) sec.name = words[1];
            if (words.size() > 2) throw ParseError(line_no, "too many words in section header");
            sections.push_back(std::move(sec));
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(line_no, "expected 'key = value'");
        if (sections.empty()) throw ParseError(line_no, "entry before any section");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) throw ParseError(line_no, "empty key or value");
        if (!sections.back().entries.emplace(key, std::make_pair(value, line_no)).second)
            throw ParseError(line_no, "duplicate key '" + key + "'");
    }
    return sections;
}

class SectionReader {
public:
    explicit SectionReader(const Section& sec) : sec_(sec) {}

    bool has(const std::string& key) const { return sec_.entries.count(key) > 0; }

    std::pair<std::string, int> get(const std::string& key) const {
        auto it = sec_.entries.find(key);
        if (it == sec_.entries.end())
            throw ParseError(sec_.line, "section [" + sec_.kind +
                                            "] is missing required key '" + key + "'");
        used_.push_back(key);
        return it->second;
    }

    std::pair<std::string, int> get_or(const std::string& key, const std::string& fallback) const {
        auto it = sec_.entries.find(key);
        if (it == sec_.entries.end()) return {fallback, sec_.line};
        used_.push_back(key);
        return it->second;
    }

    void finish() const {
        for (const auto& [key, value] : sec_.entries) {
            if (std::find(used_.begin(), used_.end(), key) == used_.end())
                throw ParseError(value.second, "unknown key '" + key + "' in section [" +
                                                   sec_.kind + "]");
        }
    }

private:
    const Section& sec_;
    mutable std::vector<std::string> used_;
};

void semantic_checks(const Scenario& sc) {
    const auto& a = sc.analysis;
    if (!(a.grid_step > 0) || !(a.sim_step > 0) || !(a.horizon > 0) || !(a.xmax > 0) ||
        !(a.xstep > 0))
        throw SemanticError("analysis steps, horizon and x range must be positive");
    if (a.replications < 1) throw SemanticError("replications must be >= 1");
    for (double f : a.t_samples)
        if (!(f > 0.0) || f > 1.0) throw SemanticError("t_samples must lie in (0, 1]");
    if (a.t_samples.empty()) throw SemanticError("t_samples must not be empty");

    for (const auto& s : sc.sources) validate_spec(s.generator);
    for (const auto& f : sc.flows) validate_spec(f.generator);

    auto has_node = [&](const std::string& n) {
        return std::any_of(sc.nodes.begin(), sc.nodes.end(),
                           [&](const NodeCfg& c) { return c.name == n; });
    };
    auto has_source = [&](const std::string& n) {
        return std::any_of(sc.sources.begin(), sc.sources.end(),
                           [&](const SourceCfg& c) { return c.name == n; });
    };
    for (const auto& n : sc.nodes)
        if (!has_source(n.source))
            throw SemanticError("node '" + n.name + "' references unknown source '" + n.source +
                                "'");
    for (const auto& p : sc.path)
        if (!has_node(p)) throw SemanticError("path references unknown node '" + p + "'");
    if (!sc.nodes.empty() && sc.path.empty())
        throw SemanticError("scenario with nodes needs a [path] section");
    if (!sc.path.empty() && sc.flows.size() != 1)
        throw SemanticError("a routed scenario needs exactly one flow");
    if (sc.flows.size() > 1) throw SemanticError("at most one flow is supported");
    if (sc.sources.empty()) throw SemanticError("scenario needs at least one source");

    // every referenced literal must materialize into its class
    build_models(sc);
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
    Scenario sc;
    bool saw_analysis = false, saw_power = false, saw_discharge = false, saw_path = false;

    for (const Section& raw : split_sections(text)) {
        SectionReader sec(raw);
        if (raw.kind == "analysis") {
            if (saw_analysis) throw ParseError(raw.line, "duplicate [analysis] section");
            saw_analysis = true;
            if (!raw.name.empty()) throw ParseError(raw.line, "[analysis] takes no name");
            auto& a = sc.analysis;
            auto num = [&](const char* key, double fallback) {
                auto [v, ln] = sec.get_or(key, "");
                return v.empty() ? fallback : parse_number(v, ln);
            };
            a.grid_step = num("grid_step", a.grid_step);
            a.horizon = num("horizon", a.horizon);
            a.xmax = num("xmax", a.xmax);
            a.xstep = num("xstep", a.xstep);
            a.sim_step = num("sim_step", a.sim_step);
            a.replications = static_cast<long>(num("replications", static_cast<double>(a.replications)));
            a.seed = static_cast<std::uint64_t>(num("seed", static_cast<double>(a.seed)));
            auto [ts, ln] = sec.get_or("t_samples", "");
            if (!ts.empty()) {
                a.t_samples.clear();
                for (const auto& tok : split(ts, ',')) a.t_samples.push_back(parse_number(tok, ln));
            }
            sec.finish();
        } else if (raw.kind == "power") {
            if (saw_power) throw ParseError(raw.line, "duplicate [power] section");
            saw_power = true;
            auto [model, ln] = sec.get("model");
            if (model == "identity") sc.power.kind = PowerCfg::Kind::Identity;
            else if (model == "quadratic") sc.power.kind = PowerCfg::Kind::Quadratic;
            else if (model.rfind("pwl[", 0) == 0 && model.back() == ']') {
                sc.power.kind = PowerCfg::Kind::Pwl;
                sc.power.pts = parse_pairs(model.substr(4, model.size() - 5), ln);
            } else throw ParseError(ln, "power model must be identity, quadratic or pwl[...]");
            sec.finish();
        } else if (raw.kind == "source") {
            if (!valid_name(raw.name)) throw ParseError(raw.line, "source needs a valid name");
            SourceCfg cfg;
            cfg.name = raw.name;
            auto lit = [&](const char* key) {
                auto [v, ln] = sec.get(key);
                return parse_fn_literal(v, ln);
            };
            cfg.alpha1 = lit("alpha1");
            cfg.f1 = lit("f1");
            cfg.alpha2 = lit("alpha2");
            cfg.f2 = lit("f2");
            auto [gen, gln] = sec.get("generator");
            cfg.generator = parse_generator(gen, gln);
            sec.finish();
            sc.sources.push_back(std::move(cfg));
        } else if (raw.kind == "discharge") {
            if (saw_discharge) throw ParseError(raw.line, "duplicate [discharge] section");
            saw_discharge = true;
            DischargeCfg cfg;
            auto [b1, l1] = sec.get("beta1");
            cfg.beta1 = parse_fn_literal(b1, l1);
            auto [g1, l2] = sec.get_or("g1", "zero");
            cfg.g1 = parse_fn_literal(g1, l2);
            auto [b2, l3] = sec.get_or("beta2", b1);
            cfg.beta2 = parse_fn_literal(b2, l3);
            auto [g2, l4] = sec.get_or("g2", "zero");
            cfg.g2 = parse_fn_literal(g2, l4);
            sec.finish();
            sc.discharge = std::move(cfg);
        } else if (raw.kind == "flow") {
            if (!valid_name(raw.name)) throw ParseError(raw.line, "flow needs a valid name");
            FlowCfg cfg;
            cfg.name = raw.name;
            auto [al, l1] = sec.get("alpha");
            cfg.alpha = parse_fn_literal(al, l1);
            auto [f, l2] = sec.get("f");
            cfg.f = parse_fn_literal(f, l2);
            auto [gen, l3] = sec.get("generator");
            cfg.generator = parse_generator(gen, l3);
            sec.finish();
            sc.flows.push_back(std::move(cfg));
        } else if (raw.kind == "node") {
            if (!valid_name(raw.name)) throw ParseError(raw.line, "node needs a valid name");
            NodeCfg cfg;
            cfg.name = raw.name;
            auto [b, l1] = sec.get("beta");
            cfg.beta = parse_fn_literal(b, l1);
            auto [g, l2] = sec.get_or("g", "zero");
            cfg.g = parse_fn_literal(g, l2);
            auto [src, l3] = sec.get("source");
            cfg.source = src;
            // deterministic schedules satisfy both service semantics
            std::string default_kind = cfg.g.kind == FnLiteral::Kind::Zero ? "sc+ssc" : "sc";
            auto [kind, l4] = sec.get_or("kind", default_kind);
            if (kind == "sc") { cfg.sc = true; cfg.ssc = false; }
            else if (kind == "ssc") { cfg.sc = false; cfg.ssc = true; }
            else if (kind == "sc+ssc") { cfg.sc = true; cfg.ssc = true; }
            else throw ParseError(l4, "kind must be sc, ssc or sc+ssc");
            sec.finish();
            sc.nodes.push_back(std::move(cfg));
        } else if (raw.kind == "path") {
            if (saw_path) throw ParseError(raw.line, "duplicate [path] section");
            saw_path = true;
            auto [nodes, ln] = sec.get("nodes");
            for (const auto& tok : split(nodes, ',')) {
                if (tok.empty()) throw ParseError(ln, "empty node name in path");
                sc.path.push_back(tok);
            }
            sec.finish();
        } else {
            throw ParseError(raw.line, "unknown section [" + raw.kind + "]");
        }
    }

    semantic_checks(sc);
    return sc;
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fn_text(const FnLiteral& lit) {
    switch (lit.kind) {
        case FnLiteral::Kind::Zero: return "zero";
        case FnLiteral::Kind::Affine:
            return "affine(" + fmt(lit.params[0]) + ", " + fmt(lit.params[1]) + ")";
        case FnLiteral::Kind::RateLatency:
            return "ratelatency(" + fmt(lit.params[0]) + ", " + fmt(lit.params[1]) + ")";
        case FnLiteral::Kind::Exp:
            return "exp(" + fmt(lit.params[0]) + ", " + fmt(lit.params[1]) + ")";
        case FnLiteral::Kind::Pwl: {
            std::string out = "pwl[";
            for (std::size_t i = 0; i < lit.pts.size(); ++i) {
                if (i) out += ",";
                out += "(" + fmt(lit.pts[i].first) + "," + fmt(lit.pts[i].second) + ")";
            }
            return out + "]";
        }
    }
    return "zero";
}

std::string gen_text(const sim::GeneratorSpec& g) {
    if (const auto* c = std::get_if<sim::ConstantSpec>(&g)) return "constant(" + fmt(c->rate) + ")";
    if (const auto* o = std::get_if<sim::OnOffSpec>(&g))
        return "onoff(" + fmt(o->rate) + ", " + fmt(o->mean_on) + ", " + fmt(o->mean_off) + ")";
    if (const auto* p = std::get_if<sim::CompoundPoissonSpec>(&g))
        return "cpoisson(" + fmt(p->event_rate) + ", " + fmt(p->mean_jump) + ")";
    const auto& j = std::get<sim::JitterSpec>(g);
    return "jitter(" + fmt(j.rate) + ", " + fmt(j.amplitude) + ")";
}

}  // namespace

std::string serialize_scenario(const Scenario& sc) {
    std::ostringstream out;
    const auto& a = sc.analysis;
    out << "[analysis]\n";
    out << "grid_step = " << fmt(a.grid_step) << "\n";
    out << "horizon = " << fmt(a.horizon) << "\n";
    out << "xmax = " << fmt(a.xmax) << "\n";
    out << "xstep = " << fmt(a.xstep) << "\n";
    out << "sim_step = " << fmt(a.sim_step) << "\n";
    out << "replications = " << a.replications << "\n";
    out << "seed = " << a.seed << "\n";
    out << "t_samples = ";
    for (std::size_t i = 0; i < a.t_samples.size(); ++i)
        out << (i ? ", " : "") << fmt(a.t_samples[i]);
    out << "\n\n[power]\nmodel = ";
    switch (sc.power.kind) {
        case PowerCfg::Kind::Identity: out << "identity"; break;
        case PowerCfg::Kind::Quadratic: out << "quadratic"; break;
        case PowerCfg::Kind::Pwl: {
            out << "pwl[";
            for (std::size_t i = 0; i < sc.power.pts.size(); ++i) {
                if (i) out << ",";
                out << "(" << fmt(sc.power.pts[i].first) << "," << fmt(sc.power.pts[i].second)
                    << ")";
            }
            out << "]";
            break;
        }
    }
    out << "\n";
    for (const auto& s : sc.sources) {
        out << "\n[source " << s.name << "]\n";
        out << "alpha1 = " << fn_text(s.alpha1) << "\n";
        out << "f1 = " << fn_text(s.f1) << "\n";
        out << "alpha2 = " << fn_text(s.alpha2) << "\n";
        out << "f2 = " << fn_text(s.f2) << "\n";
        out << "generator = " << gen_text(s.generator) << "\n";
    }
    if (sc.discharge) {
        out << "\n[discharge]\n";
        out << "beta1 = " << fn_text(sc.discharge->beta1) << "\n";
        out << "g1 = " << fn_text(sc.discharge->g1) << "\n";
        out << "beta2 = " << fn_text(sc.discharge->beta2) << "\n";
        out << "g2 = " << fn_text(sc.discharge->g2) << "\n";
    }
    for (const auto& f : sc.flows) {
        out << "\n[flow " << f.name << "]\n";
        out << "alpha = " << fn_text(f.alpha) << "\n";
        out << "f = " << fn_text(f.f) << "\n";
        out << "generator = " << gen_text(f.generator) << "\n";
    }
    for (const auto& n : sc.nodes) {
        out << "\n[node " << n.name << "]\n";
        out << "beta = " << fn_text(n.beta) << "\n";
        out << "g = " << fn_text(n.g) << "\n";
        out << "kind = " << (n.sc && n.ssc ? "sc+ssc" : (n.sc ? "sc" : "ssc")) << "\n";
        out << "source = " << n.source << "\n";
    }
    if (!sc.path.empty()) {
        out << "\n[path]\nnodes = ";
        for (std::size_t i = 0; i < sc.path.size(); ++i) out << (i ? ", " : "") << sc.path[i];
        out << "\n";
    }
    return out.str();
}

Curve to_curve(const FnLiteral& lit, double step, double horizon) {
    switch (lit.kind) {
        case FnLiteral::Kind::Zero: return Curve::zero(step);
        case FnLiteral::Kind::Affine:
            return Curve::affine(lit.params[0], lit.params[1], step, horizon);
        case FnLiteral::Kind::RateLatency:
            return Curve::rate_latency(lit.params[0], lit.params[1], step, horizon);
        case FnLiteral::Kind::Exp:
            return Curve(PiecewiseFn::exponential(lit.params[0], lit.params[1], step, horizon));
        case FnLiteral::Kind::Pwl: break;
    }
    std::vector<PiecewiseFn::Point> pts;
    for (const auto& [t, v] : lit.pts) pts.push_back({t, v});
    double slope = 0.0;
    if (pts.size() > 1) {
        const auto& a = pts[pts.size() - 2];
        const auto& b = pts.back();
        slope = (b.v - a.v) / (b.t - a.t);
    }
    return Curve(PiecewiseFn(std::move(pts), slope, step));
}

BoundingFn to_bounding(const FnLiteral& lit, double step, double horizon) {
    switch (lit.kind) {
        case FnLiteral::Kind::Zero: return BoundingFn::zero(step);
        case FnLiteral::Kind::Exp:
            return BoundingFn::exponential(lit.params[0], lit.params[1], step, horizon);
        case FnLiteral::Kind::Affine:
            return BoundingFn(PiecewiseFn::affine(lit.params[0], lit.params[1], step, horizon));
        case FnLiteral::Kind::RateLatency:
            throw SemanticError("ratelatency is not a valid bounding function");
        case FnLiteral::Kind::Pwl: break;
    }
    std::vector<PiecewiseFn::Point> pts;
    for (const auto& [t, v] : lit.pts) pts.push_back({t, v});
    double slope = 0.0;
    if (pts.size() > 1) {
        const auto& a = pts[pts.size() - 2];
        const auto& b = pts.back();
        slope = (b.v - a.v) / (b.t - a.t);
        if (slope > 0.0) slope = 0.0;
    }
    return BoundingFn(PiecewiseFn(std::move(pts), slope, step));
}

BuiltScenario build_models(const Scenario& sc) {
    const auto& a = sc.analysis;
    PowerRate power = PowerRate::identity();
    switch (sc.power.kind) {
        case PowerCfg::Kind::Identity: power = PowerRate::identity(); break;
        case PowerCfg::Kind::Quadratic: power = PowerRate::quadratic(); break;
        case PowerCfg::Kind::Pwl: {
            std::vector<PiecewiseFn::Point> pts;
            for (const auto& [t, v] : sc.power.pts) pts.push_back({t, v});
            double slope = 0.0;
            if (pts.size() > 1) {
                const auto& p = pts[pts.size() - 2];
                const auto& q = pts.back();
                slope = (q.v - p.v) / (q.t - p.t);
            }
            power = PowerRate::table(PiecewiseFn(std::move(pts), slope, a.grid_step));
            break;
        }
    }

    BuiltScenario built{std::move(power), {}, {}, {}, {}};
    for (const auto& s : sc.sources) {
        try {
            built.sources.emplace_back(to_curve(s.alpha1, a.grid_step, a.horizon),
                                       to_bounding(s.f1, a.grid_step, a.xmax),
                                       to_curve(s.alpha2, a.grid_step, a.horizon),
                                       to_bounding(s.f2, a.grid_step, a.xmax));
        } catch (const SemanticError& e) {
            throw SemanticError("source '" + s.name + "': " + e.what());
        }
    }
    if (sc.discharge) {
        const auto& d = *sc.discharge;
        try {
            built.discharge.emplace(to_curve(d.beta1, a.grid_step, a.horizon),
                                    to_bounding(d.g1, a.grid_step, a.xmax),
                                    to_curve(d.beta2, a.grid_step, a.horizon),
                                    to_bounding(d.g2, a.grid_step, a.xmax));
        } catch (const SemanticError& e) {
            throw SemanticError(std::string("discharge: ") + e.what());
        }
    }
    if (!sc.flows.empty()) {
        const auto& f = sc.flows.front();
        try {
            built.flow = ArrivalModel{to_curve(f.alpha, a.grid_step, a.horizon),
                                      to_bounding(f.f, a.grid_step, a.xmax)};
        } catch (const SemanticError& e) {
            throw SemanticError("flow '" + f.name + "': " + e.what());
        }
    }
    for (const auto& name : sc.path) {
        auto node_it = std::find_if(sc.nodes.begin(), sc.nodes.end(),
                                    [&](const NodeCfg& n) { return n.name == name; });
        if (node_it == sc.nodes.end())
            throw SemanticError("path references unknown node '" + name + "'");
        auto src_it = std::find_if(sc.sources.begin(), sc.sources.end(),
                                   [&](const SourceCfg& s) { return s.name == node_it->source; });
        if (src_it == sc.sources.end())
            throw SemanticError("node '" + name + "' references unknown source");
        try {
            Curve beta = to_curve(node_it->beta, a.grid_step, a.horizon);
            BoundingFn g = to_bounding(node_it->g, a.grid_step, a.xmax);
            BuiltNode bn{name,
                         ServiceModel{beta, g, ServiceKind::Sc},
                         std::nullopt,
                         static_cast<std::size_t>(src_it - sc.sources.begin())};
            if (node_it->ssc) bn.strict = ServiceModel{beta, g, ServiceKind::Ssc};
            if (!node_it->sc && node_it->ssc)
                bn.service.kind = ServiceKind::Ssc;  // strict-only node
            built.path_nodes.push_back(std::move(bn));
        } catch (const SemanticError& e) {
            throw SemanticError("node '" + name + "': " + e.what());
        }
    }
    return built;
}

}  // namespace encal
