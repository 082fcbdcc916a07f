#include "ssfd/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "ssfd/barriers.hpp"
#include "ssfd/profiles.hpp"
#include "ssfd/shooting.hpp"

#ifndef SSFD_PRESETS_FILE
#define SSFD_PRESETS_FILE "tools/presets.json"
#endif

namespace ssfd {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Numerical failure (exit 2), as opposed to a parameter error (exit 1).
struct NumericalFailure : std::runtime_error {
    json report;
    NumericalFailure(const std::string& what, json r) : std::runtime_error(what), report(std::move(r)) {}
};

double parse_number(const std::string& s) {
    if (s == "inf" || s == "infinity" || s == "Inf") return INFINITY;
    if (s.find('/') != std::string::npos) return Rational::parse(s).to_double();
    size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("not a number: " + s);
    return v;
}

double json_number(const json& j) {
    if (j.is_string()) return parse_number(j.get<std::string>());
    return j.get<double>();
}

std::vector<double> parse_grid(const std::string& text) {
    // lo:hi:n (geometric) or a comma list.
    if (std::count(text.begin(), text.end(), ':') == 2) {
        const auto a = text.find(':'), b = text.find(':', a + 1);
        return log_grid(parse_number(text.substr(0, a)), parse_number(text.substr(a + 1, b - a - 1)),
                        std::stoi(text.substr(b + 1)));
    }
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(parse_number(tok));
    if (out.empty()) throw std::invalid_argument("empty C grid");
    return out;
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

json num(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return nullptr;
    return v > 0 ? "inf" : "-inf";
}

json vec(const Vec3& u) { return json::array({num(u[0]), num(u[1]), num(u[2])}); }

json to_json(const Params& p) {
    return {{"m", p.m}, {"N", p.N}, {"p", p.p}, {"sigma", p.sigma}, {"direction", to_string(p.direction)}};
}

json to_json(const Exponents& e) {
    json j{{"L", e.L}, {"alpha", e.alpha}, {"beta", e.beta}, {"m_c", e.m_c}, {"p_L", e.p_L}, {"p_F", e.p_F},
           {"p_c", num(e.p_c)}, {"p_s", num(e.p_s)}};
    j["p_star"] = e.p_star ? json(*e.p_star) : json(nullptr);
    return j;
}

json to_json(const OmegaLimit& o) {
    json j{{"label", to_string(o.label)},
           {"terminal_distance", num(o.terminal_distance)},
           {"dwell_span", num(o.dwell_span)},
           {"note", o.note}};
    if (o.behavior) j["behavior"] = to_string(*o.behavior);
    if (o.ratio) j["ratio"] = *o.ratio;
    return j;
}

json to_json(const Event& e) {
    json j{{"kind", to_string(e.kind)}, {"name", e.name},       {"eta", num(e.eta)},
           {"chart", to_string(e.state.chart)}, {"state", vec(e.state.c)}, {"direction", e.direction}};
    if (e.value != 0.0) j["value"] = num(e.value);
    return j;
}

json trajectory_summary(const Trajectory& t) {
    json ev = json::array();
    for (const auto& e : t.events) ev.push_back(to_json(e));
    json j{{"omega", to_json(t.omega)},
           {"termination", t.termination},
           {"samples", t.samples.size()},
           {"events", ev},
           {"stats",
            {{"steps", t.integrator_stats.steps},
             {"rejected", t.integrator_stats.rejected},
             {"invariant_drift", num(t.integrator_stats.max_residual)},
             {"chart_switches", t.integrator_stats.chart_switches}}}};
    if (!t.samples.empty()) {
        const auto& s = t.samples.back().state;
        j["last"] = {{"chart", to_string(s.chart)}, {"state", vec(s.c)}, {"eta", num(s.eta)}};
    }
    return j;
}

json to_json(const TailFit& f) {
    return {{"kind", to_string(f.kind)}, {"constant", num(f.constant)}, {"exponent", num(f.exponent)},
            {"offset", num(f.offset)},   {"xi_lo", num(f.xi_lo)},       {"xi_hi", num(f.xi_hi)},
            {"misfit", num(f.misfit)},   {"max_deviation", num(f.max_deviation)}, {"points", f.points}};
}

json to_json(const ShootingOutcome& o) {
    json j{{"C", num(o.C)}, {"flank", o.flank}, {"omega", to_json(o.omega)}};
    if (!o.error.empty()) j["error"] = o.error;
    return j;
}

json to_json(const CertificationReport& r) {
    json v = json::array();
    for (const auto& x : r.violations) v.push_back({{"a", x.a}, {"b", x.b}, {"value", x.value}});
    json j{{"barrier", to_string(r.id)},
           {"params", to_json(r.params)},
           {"claim", to_string(r.claim)},
           {"applicable", r.applicable},
           {"points", r.points},
           {"min", num(r.min_value)},
           {"max", num(r.max_value)},
           {"violation_count", r.violation_count},
           {"violations", v},
           {"exact_points", r.exact_points},
           {"exact_fallbacks", r.exact_fallbacks},
           {"passed", r.passed()}};
    if (!r.applicable) j["inapplicable_reason"] = r.inapplicable_reason;
    return j;
}

struct Common {
    std::string m, p, sigma, direction = "forward", config, out;
    int N = 3;
    double tol_rel = 1e-10, tol_abs = 1e-12, seed_delta = kDefaultSeedDelta, eta_max = 200.0;
    std::map<std::string, CLI::Option*> opts;
};

void add_common(CLI::App* sub, Common& c) {
    c.opts["m"] = sub->add_option("--m", c.m, "diffusion exponent m (decimal or fraction)");
    c.opts["N"] = sub->add_option("--N", c.N, "space dimension");
    c.opts["p"] = sub->add_option("--p", c.p, "reaction exponent p");
    c.opts["sigma"] = sub->add_option("--sigma", c.sigma, "weight exponent sigma");
    c.opts["direction"] = sub->add_option("--direction", c.direction, "forward | backward");
    sub->add_option("--config", c.config, "JSON file with default values for the flags");
    sub->add_option("--out", c.out, "output directory for CSV and JSON files");
    c.opts["tol_rel"] = sub->add_option("--tol-rel", c.tol_rel, "integrator relative tolerance");
    c.opts["tol_abs"] = sub->add_option("--tol-abs", c.tol_abs, "integrator absolute tolerance");
    c.opts["seed_delta"] = sub->add_option("--seed-delta", c.seed_delta, "seed distance from P0");
    c.opts["eta_max"] = sub->add_option("--eta-max", c.eta_max, "integration span");
}

void apply_config(Common& c) {
    if (c.config.empty()) return;
    std::ifstream in(c.config);
    if (!in) throw std::invalid_argument("cannot read config " + c.config);
    const json j = json::parse(in);
    auto unset = [&](const char* k) { return j.contains(k) && c.opts[k]->count() == 0; };
    auto str = [&](const char* k) { return j[k].is_string() ? j[k].get<std::string>() : fmt(j[k].get<double>()); };
    if (unset("m")) c.m = str("m");
    if (unset("p")) c.p = str("p");
    if (unset("sigma")) c.sigma = str("sigma");
    if (unset("N")) c.N = j["N"].get<int>();
    if (unset("direction")) c.direction = j["direction"].get<std::string>();
    if (unset("tol_rel")) c.tol_rel = json_number(j["tol_rel"]);
    if (unset("tol_abs")) c.tol_abs = json_number(j["tol_abs"]);
    if (unset("seed_delta")) c.seed_delta = json_number(j["seed_delta"]);
    if (unset("eta_max")) c.eta_max = json_number(j["eta_max"]);
    if (c.out.empty() && j.contains("out")) c.out = j["out"].get<std::string>();
}

Params make_params(const Common& c, bool need_p = true) {
    if (c.m.empty()) throw ParamError("missing", "--m is required");
    if (c.sigma.empty()) throw ParamError("missing", "--sigma is required");
    if (need_p && c.p.empty()) throw ParamError("missing", "--p is required");
    Params prm;
    prm.m = parse_number(c.m);
    prm.N = c.N;
    prm.p = c.p.empty() ? 0.0 : parse_number(c.p);
    prm.sigma = parse_number(c.sigma);
    prm.direction = parse_direction(c.direction);
    return prm;
}

std::optional<RationalParams> exact_params(const Common& c) {
    try {
        return RationalParams{Rational::parse(c.m), c.N, Rational::parse(c.p), Rational::parse(c.sigma)};
    } catch (...) {
        return std::nullopt;
    }
}

Controls make_controls(const Common& c) {
    Controls ctl;
    ctl.rtol = c.tol_rel;
    ctl.atol = c.tol_abs;
    ctl.eta_max = c.eta_max;
    return ctl;
}

fs::path out_dir(const Common& c) {
    fs::path d = c.out.empty() ? fs::path(".") : fs::path(c.out);
    fs::create_directories(d);
    return d;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << text;
}

std::string csv_of(const Trajectory& t, const std::map<std::string, std::string>& meta = {}) {
    std::ostringstream os;
    write_csv(os, t, meta);
    return os.str();
}

std::string profile_csv_of(const ProfileSample& p) {
    std::ostringstream os;
    write_profile_csv(os, p);
    return os.str();
}

void emit(std::ostream& out, const Common& c, const json& j, const std::string& name) {
    out << j.dump(2) << "\n";
    if (!c.out.empty()) write_file(out_dir(c) / (name + ".json"), j.dump(2) + "\n");
}

// ---- subcommands ----

int cmd_exponents(const Common& c, std::ostream& out) {
    const Params prm = make_params(c);
    validate(prm);
    json j{{"params", to_json(prm)}, {"exponents", to_json(compute_exponents(prm))}, {"pc_gap", pc_gap(prm)}};
    if (auto rp = exact_params(c)) {
        try {
            const ExactExponents x = exact_exponents(*rp);
            json e{{"L", x.L.str()},     {"alpha", x.alpha.str()}, {"beta", x.beta.str()},
                   {"m_c", x.m_c.str()}, {"p_L", x.p_L.str()},     {"p_F", x.p_F.str()}};
            if (x.p_c) e["p_c"] = x.p_c->str();
            if (x.p_s) e["p_s"] = x.p_s->str();
            if (x.p_star) e["p_star"] = x.p_star->str();
            j["exact"] = e;
        } catch (const std::exception&) {
        }
    }
    emit(out, c, j, "exponents");
    return 0;
}

int cmd_classify(const Common& c, std::ostream& out) {
    const Params prm = make_params(c);
    const RegimeReport r = classify_regime(prm);
    json beh = json::array();
    for (Behavior b : r.expected_behaviors) beh.push_back(to_string(b));
    json j{{"params", to_json(prm)},
           {"exponents", to_json(r.exponents)},
           {"regime", to_string(r.regime)},
           {"expected_behaviors", beh},
           {"theorem", r.theorem_citation},
           {"boundaries", r.boundaries},
           {"m_critical", r.m_critical}};
    emit(out, c, j, "classify");
    return 0;
}

int cmd_catalog(const Common& c, std::ostream& out) {
    const Params prm = make_params(c);
    validate(prm);
    json pts = json::array();
    for (const auto& pt : enumerate_points(prm)) {
        json j{{"id", to_string(pt.id)},
               {"chart", to_string(pt.chart)},
               {"coords", vec(pt.coords)},
               {"stability", to_string(pt.stability)},
               {"existence", pt.existence_condition},
               {"local_class", pt.local_class},
               {"relevant", pt.relevant}};
        if (pt.branch) j["branch"] = *pt.branch == Branch::Minus ? "minus" : "plus";
        if (pt.gamma) j["gamma"] = *pt.gamma;
        if (pt.eigen) {
            json ev = json::array();
            for (const auto& v : pt.eigen->values) ev.push_back({v.real(), v.imag()});
            j["eigenvalues"] = ev;
            if (!pt.eigen->note.empty()) j["eigen_note"] = pt.eigen->note;
        }
        json ex = json::array();
        for (Behavior b : pt.expansions) ex.push_back(to_string(b));
        j["expansions"] = ex;
        pts.push_back(j);
    }
    emit(out, c, {{"params", to_json(prm)}, {"points", pts}}, "catalog");
    return 0;
}

struct IntegrateOpts {
    std::string C = "1";
    std::string state;
    double eta0 = 0.0;
};

int cmd_integrate(const Common& c, const IntegrateOpts& o, std::ostream& out) {
    const Params prm = make_params(c);
    validate(prm);
    const Controls ctl = shooting_controls(prm, make_controls(c));
    const SystemId sys{prm.direction, Chart::Main, {}};
    Trajectory tr;
    json seed;
    if (!o.state.empty()) {
        std::vector<double> v;
        std::stringstream ss(o.state);
        std::string tok;
        while (std::getline(ss, tok, ',')) v.push_back(parse_number(tok));
        if (v.size() != 3) throw std::invalid_argument("--state needs X,Y,Z");
        PhaseState s{{v[0], v[1], v[2]}, Chart::Main, o.eta0};
        tr = integrate(sys, prm, s, ctl);
        seed = {{"state", vec(s.c)}, {"eta", o.eta0}};
    } else {
        const double C = parse_number(o.C);
        LocalSeed ls;
        try {
            ls = seed_P0_unstable(prm, C, c.seed_delta);
        } catch (const SeedError& e) {
            throw NumericalFailure(e.what(), {{"error", e.what()}});
        }
        tr = integrate(sys, prm, ls, ctl);
        seed = {{"C", num(C)},
                {"delta", ls.delta},
                {"state", vec(ls.state.c)},
                {"misalignment", ls.misalignment},
                {"expansion_order", ls.expansion_order}};
    }
    json j{{"params", to_json(prm)}, {"seed", seed}, {"trajectory", trajectory_summary(tr)}};
    if (!c.out.empty()) {
        write_file(out_dir(c) / "trajectory.csv", csv_of(tr));
        const ProfileSample prof = reconstruct_profile(tr, prm);
        write_file(out_dir(c) / "profile.csv", profile_csv_of(prof));
        j["files"] = {"trajectory.csv", "profile.csv"};
    }
    emit(out, c, j, "integrate");
    return 0;
}

int cmd_sweep(const Common& c, const std::string& grid, std::ostream& out) {
    const Params prm = make_params(c);
    validate(prm);
    const auto outcomes = sweep_C(prm, parse_grid(grid), c.seed_delta, make_controls(c));
    const SweepSummary s = summarize_sweep(outcomes);
    json list = json::array();
    for (const auto& o : outcomes) list.push_back(to_json(o));
    json tr = json::array();
    for (const auto& [a, b] : s.transitions) tr.push_back({num(a), num(b)});
    json j{{"params", to_json(prm)},
           {"outcomes", list},
           {"summary",
            {{"prefix_ToQ1", s.prefix_ToQ1},
             {"suffix_ToQ3", s.suffix_ToQ3},
             {"undetermined", s.undetermined},
             {"transitions", tr}}}};
    emit(out, c, j, "sweep");
    return 0;
}

struct ConnectOpts {
    std::string target;
    std::string C_lo, C_hi;
    std::optional<double> eta_target;
    int max_stages = 60;
};

PointId default_target(const Params& prm) {
    if (prm.direction == Direction::Backward) return PointId::Q1;
    if (std::abs(prm.m - critical_m(prm.N)) <= kBoundaryTol) return PointId::P1P3crit;
    return PointId::P3;
}

PointId parse_target(const std::string& s) {
    if (s == "P3") return PointId::P3;
    if (s == "Q1") return PointId::Q1;
    if (s == "P1P3crit") return PointId::P1P3crit;
    throw std::invalid_argument("unknown target " + s + " (P3, Q1, P1P3crit)");
}

int cmd_connect(const Common& c, const ConnectOpts& o, std::ostream& out) {
    const Params prm = make_params(c);
    validate(prm);
    const PointId target = o.target.empty() ? default_target(prm) : parse_target(o.target);
    ConnectOptions opt;
    opt.controls = make_controls(c);
    opt.seed_delta = c.seed_delta;
    opt.max_stages = o.max_stages;
    opt.eta_target = o.eta_target;
    if (target == PointId::P1P3crit && !opt.eta_target) opt.eta_target = 14.0;

    double lo, hi;
    if (!o.C_lo.empty() && !o.C_hi.empty()) {
        lo = parse_number(o.C_lo);
        hi = parse_number(o.C_hi);
    } else {
        // Bracket from a coarse sweep: first adjacent pair with different flank labels.
        const auto outcomes = sweep_C(prm, log_grid(1e-2, 1e4, 25), c.seed_delta, opt.controls);
        const SweepSummary s = summarize_sweep(outcomes);
        if (s.transitions.empty()) {
            json list = json::array();
            for (const auto& x : outcomes) list.push_back(to_json(x));
            throw NumericalFailure("no flank transition on the default C grid", {{"outcomes", list}});
        }
        lo = s.transitions.front().first;
        hi = s.transitions.front().second;
    }
    ConnectionCertificate cert;
    try {
        cert = bisect_connection(prm, target, lo, hi, opt);
    } catch (const ShootingError& e) {
        throw NumericalFailure(e.what(), {{"error", e.what()}, {"C_lo", lo}, {"C_hi", hi}});
    }
    json j{{"params", to_json(prm)},
           {"target", to_string(target)},
           {"C_lo", num(cert.C_lo)},
           {"C_hi", num(cert.C_hi)},
           {"flank_lo", cert.flank_lo},
           {"flank_hi", cert.flank_hi},
           {"seed_delta", cert.seed_delta},
           {"closest_approach", num(cert.closest_approach)},
           {"closest_state", vec(cert.closest_state.c)},
           {"stages", cert.stages},
           {"integrations", cert.integrations},
           {"note", cert.note},
           {"trajectory", trajectory_summary(cert.trajectory)}};
    if (cert.terminal_ratio) j["terminal_ratio"] = *cert.terminal_ratio;
    if (cert.ratio_fit)
        j["ratio_fit"] = {{"r0", cert.ratio_fit->r0}, {"misfit", cert.ratio_fit->misfit}, {"points", cert.ratio_fit->points}};

    const ProfileSample prof = reconstruct_profile(cert.trajectory, prm);
    const Behavior tail = target == PointId::P3         ? Behavior::TailFast
                          : target == PointId::P1P3crit ? Behavior::TailFastLog
                                                        : Behavior::TailSlow;
    try {
        j["tail_fit"] = to_json(fit_tail(prof, tail));
    } catch (const ProfileError& e) {
        j["tail_fit"] = {{"kind", to_string(tail)}, {"error", e.what()}};
    }
    if (!c.out.empty()) {
        write_file(out_dir(c) / "connection.csv", csv_of(cert.trajectory, {{"C", fmt(cert.C_lo)}}));
        write_file(out_dir(c) / "profile.csv", profile_csv_of(prof));
    }
    emit(out, c, j, "connect");
    return 0;
}

int cmd_scan(const Common& c, const std::string& grid, int depth, std::ostream& out) {
    const Params prm = make_params(c);
    validate(prm);
    NonexistenceReport r;
    try {
        r = nonexistence_scan(prm, parse_grid(grid), depth, c.seed_delta, make_controls(c));
    } catch (const ShootingError& e) {
        throw ParamError("scan", e.what());
    }
    json list = json::array();
    for (const auto& o : r.outcomes) list.push_back(to_json(o));
    json cross = json::array();
    for (const auto& x : r.downward_crossings)
        cross.push_back({{"C", num(x.C)}, {"X", x.X}, {"Z", x.Z}, {"direction", x.direction}});
    json j{{"params", to_json(prm)},
           {"outcomes", list},
           {"refinement_rounds", r.refinement_rounds},
           {"counterexample_candidates", r.counterexample_candidates},
           {"downward_crossings", cross},
           {"crossing_violations", r.crossing_violations},
           {"statement", r.statement}};
    emit(out, c, j, "scan-nonexistence");
    return 0;
}

struct CertifyOpts {
    std::string barrier;
    int points = 100;
    double bound = 100.0;
    bool exact = false, literal = false, explore = false;
};

int cmd_certify(const Common& c, const CertifyOpts& o, std::ostream& out) {
    const BarrierId id = parse_barrier(o.barrier);
    Params prm = make_params(c);
    prm.direction = barrier_spec(id, prm).direction;
    validate(prm);
    GridSpec g;
    g.points_per_axis = o.points;
    g.bound = o.bound;
    g.exact = o.exact;
    g.options.polc_literal_interval = o.literal;
    g.options.unchecked = o.explore;
    if (!o.explore)
        if (auto why = inapplicable_reason(id, prm))
            throw ParamError("applicability", to_string(id) + " not applicable: " + *why + " (use --explore)");
    CertificationReport r;
    if (o.exact) {
        auto rp = exact_params(c);
        if (!rp) throw ParamError("exact", "--exact needs rational parameters");
        r = certify_sign_on_grid(id, *rp, g);
    } else {
        r = certify_sign_on_grid(id, prm, g);
    }
    json j = to_json(r);
    j["region"] = barrier_spec(id, prm).region;
    if (id == BarrierId::PolynomialPc) {
        const PolcMaximum pm = polc_maximum(prm, o.literal);
        j["polc_maximum"] = {{"c_lo", pm.c_lo},       {"c_hi", pm.c_hi},   {"max", pm.max_value},
                             {"argmax", pm.argmax},   {"vertex", pm.vertex}, {"vertex_inside", pm.vertex_inside}};
    }
    emit(out, c, j, "certify");
    // Violations inside the applicability range are a failed certificate.
    return r.passed() || o.explore ? 0 : 2;
}

json load_presets(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read presets file " + path);
    return json::parse(in);
}

int cmd_portrait(const Common& c, const std::string& preset, const std::string& presets_path, std::ostream& out) {
    const json all = load_presets(presets_path.empty() ? default_presets_path() : presets_path);
    if (!all.contains(preset)) throw std::invalid_argument("unknown preset " + preset);
    const json& p = all[preset];
    Params prm;
    prm.m = json_number(p["m"]);
    prm.N = p["N"].get<int>();
    prm.p = json_number(p["p"]);
    prm.sigma = json_number(p["sigma"]);
    prm.direction = parse_direction(p.value("direction", std::string("forward")));
    validate(prm);
    std::vector<double> grid;
    for (const auto& v : p["C_grid"]) grid.push_back(json_number(v));
    Controls ctl = shooting_controls(prm, make_controls(c));
    if (p.contains("eta_max") && c.opts.at("eta_max")->count() == 0) ctl.eta_max = json_number(p["eta_max"]);
    const double delta = p.contains("seed_delta") ? json_number(p["seed_delta"]) : c.seed_delta;

    const fs::path dir = out_dir(c);
    const SystemId sys{prm.direction, Chart::Main, {}};
    std::vector<std::future<json>> futs;
    for (size_t i = 0; i < grid.size(); ++i) {
        futs.push_back(std::async(std::launch::async, [&, i] {
            const double C = grid[i];
            std::ostringstream name;
            name << preset << "_" << std::setw(2) << std::setfill('0') << i << "_C_"
                 << std::setprecision(6) << C << ".csv";
            json rec{{"C", num(C)}, {"file", name.str()}};
            try {
                const Trajectory tr = integrate(sys, prm, seed_P0_unstable(prm, C, delta), ctl);
                write_file(dir / name.str(), csv_of(tr, {{"C", std::isfinite(C) ? fmt(C) : "inf"}}));
                rec["omega"] = to_string(tr.omega.label);
                rec["samples"] = tr.samples.size();
            } catch (const SeedError& e) {
                rec["error"] = e.what();
            }
            return rec;
        }));
    }
    json files = json::array();
    for (auto& f : futs) files.push_back(f.get());
    json j{{"preset", preset}, {"params", to_json(prm)}, {"files", files}, {"out", dir.string()}};
    write_file(dir / (preset + "_index.json"), j.dump(2) + "\n");
    out << j.dump(2) << "\n";
    return 0;
}

struct ExplicitOpts {
    std::string family = "Uc";
    std::string C = "1";
    double xi_lo = 0.1, xi_hi = 10.0, tol = 1e-8;
    int points = 0;  // 0: family default
};

int cmd_verify_explicit(Common c, const ExplicitOpts& o, std::ostream& out) {
    Params prm = make_params(c, false);
    std::function<double(double)> f;
    ProfileEquation eq = ProfileEquation::Stationary;
    std::string formula;
    if (o.family == "Uc") {
        if (prm.N < 3) throw ParamError("N", "U_C needs N >= 3");
        if (c.p.empty()) prm.p = prm.m * (prm.N + 2 * prm.sigma + 2) / (prm.N - 2);
        f = explicit_Uc(prm, parse_number(o.C));
        formula = "[(N-2)(N+sigma)C/(xi^(sigma+2)+C)^2]^((N-2)/(2m(sigma+2)))";
    } else if (o.family == "power") {
        if (c.p.empty()) throw ParamError("missing", "--p is required for the power family");
        f = explicit_power_stationary(prm);
        formula = "K xi^(-(sigma+2)/(p-m))";
    } else if (o.family == "pstar") {
        prm.direction = Direction::Backward;
        if (prm.N < 3) throw ParamError("N", "p_* needs N >= 3");
        if (c.p.empty()) prm.p = 1 + prm.m * prm.sigma / (prm.N - 2);
        f = explicit_pstar_profile(prm);
        eq = ProfileEquation::Backward;
        formula = "((N-2)/(m sigma))^((N-2)/(m sigma)) xi^(-(N-2)/m)";
    } else {
        throw std::invalid_argument("unknown family " + o.family + " (Uc, power, pstar)");
    }
    validate(prm);
    // Power laws are exact under differences in ln f^m, so a coarse grid keeps rounding low.
    const int points = o.points > 0 ? o.points : o.family == "Uc" ? 800 : 200;
    const ProfileSample prof = sample_profile(f, prm, o.xi_lo, o.xi_hi, points, o.family);
    const ResidualReport r = ode_residual(prof, prm, eq);
    const bool pass = r.max_scaled <= o.tol;
    json j{{"family", o.family},
           {"params", to_json(prm)},
           {"formula", formula},
           {"equation", to_string(eq)},
           {"xi_window", {o.xi_lo, o.xi_hi}},
           {"points", points},
           {"max_scaled_residual", r.max_scaled},
           {"at_xi", r.at_xi},
           {"tolerance", o.tol},
           {"status", pass ? "PASS" : "FAIL"}};
    if (o.family == "power") j["K"] = power_stationary_constant(prm);
    if (!c.out.empty()) write_file(out_dir(c) / ("explicit_" + o.family + ".csv"), profile_csv_of(prof));
    emit(out, c, j, "verify-explicit");
    return pass ? 0 : 2;
}

}  // namespace

std::string default_presets_path() { return SSFD_PRESETS_FILE; }

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Self-similar profiles of u_t = Δu^m + |x|^σ u^p: phase-space shooting and barrier checks", "ssfd"};
    app.require_subcommand(1);

    Common c_exp, c_cls, c_cat, c_int, c_swp, c_con, c_scn, c_cer, c_por, c_ver;
    auto* s_exp = app.add_subcommand("exponents", "critical exponents and self-similarity exponents");
    add_common(s_exp, c_exp);
    auto* s_cls = app.add_subcommand("classify", "parameter regime and expected behaviors");
    add_common(s_cls, c_cls);
    auto* s_cat = app.add_subcommand("catalog", "critical points, eigenvalues, stability");
    add_common(s_cat, c_cat);

    IntegrateOpts io;
    auto* s_int = app.add_subcommand("integrate", "integrate one orbit from the unstable manifold of P0 or a state");
    add_common(s_int, c_int);
    s_int->add_option("--C", io.C, "shooting parameter (inf allowed)");
    s_int->add_option("--state", io.state, "Main-chart start X,Y,Z instead of a P0 seed");
    s_int->add_option("--eta0", io.eta0, "eta at --state");

    std::string swp_grid = "0.01:10000:25";
    auto* s_swp = app.add_subcommand("sweep", "omega labels over a C grid");
    add_common(s_swp, c_swp);
    s_swp->add_option("--C-grid", swp_grid, "lo:hi:n (geometric) or comma list");

    ConnectOpts co;
    auto* s_con = app.add_subcommand("connect", "bisect the separatrix between two flank labels");
    add_common(s_con, c_con);
    s_con->add_option("--target", co.target, "P3 | Q1 | P1P3crit (default by direction and m)");
    s_con->add_option("--C-lo", co.C_lo, "lower bracket end");
    s_con->add_option("--C-hi", co.C_hi, "upper bracket end");
    s_con->add_option("--eta-target", co.eta_target, "stop continuation at this eta");
    s_con->add_option("--max-stages", co.max_stages, "continuation stages");

    std::string scn_grid = "0.01:1000:21";
    int scn_depth = 2;
    auto* s_scn = app.add_subcommand("scan-nonexistence", "grid and refinement search for connections to Q1");
    add_common(s_scn, c_scn);
    s_scn->add_option("--C-grid", scn_grid, "lo:hi:n (geometric) or comma list");
    s_scn->add_option("--depth", scn_depth, "refinement rounds");

    CertifyOpts cer;
    auto* s_cer = app.add_subcommand("certify", "certify the sign of a barrier expression on a grid");
    add_common(s_cer, c_cer);
    s_cer->add_option("--barrier", cer.barrier, "barrier id")->required();
    s_cer->add_option("--points", cer.points, "grid points per axis");
    s_cer->add_option("--bound", cer.bound, "bound of unbounded coordinates");
    s_cer->add_flag("--exact", cer.exact, "exact rational evaluation");
    s_cer->add_flag("--literal-interval", cer.literal, "PolynomialPc: printed c-interval");
    s_cer->add_flag("--explore", cer.explore, "evaluate outside applicability and report violations");

    std::string preset, presets_path;
    auto* s_por = app.add_subcommand("portrait", "CSV bundle of unstable-manifold orbits for a preset");
    add_common(s_por, c_por);
    s_por->add_option("--preset", preset, "preset name")->required();
    s_por->add_option("--presets", presets_path, "presets JSON file");

    ExplicitOpts eo;
    auto* s_ver = app.add_subcommand("verify-explicit", "residual check of an explicit solution family");
    add_common(s_ver, c_ver);
    s_ver->add_option("--family", eo.family, "Uc | power | pstar");
    s_ver->add_option("--C", eo.C, "U_C parameter");
    s_ver->add_option("--xi-lo", eo.xi_lo, "window start");
    s_ver->add_option("--xi-hi", eo.xi_hi, "window end");
    s_ver->add_option("--points", eo.points, "samples, uniform in ln xi (default 800 for Uc, 200 otherwise)");
    s_ver->add_option("--tol", eo.tol, "pass threshold on the scaled residual");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        if (code == 0) return 0;
        err << app.help();
        return 1;
    }

    auto run = [&](Common& c, auto&& body) -> int {
        try {
            apply_config(c);
            return body();
        } catch (const NumericalFailure& e) {
            json j = e.report;
            j["status"] = "numerical failure";
            j["message"] = e.what();
            out << j.dump(2) << "\n";
            err << "error: " << e.what() << "\n";
            return 2;
        } catch (const ParamError& e) {
            err << "parameter error (" << e.violation() << "): " << e.what() << "\n";
            return 1;
        } catch (const ProfileError& e) {
            err << "parameter error: " << e.what() << "\n";
            return 1;
        } catch (const BarrierError& e) {
            err << "parameter error: " << e.what() << "\n";
            return 1;
        } catch (const std::invalid_argument& e) {
            err << "parameter error: " << e.what() << "\n";
            return 1;
        } catch (const std::exception& e) {
            err << "error: " << e.what() << "\n";
            return 2;
        }
    };

    if (s_exp->parsed()) return run(c_exp, [&] { return cmd_exponents(c_exp, out); });
    if (s_cls->parsed()) return run(c_cls, [&] { return cmd_classify(c_cls, out); });
    if (s_cat->parsed()) return run(c_cat, [&] { return cmd_catalog(c_cat, out); });
    if (s_int->parsed()) return run(c_int, [&] { return cmd_integrate(c_int, io, out); });
    if (s_swp->parsed()) return run(c_swp, [&] { return cmd_sweep(c_swp, swp_grid, out); });
    if (s_con->parsed()) return run(c_con, [&] { return cmd_connect(c_con, co, out); });
    if (s_scn->parsed()) return run(c_scn, [&] { return cmd_scan(c_scn, scn_grid, scn_depth, out); });
    if (s_cer->parsed()) return run(c_cer, [&] { return cmd_certify(c_cer, cer, out); });
    if (s_por->parsed()) return run(c_por, [&] { return cmd_portrait(c_por, preset, presets_path, out); });
    if (s_ver->parsed()) return run(c_ver, [&] { return cmd_verify_explicit(c_ver, eo, out); });
    err << app.help();
    return 1;
}

}  // namespace ssfd
