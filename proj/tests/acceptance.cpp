// Acceptance runner. Usage: acceptance [id ...], ids 1..11 and 4b; no id runs all.
// One [PASS]/[FAIL] line per criterion; exit status 1 if any criterion fails.

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ssfd/barriers.hpp"
#include "ssfd/cli.hpp"
#include "ssfd/critical.hpp"
#include "ssfd/params.hpp"
#include "ssfd/phase.hpp"
#include "ssfd/profiles.hpp"
#include "ssfd/shooting.hpp"
#include "ssfd/trajectory.hpp"
#include "support.hpp"

using namespace ssfd;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v, int prec = 6) {
    std::ostringstream os;
    os.precision(prec);
    os << v;
    return os.str();
}

// Collects failed checks; the criterion passes when none failed.
struct Checks {
    std::vector<std::string> failed;
    std::ostringstream info;
    void require(bool ok, const std::string& what) {
        if (!ok) failed.push_back(what);
    }
    Outcome result() const {
        std::string d = info.str();
        for (const auto& f : failed) d += "; FAILED: " + f;
        return {failed.empty(), d};
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int run_cli(const std::vector<std::string>& args, std::string& out) {
    std::vector<const char*> argv{"ssfd"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream o, e;
    const int code = cli_main(static_cast<int>(argv.size()), argv.data(), o, e);
    out = o.str();
    return code;
}

Trajectory shoot(const Params& prm, double C) {
    return integrate({prm.direction, Chart::Main, {}}, prm, seed_P0_unstable(prm, C), shooting_controls(prm));
}

std::pair<double, double> first_transition(const Params& prm, const std::vector<double>& grid) {
    const SweepSummary s = summarize_sweep(sweep_C(prm, grid));
    if (s.transitions.empty()) return {NAN, NAN};
    return s.transitions.front();
}

// ---------------------------------------------------------------------------

Outcome c1() {
    Checks k;
    const RationalParams rp{Rational(2, 3), 3, Rational(3), Rational(1)};
    const auto t0 = std::chrono::steady_clock::now();
    const ExactExponents e = exact_exponents(rp);
    const double dt = seconds_since(t0);
    k.info << "p_F = " << e.p_F.str() << ", p_s = " << (e.p_s ? e.p_s->str() : "none")
           << ", " << fmt(dt * 1e3, 3) << " ms";
    k.require(e.p_F == Rational(5, 3), "p_F != 5/3");
    k.require(e.p_s && *e.p_s == Rational(14, 3), "p_s != 14/3");
    k.require(dt < 1e-3, "runtime >= 1 ms");
    return k.result();
}

Outcome c2() {
    Checks k;
    const fs::path dir = fs::temp_directory_path() / "ssfd_acceptance_figure2";
    fs::remove_all(dir);
    std::string out;
    const int code = run_cli({"portrait", "--preset", "figure2", "--out", dir.string()}, out);
    k.require(code == 0, "portrait exit " + std::to_string(code));
    size_t orbits = 0;
    if (fs::exists(dir))
        for (const auto& f : fs::directory_iterator(dir))
            if (f.path().extension() == ".csv" && f.path().filename().string().rfind("figure2_", 0) == 0) ++orbits;
    k.info << orbits << " orbit files";
    k.require(orbits >= 12, "fewer than 12 orbits");

    std::vector<std::pair<double, std::string>> labels;
    std::ifstream idx(dir / "figure2_index.json");
    if (idx) {
        const json j = json::parse(idx);
        for (const auto& f : j.at("files")) {
            const double C = f.at("C").is_number() ? f.at("C").get<double>() : INFINITY;
            labels.emplace_back(C, f.at("omega").get<std::string>());
        }
    }
    std::sort(labels.begin(), labels.end());
    k.require(!labels.empty(), "no index");
    if (!labels.empty()) {
        k.require(labels.front().second == "ToQ1", "smallest C not ToQ1");
        k.require(labels.back().second == "ToQ3", "largest C not ToQ3");
        int switches = 0;
        for (size_t i = 1; i < labels.size(); ++i)
            if (labels[i].second != labels[i - 1].second) {
                ++switches;
                k.info << ", transition in [" << fmt(labels[i - 1].first) << ", " << fmt(labels[i].first) << "]";
            }
        k.require(switches == 1, "labels not a ToQ1 prefix followed by a ToQ3 suffix");
    }
    return k.result();
}

Outcome c3() {
    Checks k;
    const Params prm{2.0 / 3, 3, 3, 1, Direction::Forward};
    const auto [lo, hi] = first_transition(prm, log_grid(1e-2, 1e4, 25));
    k.require(std::isfinite(lo), "no bracket");
    if (!std::isfinite(lo)) return k.result();
    const ConnectionCertificate cert = bisect_connection(prm, PointId::P3, lo, hi);
    const Vec3 p3 = coords_P3(prm);
    k.info << "C* = " << fmt(cert.C_lo, 12) << ", P3 = (" << fmt(p3[0]) << ", " << fmt(p3[1]) << ", " << fmt(p3[2])
           << "), closest approach " << fmt(cert.closest_approach, 3);
    k.require(std::abs(p3[0] - 54.0 / 11) < 1e-12 && std::abs(p3[1] + 6) < 1e-12 && p3[2] == 0.0, "P3 coordinates");
    k.require(cert.closest_approach <= 1e-3, "approach to P3 > 1e-3");
    try {
        const TailFit f = fit_tail(reconstruct_profile(cert.trajectory, prm), Behavior::TailFast);
        k.info << ", tail exponent " << fmt(f.exponent) << ", constant " << fmt(f.constant) << " (closed form "
               << fmt(fast_decay_constant(prm)) << ")";
        k.require(std::abs(f.exponent / -6.0 - 1) <= 0.01, "tail exponent outside -6 +- 1%");
        k.require(std::abs(f.constant / 64.0 - 1) <= 0.05, "tail constant outside 64 +- 5%");
    } catch (const std::exception& e) {
        k.require(false, std::string("tail fit: ") + e.what());
    }
    return k.result();
}

// Merged-point connection at m = m_c; the fit uses the window [1e2, 1e5].
Outcome critical_tail(const Params& prm) {
    Checks k;
    const double C0 = std::pow(3.0, -1.5);
    const SweepSummary s = summarize_sweep(sweep_C(prm, log_grid(1e-2, 1e4, 25)));
    k.info << "p = " << fmt(prm.p) << " (p_s = " << fmt(compute_exponents(prm).p_s) << "), sweep prefix ToQ1 "
           << s.prefix_ToQ1 << ", suffix ToQ3 " << s.suffix_ToQ3;
    if (s.transitions.empty()) {
        k.require(false, "no flank transition: no connection to the merged point on [1e-2, 1e4]");
        return k.result();
    }
    ConnectOptions opt;
    opt.eta_target = 14.0;
    const ConnectionCertificate cert =
        bisect_connection(prm, PointId::P1P3crit, s.transitions.front().first, s.transitions.front().second, opt);
    k.info << ", C* = " << fmt(cert.C_lo, 10);
    try {
        const TailFit f = fit_tail(reconstruct_profile(cert.trajectory, prm), Behavior::TailFastLog,
                                   std::make_pair(1e2, 1e5));
        k.info << ", RMS misfit " << fmt(f.misfit, 3) << ", max deviation " << fmt(f.max_deviation, 3)
               << ", constant " << fmt(f.constant) << " vs C0 = " << fmt(C0) << " (discrepancy "
               << fmt(f.constant / C0 - 1, 3) << ", not asserted)";
        k.require(f.misfit < 0.05, "template misfit >= 5%");
    } catch (const std::exception& e) {
        k.require(false, std::string("tail fit: ") + e.what());
    }
    return k.result();
}

Outcome c4() { return critical_tail({1.0 / 3, 3, 2, 0, Direction::Forward}); }
Outcome c4b() { return critical_tail({1.0 / 3, 3, 4.0 / 3, 0, Direction::Forward}); }

Outcome c5() {
    Checks k;
    const Params prm{2.0 / 3, 3, 5, 1, Direction::Forward};
    const auto grid = log_grid(1e-3, 1e3, 25);
    size_t p3 = 0, violations = 0, interior = 0;
    double worst = -INFINITY;
    for (double C : grid) {
        const Trajectory t = shoot(prm, C);
        if (t.omega.label == OmegaLabel::ToP3) ++p3;
        bool inside = false;
        for (const Sample& s : t.samples) {
            const auto u = to_main_coords(s.state);
            if (!u) continue;
            const double phi = *defining_function(BarrierId::CylinderE, prm, *u);
            if (!inside && phi < 0) inside = true;
            if (inside) {
                worst = std::max(worst, phi);
                if (phi > 1e-8) ++violations;
            }
        }
        if (inside) ++interior;
    }
    k.info << grid.size() << " orbits, " << p3 << " ToP3, " << interior << " became interior, " << violations
           << " cylinder violations (max Phi after entry " << fmt(worst, 3) << ")";
    k.require(p3 == 0, "ToP3 label");
    k.require(violations == 0, "orbit left the cylinder");
    return k.result();
}

Outcome c6() {
    Checks k;
    const Params prm{2.0 / 3, 3, 1.6, 1, Direction::Forward};
    GridSpec g;
    g.points_per_axis = 1000;
    const CertificationReport r = certify_sign_on_grid(BarrierId::PlaneG, prm, g);
    k.info << "G on " << r.points << " points: " << r.violation_count << " violations (max " << fmt(r.max_value, 3)
           << ")";
    k.require(r.applicable && r.passed(), "G certification");
    size_t entered = 0, left = 0, bad = 0;
    const auto grid = log_grid(1e-3, 1e3, 25);
    for (double C : grid) {
        const Trajectory t = shoot(prm, C);
        if (t.omega.label == OmegaLabel::ToQ1 || t.omega.label == OmegaLabel::ToP3) ++bad;
        bool in = false, out = false;
        for (const Sample& s : t.samples) {
            const auto u = to_main_coords(s.state);
            if (!u) continue;
            const double v = (*u)[1] + (*u)[0] / prm.N;
            if (!in && v <= 0) in = true;
            if (in && v > 1e-8) out = true;
        }
        entered += in;
        left += out;
    }
    k.info << ", " << entered << "/" << grid.size() << " orbits entered V, " << left << " left, " << bad
           << " ToQ1/ToP3 labels";
    k.require(entered == grid.size(), "orbit never entered V");
    k.require(left == 0, "orbit left V");
    k.require(bad == 0, "ToQ1 or ToP3 label");
    return k.result();
}

Outcome c7() {
    Checks k;
    const Params prm{2.0 / 3, 3, 2, -1, Direction::Backward};
    const double want = -(prm.sigma + 2) / (prm.p - prm.m);
    const ConnectionCertificate cert = bisect_connection(prm, PointId::Q1, 1e-2, 10);
    k.info << "p_s = " << fmt(compute_exponents(prm).p_s) << ", C* = " << fmt(cert.C_lo, 10) << ", omega "
           << to_string(cert.trajectory.omega.label);
    k.require(cert.trajectory.omega.label == OmegaLabel::ToQ1, "not ToQ1");
    if (cert.terminal_ratio) k.info << ", terminal y/x " << fmt(*cert.terminal_ratio);
    k.require(cert.ratio_fit.has_value(), "no ratio fit");
    if (cert.ratio_fit) {
        k.info << ", extrapolated y/x " << fmt(cert.ratio_fit->r0);
        k.require(std::abs(cert.ratio_fit->r0 - want) <= 1e-3, "ratio not within 1e-3 of -3/4");
    }
    try {
        const TailFit f = fit_tail(reconstruct_profile(cert.trajectory, prm), Behavior::TailSlow);
        k.info << ", tail exponent " << fmt(f.exponent);
        k.require(std::abs(f.exponent / want - 1) <= 0.01, "tail exponent outside 1%");
    } catch (const std::exception& e) {
        k.require(false, std::string("tail fit: ") + e.what());
    }
    return k.result();
}

Outcome c8() {
    Checks k;
    const Params prm{2.0 / 3, 3, 3, 0, Direction::Backward};
    const NonexistenceReport r = nonexistence_scan(prm, log_grid(1e-3, 1e3, 25), 2);
    size_t bad = 0;
    double margin = INFINITY;
    for (const CrossingRecord& c : r.downward_crossings) {
        margin = std::min(margin, c.Z - c.X);
        if (!(c.Z > c.X - 1e-8)) ++bad;
    }
    k.info << r.outcomes.size() << " orbits, " << r.refinement_rounds << " refinement rounds, "
           << r.counterexample_candidates.size() << " ToQ1, " << r.downward_crossings.size()
           << " downward crossings, min Z - X " << fmt(margin, 3);
    k.require(r.refinement_rounds == 2, "refinement rounds != 2");
    k.require(r.counterexample_candidates.empty(), "ToQ1 label found");
    k.require(bad == 0, "downward crossing with Z <= X");
    return k.result();
}

Outcome c9() {
    Checks k;
    GridSpec g;
    g.points_per_axis = 1000;
    g.bound = 100.0;
    struct Case {
        BarrierId id;
        Params prm;
        bool literal = false;
    };
    const Case cases[] = {
        {BarrierId::Plane1F1, {2.0 / 3, 3, 2, 1, Direction::Backward}},
        {BarrierId::SurfaceF2, {2.0 / 3, 3, 2, 1, Direction::Backward}},
        {BarrierId::CylinderE, {2.0 / 3, 3, 14.0 / 3, 1, Direction::Forward}},
        {BarrierId::PolynomialPc, {2.0 / 3, 4, 1.75, 3, Direction::Backward}, true},
    };
    for (const Case& c : cases) {
        GridSpec gc = g;
        gc.options.polc_literal_interval = c.literal;
        const CertificationReport r = certify_sign_on_grid(c.id, c.prm, gc);
        k.info << to_string(c.id) << " " << r.points << " pts " << r.violation_count << " viol; ";
        k.require(r.applicable, to_string(c.id) + " inapplicable: " + r.inapplicable_reason);
        k.require(r.passed(), to_string(c.id) + " violations");
    }
    GridSpec neg = g;
    neg.options.unchecked = true;
    const CertificationReport r = certify_sign_on_grid(BarrierId::Plane1F1, {2.0 / 3, 3, 1.6, 1, Direction::Backward}, neg);
    k.info << "negative control Plane1F1 at p = 1.6: " << r.violation_count << " violations";
    k.require(r.violation_count >= 1, "negative control shows no violation");
    return k.result();
}

Outcome c10() {
    Checks k;
    std::vector<std::vector<std::string>> runs;
    for (const char* C : {"0.5", "1", "2"})
        runs.push_back({"verify-explicit", "--family", "Uc", "--m", "2/3", "--N", "3", "--sigma", "1", "--p", "14/3",
                        "--C", C});
    runs.push_back({"verify-explicit", "--family", "power", "--m", "2/3", "--N", "3", "--sigma", "1", "--p", "3"});
    runs.push_back({"verify-explicit", "--family", "pstar", "--m", "2/3", "--N", "4", "--sigma", "3", "--p", "2"});
    for (const auto& a : runs) {
        std::string out;
        const int code = run_cli(a, out);
        double res = NAN;
        try {
            res = json::parse(out).at("max_scaled_residual").get<double>();
        } catch (const std::exception&) {
        }
        const std::string name = a[2] + (a.size() > 12 ? " C=" + a[12] : "");
        k.info << name << " " << fmt(res, 3) << "; ";
        k.require(code == 0 && res <= 1e-8, name + " residual");
    }
    const Params pw{2.0 / 3, 3, 3, 1, Direction::Forward};
    const double K = power_stationary_constant(pw);
    k.info << "K = " << fmt(K, 12);
    k.require(std::abs(K - std::pow(6.0 / 49, 3.0 / 7)) <= 1e-12, "K != (6/49)^(3/7)");
    return k.result();
}

double spectrum_distance(const CVec3& a, std::vector<std::complex<double>> rest) {
    double worst = 0.0;
    for (const auto& z : a) {
        auto it = std::min_element(rest.begin(), rest.end(),
                                   [&](auto p, auto q) { return std::abs(p - z) < std::abs(q - z); });
        worst = std::max(worst, std::abs(*it - z) / (1.0 + std::abs(z)));
        rest.erase(it);
    }
    return worst;
}

Outcome c11() {
    Checks k;
    std::mt19937_64 rng(20261015);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    double fixed = 0, plane = 0, drift = 0, jac = 0, eig = 0;
    const Chart charts[] = {Chart::Main, Chart::Inf1, Chart::Inf2, Chart::Ext};
    for (int i = 0; i < 200; ++i) {
        const Direction d = i % 2 ? Direction::Backward : Direction::Forward;
        const Params prm = test::random_params(rng, d);

        for (const auto& pt : enumerate_points(prm)) {
            if (pt.id == PointId::Qgamma && !pt.relevant) continue;
            const Field F(pt.system(prm.direction), prm);
            fixed = std::max(fixed, norm(F(pt.coords)) / (1.0 + norm(pt.coords)));
            if (!pt.linearization || !pt.eigen) continue;
            Eigen::Matrix3d A;
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c) A(r, c) = (*pt.linearization)[r][c];
            Eigen::EigenSolver<Eigen::Matrix3d> es(A, false);
            eig = std::max(eig, spectrum_distance(pt.eigen->values, {es.eigenvalues().data(), es.eigenvalues().data() + 3}));
        }

        for (Chart ch : charts) {
            const SystemId sys{d, ch, ch == Chart::Inf2 ? std::optional<Branch>(i % 4 < 2 ? Branch::Minus : Branch::Plus)
                                                        : std::nullopt};
            const Field F(sys, prm);
            const Vec3 s{std::abs(u(rng)), u(rng), std::abs(u(rng))};
            const Mat3 J = F.jacobian(s);
            const double h = 1e-5;
            for (int j = 0; j < 3; ++j) {
                Vec3 a = s, b = s;
                a[j] += h;
                b[j] -= h;
                const Vec3 fa = F(a), fb = F(b);
                for (int r = 0; r < 3; ++r)
                    jac = std::max(jac, std::abs((fa[r] - fb[r]) / (2 * h) - J[r][j]) / (1 + std::abs(J[r][j])));
            }
        }

        // Invariant planes {X = 0} and {Z = 0} of the Main system.
        Controls pc;
        pc.eta_max = 5.0;
        pc.stop_on_omega = false;
        pc.log_variables = false;
        // Backward orbits in {Z = 0} can reach x = 0 of the Inf1 chart before eta_max.
        pc.max_steps = 20000;
        const SystemId main{d, Chart::Main, {}};
        const Trajectory tx = integrate(main, prm, PhaseState{{0.0, -0.1, 0.2}, Chart::Main, 0}, pc);
        const Trajectory tz = integrate(main, prm, PhaseState{{0.3, -0.1, 0.0}, Chart::Main, 0}, pc);
        for (const Sample& s : tx.samples) plane = std::max(plane, std::abs(s.state.c[0]));
        for (const Sample& s : tz.samples) plane = std::max(plane, std::abs(s.state.c[2]));

        if (d == Direction::Forward && i % 10 == 0) {
            Params q = test::random_fujita_sobolev(rng);
            Controls ctl;
            ctl.eta_max = 20.0;
            ctl.stop_on_omega = false;
            ctl.chart_switch_bound = 1e300;
            const Trajectory t = integrate({q.direction, Chart::Main, {}}, q, seed_P0_unstable(q, 1.0), ctl);
            drift = std::max(drift, t.integrator_stats.max_residual);
        }
    }
    k.info << "fixed-point residual " << fmt(fixed, 3) << ", plane leak " << fmt(plane, 3) << ", eta drift "
           << fmt(drift, 3) << ", Jacobian FD " << fmt(jac, 3) << ", eigenvalues " << fmt(eig, 3);
    k.require(fixed <= 1e-12, "fixed-point residual");
    k.require(plane <= 1e-10, "invariant plane leak");
    k.require(drift <= 1e-7, "eta invariant drift");
    k.require(jac <= 1e-6, "Jacobian disagreement");
    k.require(eig <= 1e-10, "eigenvalue disagreement");
    return k.result();
}

struct Criterion {
    std::string id;
    std::string title;
    double budget;  // seconds
    std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> list = {
        {"1", "exact exponent table", 1e-3, c1},
        {"2", "figure2 portrait and sweep", 30, c2},
        {"3", "fast-decay connection to P3", 60, c3},
        {"4", "critical-case tail at m = 1/3, sigma = 0, p = 2", 120, c4},
        {"4b", "critical-case tail at m = 1/3, sigma = 0, p = 4/3", 120, c4b},
        {"5", "above-Sobolev exclusion", 60, c5},
        {"6", "below-Fujita exclusion", 60, c6},
        {"7", "blow-up connection for sigma = -1", 60, c7},
        {"8", "blow-up non-existence for sigma = 0", 120, c8},
        {"9", "barrier certifications", 60, c9},
        {"10", "explicit solutions", 5, c10},
        {"11", "property suites over 200 parameter sets", 120, c11},
    };
    return list;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> ids(argv + 1, argv + argc);
    bool all_ok = true;
    int ran = 0;
    for (const Criterion& c : criteria()) {
        if (!ids.empty() && std::find(ids.begin(), ids.end(), c.id) == ids.end()) continue;
        ++ran;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double dt = seconds_since(t0);
        // Criterion 1 times the exact computation itself; the others are timed whole.
        if (c.id != "1" && dt >= c.budget) {
            o.pass = false;
            o.detail += "; FAILED: runtime " + fmt(dt, 3) + " s over budget " + fmt(c.budget) + " s";
        }
        std::printf("[%s] criterion %s: %s (%.3f s) -- %s\n", o.pass ? "PASS" : "FAIL", c.id.c_str(), c.title.c_str(),
                    dt, o.detail.c_str());
        std::fflush(stdout);
        all_ok = all_ok && o.pass;
    }
    if (ran == 0) {
        std::fprintf(stderr, "unknown criterion id\n");
        return 2;
    }
    return all_ok ? 0 : 1;
}
