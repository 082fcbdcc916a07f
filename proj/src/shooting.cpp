#include "ssfd/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>

namespace ssfd {

namespace {

const char* kY0Up = "Y=0 up";
const char* kY0 = "Y=0";

bool backward_negative_sigma(const Params& prm) { return prm.direction == Direction::Backward && prm.sigma < 0.0; }

struct Run {
    Trajectory tr;
    std::string flank;
};

Run run_seed(const Params& prm, double C, double delta, const Controls& ctl) {
    const LocalSeed sd = seed_P0_unstable(prm, C, delta);
    Run r;
    r.tr = integrate(SystemId{prm.direction, Chart::Main, {}}, prm, sd, ctl);
    r.flank = flank_label(prm, r.tr);
    return r;
}

Run run_state(const Params& prm, const PhaseState& s, const Controls& ctl, double tau_offset) {
    Run r;
    r.tr = integrate(SystemId{prm.direction, s.chart, {}}, prm, s, ctl);
    for (auto& smp : r.tr.samples) smp.tau += tau_offset;
    r.flank = flank_label(prm, r.tr);
    return r;
}

ShootingOutcome to_outcome(double C, const Run& r) {
    ShootingOutcome o;
    o.C = C;
    o.omega = r.tr.omega;
    o.flank = r.flank;
    o.events = r.tr.events;
    if (!r.tr.samples.empty()) o.terminal = r.tr.samples.back().state;
    return o;
}

template <class F>
void parallel_for(size_t n, F&& f) {
    const size_t nt = std::max<size_t>(1, std::min<size_t>(n, std::thread::hardware_concurrency()));
    std::vector<std::future<void>> futs;
    for (size_t t = 0; t < nt; ++t)
        futs.push_back(std::async(std::launch::async, [&, t] {
            for (size_t i = t; i < n; i += nt) f(i);
        }));
    for (auto& fu : futs) fu.get();
}

}  // namespace

Controls shooting_controls(const Params& prm, Controls base) {
    if (backward_negative_sigma(prm)) base.events.push_back({kY0Up, [](const Vec3& u) { return u[1]; }, true, +1});
    return base;
}

std::string flank_label(const Params& prm, const Trajectory& tr) {
    if (backward_negative_sigma(prm) && tr.termination == "terminal event" && !tr.events.empty() &&
        tr.events.back().name == kY0Up)
        return "CrossedY0Up";
    return to_string(tr.omega.label);
}

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = n == 1 ? lo : lo * std::pow(hi / lo, double(i) / (n - 1));
    return g;
}

std::vector<ShootingOutcome> sweep_C(const Params& prm, const std::vector<double>& C_grid, double seed_delta,
                                     const Controls& ctl) {
    validate(prm);
    for (size_t i = 0; i < C_grid.size(); ++i) {
        if (!(C_grid[i] > 0.0)) throw std::invalid_argument("sweep_C: grid must be positive");
        if (i > 0 && !(C_grid[i] > C_grid[i - 1])) throw std::invalid_argument("sweep_C: grid must be sorted");
    }
    const Controls c = shooting_controls(prm, ctl);
    std::vector<ShootingOutcome> out(C_grid.size());
    parallel_for(C_grid.size(), [&](size_t i) {
        try {
            out[i] = to_outcome(C_grid[i], run_seed(prm, C_grid[i], seed_delta, c));
        } catch (const SeedError& e) {
            out[i].C = C_grid[i];
            out[i].flank = to_string(OmegaLabel::Undetermined);
            out[i].error = e.what();
        }
    });
    return out;
}

SweepSummary summarize_sweep(const std::vector<ShootingOutcome>& outcomes) {
    SweepSummary s;
    while (s.prefix_ToQ1 < outcomes.size() && outcomes[s.prefix_ToQ1].flank == "ToQ1") ++s.prefix_ToQ1;
    while (s.suffix_ToQ3 < outcomes.size() && outcomes[outcomes.size() - 1 - s.suffix_ToQ3].flank == "ToQ3")
        ++s.suffix_ToQ3;
    for (size_t i = 0; i < outcomes.size(); ++i) {
        if (outcomes[i].omega.label == OmegaLabel::Undetermined && outcomes[i].flank == "Undetermined")
            ++s.undetermined;
        if (i > 0 && outcomes[i].flank != outcomes[i - 1].flank)
            s.transitions.emplace_back(outcomes[i - 1].C, outcomes[i].C);
    }
    return s;
}

// ---------------------------------------------------------------- connections

namespace {

double rel_diff(const Vec3& a, const Vec3& b) {
    double d = 0.0;
    for (int i = 0; i < 3; ++i) d = std::max(d, std::abs(a[i] - b[i]) / (1.0 + std::abs(a[i])));
    return d;
}

// Main coordinates of tr at profile variable eta by linear interpolation; empty past its end.
std::optional<Vec3> main_at(const Trajectory& tr, double eta) {
    const auto& s = tr.samples;
    if (s.empty() || eta < s.front().state.eta || eta > s.back().state.eta) return std::nullopt;
    auto it = std::lower_bound(s.begin(), s.end(), eta,
                               [](const Sample& a, double e) { return a.state.eta < e; });
    if (it == s.begin()) return to_main_coords(it->state);
    const auto& b = *it;
    const auto& a = *(it - 1);
    const auto ma = to_main_coords(a.state), mb = to_main_coords(b.state);
    if (!ma || !mb) return std::nullopt;
    const double w = b.state.eta > a.state.eta ? (eta - a.state.eta) / (b.state.eta - a.state.eta) : 0.0;
    return (1.0 - w) * *ma + w * *mb;
}

// First index of base where it separates from partner by more than tol.
size_t divergence_index(const Trajectory& base, const Trajectory& partner, double tol) {
    for (size_t i = 0; i < base.samples.size(); ++i) {
        const auto mb = to_main_coords(base.samples[i].state);
        const auto mp = main_at(partner, base.samples[i].state.eta);
        if (!mb || !mp || rel_diff(*mb, *mp) > tol) return i;
    }
    return base.samples.size();
}

}  // namespace

std::optional<RatioFit> fit_q1_ratio(const Trajectory& tr, double X_min) {
    // Basis of the center-manifold expansion of y/x in powers of 1/X with Z bounded.
    constexpr int K = 6;
    std::array<std::array<double, K + 1>, K> A{};
    int n = 0;
    std::vector<std::pair<std::array<double, K>, double>> rows;
    for (const auto& s : tr.samples) {
        const auto mc = to_main_coords(s.state);
        if (!mc || (*mc)[0] < X_min) continue;
        const double X = (*mc)[0], Y = (*mc)[1], Z = (*mc)[2];
        const double u = 1.0 / X;
        rows.push_back({{1.0, u, Z * u, u * u, Z * u * u, Z * Z * u * u}, Y});
    }
    if (rows.size() < 2 * K) return std::nullopt;
    for (const auto& [phi, y] : rows) {
        for (int i = 0; i < K; ++i) {
            for (int j = 0; j < K; ++j) A[i][j] += phi[i] * phi[j];
            A[i][K] += phi[i] * y;
        }
        ++n;
    }
    // Gaussian elimination with partial pivoting on the normal equations.
    for (int c = 0; c < K; ++c) {
        int piv = c;
        for (int r = c + 1; r < K; ++r)
            if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
        std::swap(A[c], A[piv]);
        if (A[c][c] == 0.0) return std::nullopt;
        for (int r = 0; r < K; ++r) {
            if (r == c) continue;
            const double f = A[r][c] / A[c][c];
            for (int j = c; j <= K; ++j) A[r][j] -= f * A[c][j];
        }
    }
    std::array<double, K> coef;
    for (int i = 0; i < K; ++i) coef[i] = A[i][K] / A[i][i];
    double ss = 0.0;
    for (const auto& [phi, y] : rows) {
        double f = 0.0;
        for (int i = 0; i < K; ++i) f += coef[i] * phi[i];
        ss += (f - y) * (f - y);
    }
    return RatioFit{coef[0], std::sqrt(ss / n), n};
}

ConnectionCertificate bisect_connection(const Params& prm, PointId target, double C_lo, double C_hi,
                                        const ConnectOptions& opt) {
    validate(prm);
    const Exponents e = compute_exponents(prm);
    const bool mcrit = prm.N > 2 && std::abs(prm.m - e.m_c) <= kBoundaryTol;
    std::pair<std::string, std::string> flanks;
    std::string reached;
    switch (target) {
        case PointId::P3:
            if (prm.direction != Direction::Forward || mcrit)
                throw ShootingError("target P3 needs the forward system with m > m_c");
            flanks = {"ToQ1", "ToQ3"};
            reached = "ToP3";
            break;
        case PointId::P1P3crit:
            if (prm.direction != Direction::Forward || !mcrit)
                throw ShootingError("target P1P3crit needs the forward system with m = m_c");
            flanks = {"ToQ1", "ToQ3"};
            reached = "ToP1P3crit";
            break;
        case PointId::Q1:
            if (!backward_negative_sigma(prm)) throw ShootingError("target Q1 needs the backward system with sigma < 0");
            flanks = {"CrossedY0Up", "ToQ3"};
            reached = "ToQ1";
            break;
        default: throw ShootingError("unsupported connection target " + to_string(target));
    }
    if (!(C_lo > 0.0 && C_hi > C_lo)) throw ShootingError("bracket must satisfy 0 < C_lo < C_hi");

    const Controls ctl = shooting_controls(prm, opt.controls);
    ConnectionCertificate cert;
    cert.params = prm;
    cert.target = target;
    cert.seed_delta = opt.seed_delta;

    auto is_flank = [&](const std::string& f) { return f == flanks.first || f == flanks.second; };
    Run rlo = run_seed(prm, C_lo, opt.seed_delta, ctl), rhi = run_seed(prm, C_hi, opt.seed_delta, ctl);
    cert.integrations = 2;
    if (rlo.flank == rhi.flank)
        throw ShootingError("bracket endpoints share the label " + rlo.flank + "; no separatrix inside");
    if (!is_flank(rlo.flank) || !is_flank(rhi.flank))
        throw ShootingError("bracket endpoints are not the flanking labels: " + rlo.flank + ", " + rhi.flank);

    double lo = C_lo, hi = C_hi;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        Run r = run_seed(prm, mid, opt.seed_delta, ctl);
        ++cert.integrations;
        if (!is_flank(r.flank)) {
            // Undetermined at the midpoint: retry with a finer seed offset.
            r = run_seed(prm, mid, opt.seed_delta / 2.0, ctl);
            ++cert.integrations;
            if (!is_flank(r.flank))
                throw ShootingError("persistent label " + r.flank + " at C = " + std::to_string(mid));
        }
        if (r.flank == rlo.flank) {
            lo = mid;
            rlo = std::move(r);
        } else {
            hi = mid;
            rhi = std::move(r);
        }
    }
    if (hi - lo > opt.bracket_rtol * hi) throw ShootingError("bisection did not reach the bracket tolerance");
    cert.C_lo = lo;
    cert.C_hi = hi;
    cert.flank_lo = rlo.flank;
    cert.flank_hi = rhi.flank;

    // Staged continuation: re-shoot along Y where the flanks separate.
    const auto catalog = enumerate_points(prm);
    std::vector<Sample> prefix;
    Trajectory base = rlo.tr, partner = rhi.tr;
    double last_reach = -INFINITY;
    bool done = false;
    for (int stage = 0; stage <= opt.max_stages && !done; ++stage) {
        const size_t idiv = divergence_index(base, partner, 1e-6);
        // Trusted part: the whole base when it already met the target criterion.
        const bool base_reached = to_string(base.omega.label) == reached;
        const size_t ntrust = base_reached ? base.samples.size() : idiv;
        std::vector<Sample> trusted(prefix);
        trusted.insert(trusted.end(), base.samples.begin(), base.samples.begin() + ntrust);
        cert.trajectory = base;
        cert.trajectory.samples = trusted;
        cert.stages = stage;
        const OmegaLimit om = classify_omega(cert.trajectory, catalog, opt.controls);
        const double reach = trusted.empty() ? -INFINITY : trusted.back().state.eta;
        if (to_string(om.label) == reached || (opt.eta_target && reach >= *opt.eta_target) || stage == opt.max_stages ||
            reach <= last_reach) {
            done = true;
            break;
        }
        last_reach = reach;

        size_t j = divergence_index(base, partner, 1e-9);
        if (j == 0 || j >= base.samples.size()) break;
        j = std::min(j, ntrust - 1);
        const PhaseState S = base.samples[j].state;
        if (S.chart != Chart::Main) break;
        const double tau0 = base.samples[j].tau;
        const auto mp = idiv < base.samples.size() ? main_at(partner, base.samples[idiv].state.eta) : std::nullopt;
        const auto mb = idiv < base.samples.size() ? to_main_coords(base.samples[idiv].state) : std::nullopt;
        const double dir = mp && mb && (*mp)[1] < (*mb)[1] ? -1.0 : 1.0;

        auto shoot = [&](double eps) {
            PhaseState s = S;
            s.c[1] += eps;
            ++cert.integrations;
            return run_state(prm, s, ctl, tau0);
        };
        const std::string fb = rlo.flank;
        double far = dir * 1e-14 * (1.0 + std::abs(S.c[1]));
        Run rf = shoot(far);
        while (rf.flank == fb && std::abs(far) < 1e-2) {
            far *= 10.0;
            rf = shoot(far);
        }
        if (rf.flank == reached) {
            prefix.insert(prefix.end(), base.samples.begin(), base.samples.begin() + j);
            base = rf.tr;
            partner = rf.tr;
            continue;
        }
        if (rf.flank == fb) break;
        double a = 0.0, b = far;
        Run ra = shoot(0.0), rb = std::move(rf);
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (a + b);
            if (mid == a || mid == b) break;
            Run r = shoot(mid);
            if (r.flank == reached) {
                ra = std::move(r);
                break;
            }
            if (r.flank == fb) {
                a = mid;
                ra = std::move(r);
            } else {
                b = mid;
                rb = std::move(r);
            }
        }
        prefix.insert(prefix.end(), base.samples.begin(), base.samples.begin() + j);
        base = std::move(ra.tr);
        partner = std::move(rb.tr);
    }

    Trajectory& T = cert.trajectory;
    T.omega = classify_omega(T, catalog, opt.controls);
    T.termination = "separatrix continuation";
    // Closest approach and terminal diagnostics.
    cert.closest_approach = INFINITY;
    if (target == PointId::Q1) {
        for (const auto& s : T.samples) {
            const auto mc = to_main_coords(s.state);
            if (!mc || (*mc)[0] <= 0.0) continue;
            const double x = 1.0 / (*mc)[0];
            if (x < cert.closest_approach) {
                cert.closest_approach = x;
                cert.closest_state = s.state;
            }
        }
        if (!T.samples.empty())
            if (const auto mc = to_main_coords(T.samples.back().state)) cert.terminal_ratio = (*mc)[1];
        cert.ratio_fit = fit_q1_ratio(T, 5.0);
    } else {
        const Vec3 P = find_point(catalog, target)->coords;
        for (const auto& s : T.samples) {
            const auto mc = to_main_coords(s.state);
            if (!mc) continue;
            const double d = norm(*mc - P) / norm(P);
            if (d < cert.closest_approach) {
                cert.closest_approach = d;
                cert.closest_state = s.state;
            }
        }
    }
    cert.note = "omega " + to_string(T.omega.label) + " after " + std::to_string(cert.stages) + " continuation stages";
    return cert;
}

// ---------------------------------------------------------------- nonexistence

NonexistenceReport nonexistence_scan(const Params& prm, const std::vector<double>& C_grid, int refinement_depth,
                                     double seed_delta, const Controls& ctl) {
    validate(prm);
    if (prm.direction != Direction::Backward || prm.sigma < 0.0)
        throw std::invalid_argument("nonexistence_scan needs the backward system with sigma >= 0");
    Controls c = ctl;
    c.events.push_back({kY0, [](const Vec3& u) { return u[1]; }, false, 0});

    NonexistenceReport rep;
    rep.params = prm;
    rep.outcomes = sweep_C(prm, C_grid, seed_delta, c);
    for (int round = 0; round < refinement_depth; ++round) {
        std::vector<double> extra;
        // Geometric midpoint of every interval; quarter points where the flank changes.
        for (size_t i = 1; i < rep.outcomes.size(); ++i) {
            const double a = rep.outcomes[i - 1].C, b = rep.outcomes[i].C;
            if (!(a > 0.0) || !std::isfinite(b)) continue;
            if (rep.outcomes[i].flank == rep.outcomes[i - 1].flank)
                extra.push_back(std::sqrt(a * b));
            else
                for (int k = 1; k <= 3; ++k) extra.push_back(a * std::pow(b / a, k / 4.0));
        }
        if (extra.empty()) break;
        std::sort(extra.begin(), extra.end());
        auto more = sweep_C(prm, extra, seed_delta, c);
        rep.outcomes.insert(rep.outcomes.end(), more.begin(), more.end());
        std::sort(rep.outcomes.begin(), rep.outcomes.end(),
                  [](const ShootingOutcome& x, const ShootingOutcome& y) { return x.C < y.C; });
        rep.refinement_rounds = round + 1;
    }
    for (const auto& o : rep.outcomes) {
        if (o.flank == "ToQ1") rep.counterexample_candidates.push_back(o.C);
        for (const auto& ev : o.events) {
            if (ev.name != kY0 || ev.direction != -1) continue;
            const auto mc = to_main_coords(ev.state);
            if (!mc) continue;
            rep.downward_crossings.push_back({o.C, (*mc)[0], (*mc)[2], -1});
            if (prm.sigma == 0.0 && !((*mc)[2] > (*mc)[0] - 1e-8)) ++rep.crossing_violations;
        }
    }
    rep.statement = rep.counterexample_candidates.empty()
                        ? "no connection to Q1 found under configuration"
                        : "counterexample candidates labeled ToQ1; inspect the listed trajectories";
    return rep;
}

}  // namespace ssfd
