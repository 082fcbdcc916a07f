#include "ssfd/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

namespace ssfd {

std::optional<Vec3> to_main_coords(const PhaseState& s) {
    const Vec3& u = s.c;
    switch (s.chart) {
        case Chart::Main: return u;
        case Chart::Inf1:
            if (!(u[0] > 0.0)) return std::nullopt;
            return Vec3{1.0 / u[0], u[1] / u[0], u[2] / u[0]};
        case Chart::Ext:
            if (!(u[0] > 0.0)) return std::nullopt;
            return Vec3{1.0 / u[0], u[1] / u[0], u[2] / (u[0] * u[0])};
        case Chart::Inf2:
            if (u[2] == 0.0) return std::nullopt;
            return Vec3{u[0] / u[2], 1.0 / u[2], u[1] / u[2]};
    }
    return std::nullopt;
}

// ---------------------------------------------------------------- detector

OmegaDetector::OmegaDetector(const Params& prm, const std::vector<CriticalPointInfo>& catalog, const Controls& ctl)
    : prm_(prm), ctl_(ctl), main_(SystemId{prm.direction, Chart::Main, {}}, prm) {
    for (const auto& c : catalog) {
        if (!c.relevant || !c.linearization) continue;
        switch (c.id) {
            case PointId::P2:
            case PointId::P3:
            case PointId::P1P3crit:
            case PointId::Q5:
            case PointId::Qgamma:
            case PointId::Q1prime:
            case PointId::Q5prime: targets_.push_back({c.id, c.chart, c.coords}); break;
            default: break;
        }
    }
    q1_ratio_ = -(prm.sigma + 2.0) / (prm.p - prm.m);
    q3_bound_ = ctl.q3_factor * std::max(2.0 / (1.0 - prm.m), (prm.N - 2.0) / prm.m);
}

namespace {

OmegaLabel label_for(PointId id) {
    switch (id) {
        case PointId::P2: return OmegaLabel::ToP2;
        case PointId::P3: return OmegaLabel::ToP3;
        case PointId::P1P3crit: return OmegaLabel::ToP1P3crit;
        case PointId::Q5: return OmegaLabel::ToQ5;
        case PointId::Qgamma: return OmegaLabel::ToQgamma;
        default: return OmegaLabel::VerticalAsymptote;
    }
}

double dist_inf(const Vec3& a, const Vec3& b) {
    return std::max({std::abs(a[0] - b[0]), std::abs(a[1] - b[1]), std::abs(a[2] - b[2])});
}

double scale_inf(const Vec3& a) { return 1.0 + std::max({std::abs(a[0]), std::abs(a[1]), std::abs(a[2])}); }

Behavior asymptote_tag(const Params& prm) {
    return prm.direction == Direction::Forward ? Behavior::VerticalAsymptoteForward
                                               : Behavior::VerticalAsymptoteBackward;
}

}  // namespace

std::optional<OmegaLimit> OmegaDetector::feed(const PhaseState& s, double tau) {
    const auto mc = to_main_coords(s);
    if (mc && std::isfinite((*mc)[1])) {
        const double Y = (*mc)[1];
        if (Y < -q3_bound_ && main_(*mc)[1] < 0.0) {
            OmegaLimit o;
            o.label = OmegaLabel::ToQ3;
            o.terminal_distance = std::abs(Y);
            o.note = "Y below escape bound with Y' < 0";
            return o;
        }
    }
    // Q1 ray criterion in Inf1 coordinates and Inf1 chart time (d eta1 = X d eta).
    std::optional<Vec3> inf1;
    if (s.chart == Chart::Inf1) {
        inf1 = s.c;
    } else if (s.chart == Chart::Main && s.c[0] > 0.0) {
        inf1 = Vec3{1.0 / s.c[0], s.c[1] / s.c[0], s.c[2] / s.c[0]};
    }
    if (last_tau_) {
        const double dt = tau - *last_tau_;
        eta1_ += s.chart == Chart::Main && last_chart_ == Chart::Main ? 0.5 * (last_X_ + s.c[0]) * dt : dt;
    }
    last_tau_ = tau;
    last_chart_ = s.chart;
    last_X_ = s.chart == Chart::Main ? s.c[0] : 0.0;
    if (inf1) {
        const double x = (*inf1)[0], y = (*inf1)[1], z = (*inf1)[2];
        const bool in = x > 0.0 && x < ctl_.q1_x_max && std::abs(z) < ctl_.q1_x_max &&
                        std::abs(y / x - q1_ratio_) < ctl_.q1_ratio_tol;
        if (!in) {
            q1_entered_ = -1.0;
        } else {
            if (q1_entered_ < 0.0) q1_entered_ = eta1_;
            if (eta1_ - q1_entered_ >= ctl_.dwell_span) {
                OmegaLimit o;
                o.label = OmegaLabel::ToQ1;
                o.terminal_distance = std::max({x, std::abs(y), std::abs(z)});
                o.dwell_span = eta1_ - q1_entered_;
                o.ratio = y / x;
                o.note = "Inf1 ray criterion";
                return o;
            }
        }
    } else {
        q1_entered_ = -1.0;
    }
    for (auto& t : targets_) {
        if (t.chart != s.chart) {
            t.entered = -1.0;
            continue;
        }
        const double d = dist_inf(s.c, t.coords);
        if (d > ctl_.dwell_eps * scale_inf(t.coords)) {
            t.entered = -1.0;
            continue;
        }
        if (t.entered < 0.0) t.entered = tau;
        if (tau - t.entered >= ctl_.dwell_span) {
            OmegaLimit o;
            o.label = label_for(t.id);
            if (o.label == OmegaLabel::VerticalAsymptote) o.behavior = asymptote_tag(prm_);
            o.terminal_distance = d;
            o.dwell_span = tau - t.entered;
            o.note = "dwell at " + to_string(t.id);
            return o;
        }
    }
    return std::nullopt;
}

OmegaLimit OmegaDetector::finish(const PhaseState& last, const std::string& reason) const {
    OmegaLimit o;
    o.note = reason;
    const auto mc = to_main_coords(last);
    if (reason == "step failure" && mc) {
        const double Y = (*mc)[1];
        if (Y < -q3_bound_ / ctl_.q3_factor) {
            o.label = OmegaLabel::ToQ3;
            o.terminal_distance = std::abs(Y);
            return o;
        }
        if (Y > q3_bound_ / ctl_.q3_factor) {
            o.label = OmegaLabel::VerticalAsymptote;
            o.behavior = asymptote_tag(prm_);
            o.terminal_distance = std::abs(Y);
            return o;
        }
    }
    double best = std::numeric_limits<double>::infinity();
    for (const auto& t : targets_)
        if (t.chart == last.chart) best = std::min(best, dist_inf(last.c, t.coords));
    o.terminal_distance = best;
    return o;
}

// ---------------------------------------------------------------- integrator

namespace {

using V4 = std::array<double, 4>;

V4 axpy(const V4& y, double h, std::initializer_list<std::pair<double, const V4*>> terms) {
    V4 r = y;
    for (const auto& [c, k] : terms)
        if (c != 0.0)
            for (int i = 0; i < 4; ++i) r[i] += h * c * (*k)[i];
    return r;
}

// State in integration variables: components 0 and 2 may be logarithms, index 3 is eta.
struct Work {
    Chart chart = Chart::Main;
    bool log0 = false, log2 = false;
    V4 v{};
};

class System {
public:
    System(const SystemId& sys, const Params& prm) : prm_(prm), dir_(sys.direction), branch_(sys.branch) {
        k_ = (prm.p - prm.m) / (prm.sigma + 2.0);
        s_ = sys.direction == Direction::Forward ? -1.0 : 1.0;
        set_chart(sys.chart);
    }

    void set_chart(Chart c) {
        chart_ = c;
        field_.emplace(SystemId{dir_, c, c == Chart::Inf2 ? branch_ : std::nullopt}, prm_);
    }

    Vec3 phys(const Work& w) const {
        return {w.log0 ? std::exp(w.v[0]) : w.v[0], w.v[1], w.log2 ? std::exp(w.v[2]) : w.v[2]};
    }

    V4 operator()(const Work& w, const V4& v) const {
        Work t = w;
        t.v = v;
        const Vec3 u = phys(t);
        const Vec3 F = (*field_)(u);
        V4 d{F[0], F[1], F[2], 1.0};
        const double m = prm_.m, p = prm_.p, sg = prm_.sigma;
        // Growth rates F_i / u_i for the factored components.
        double r0 = 0.0, r2 = 0.0;
        switch (chart_) {
            case Chart::Main:
                r0 = 2.0 + (1.0 - m) * u[1];
                r2 = sg + 2.0 + (p - m) * u[1];
                break;
            case Chart::Inf1:
                r0 = (m - 1.0) * u[1] - 2.0 * u[0];
                r2 = (p - 1.0) * u[1] + sg * u[0];
                d[3] = u[0];
                break;
            case Chart::Ext:
                r0 = (m - 1.0) * u[1] - 2.0 * u[0];
                r2 = (sg - 2.0) * u[0] + (m + p - 2.0) * u[1];
                d[3] = u[0];
                break;
            case Chart::Inf2: d[3] = std::abs(u[2]); break;
        }
        if (w.log0) d[0] = r0;
        if (w.log2) d[2] = r2;
        return d;
    }

    Chart chart() const { return chart_; }

private:
    Params prm_;
    Direction dir_;
    std::optional<Branch> branch_;
    Chart chart_ = Chart::Main;
    std::optional<Field> field_;
    double k_, s_;
};

Work make_work(const PhaseState& s, bool use_log) {
    Work w;
    w.chart = s.chart;
    const bool can = use_log && s.chart != Chart::Inf2;
    w.log0 = can && s.c[0] > 0.0;
    w.log2 = can && s.c[2] > 0.0;
    w.v = {w.log0 ? std::log(s.c[0]) : s.c[0], s.c[1], w.log2 ? std::log(s.c[2]) : s.c[2], s.eta};
    return w;
}

PhaseState to_state(const System& sys, const Work& w) {
    PhaseState s;
    s.chart = w.chart;
    s.c = sys.phys(w);
    s.eta = w.v[3];
    return s;
}

// ln Z - ((p-m)/(1-m)) ln X + L eta/(1-m), evaluated in logs so that it stays finite in Inf1.
std::optional<double> invariant(const Params& prm, const Work& w) {
    double lx, lz;
    auto lg = [&](int i, bool isl) { return isl ? w.v[i] : (w.v[i] > 0.0 ? std::log(w.v[i]) : NAN); };
    switch (w.chart) {
        case Chart::Main:
            lx = lg(0, w.log0);
            lz = lg(2, w.log2);
            break;
        case Chart::Inf1: {
            const double a = lg(0, w.log0), c = lg(2, w.log2);
            lx = -a;
            lz = c - a;
            break;
        }
        default: return std::nullopt;
    }
    if (!std::isfinite(lx) || !std::isfinite(lz)) return std::nullopt;
    const double m = prm.m, L = prm.sigma * (m - 1.0) + 2.0 * (prm.p - 1.0);
    return lz - (prm.p - m) / (1.0 - m) * lx + L / (1.0 - m) * w.v[3];
}

// Dormand-Prince 5(4) tableau with Hairer's dense output.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

struct Dense {
    V4 r1, r2, r3, r4, r5;
    V4 at(double th) const {
        V4 y;
        const double th1 = 1.0 - th;
        for (int i = 0; i < 4; ++i) y[i] = r1[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
        return y;
    }
};

}  // namespace

Trajectory integrate(const SystemId& sysid, const Params& prm, const PhaseState& seed, const Controls& ctl) {
    validate(prm);
    if (sysid.chart != seed.chart) throw ChartError("seed chart does not match system chart");
    const auto catalog = enumerate_points(prm);
    OmegaDetector det(prm, catalog, ctl);
    System sys(sysid, prm);

    Trajectory tr;
    tr.system = sysid;
    tr.params = prm;
    Work w = make_work(seed, ctl.log_variables);
    double tau = 0.0;
    const double eta0 = seed.eta;
    const auto inv0 = invariant(prm, w);

    auto push = [&](const Work& ww, double t, unsigned flags) {
        tr.samples.push_back({to_state(sys, ww), t, flags});
        if (inv0) {
            if (auto iv = invariant(prm, ww))
                tr.integrator_stats.max_residual = std::max(tr.integrator_stats.max_residual, std::abs(*iv - *inv0));
        }
    };
    push(w, tau, kFlagSeed);

    std::vector<bool> near_done(ctl.near_points.size(), false);
    auto check_near = [&](const PhaseState& s) {
        const auto mc = to_main_coords(s);
        if (!mc) return;
        for (size_t i = 0; i < ctl.near_points.size(); ++i) {
            if (near_done[i]) continue;
            const double d = norm(*mc - ctl.near_points[i].main_coords);
            if (d <= ctl.near_points[i].radius) {
                near_done[i] = true;
                tr.events.push_back({EventKind::NearPoint, to_string(ctl.near_points[i].point), s.eta, s, 0, d});
            }
        }
    };

    auto gvals = [&](const PhaseState& s) {
        std::vector<double> g(ctl.events.size(), NAN);
        const auto mc = to_main_coords(s);
        if (!mc) return g;
        for (size_t i = 0; i < ctl.events.size(); ++i) g[i] = ctl.events[i].g(*mc);
        return g;
    };

    check_near(tr.samples.back().state);
    if (auto o = det.feed(tr.samples.back().state, tau); o && ctl.stop_on_omega) {
        tr.omega = *o;
        tr.termination = "omega criterion";
        return tr;
    }

    std::vector<double> g0 = gvals(tr.samples.back().state);
    V4 k1 = sys(w, w.v);
    double h = ctl.h_init;
    bool done = false;

    while (!done) {
        if (tr.integrator_stats.steps >= ctl.max_steps) {
            tr.omega = det.finish(tr.samples.back().state, "max steps");
            tr.termination = "max steps";
            break;
        }
        if (w.chart == Chart::Main) h = std::min(h, ctl.h_max);
        const V4& y = w.v;
        const V4 k2 = sys(w, axpy(y, h, {{a21, &k1}}));
        const V4 k3 = sys(w, axpy(y, h, {{a31, &k1}, {a32, &k2}}));
        const V4 k4 = sys(w, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        const V4 k5 = sys(w, axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        const V4 k6 = sys(w, axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
        const V4 y1 = axpy(y, h, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
        const V4 k7 = sys(w, y1);
        double err = 0.0;
        bool finite = true;
        for (int i = 0; i < 4; ++i) {
            const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sc = ctl.atol + ctl.rtol * std::max(std::abs(y[i]), std::abs(y1[i]));
            err += (e / sc) * (e / sc);
            finite = finite && std::isfinite(y1[i]) && std::isfinite(k7[i]);
        }
        err = std::sqrt(err / 4.0);
        if (!finite) err = std::numeric_limits<double>::infinity();

        if (!(err <= 1.0)) {
            ++tr.integrator_stats.rejected;
            h *= std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
            if (h < 1e-14 * std::max(1.0, std::abs(tau))) {
                const PhaseState last = tr.samples.back().state;
                tr.events.push_back({EventKind::StepFailure, "step underflow", last.eta, last, 0, h});
                tr.omega = det.finish(last, "step failure");
                tr.termination = "step failure";
                break;
            }
            continue;
        }

        ++tr.integrator_stats.steps;
        Dense dn;
        dn.r1 = y;
        for (int i = 0; i < 4; ++i) {
            dn.r2[i] = y1[i] - y[i];
            dn.r3[i] = h * k1[i] - dn.r2[i];
            dn.r4[i] = dn.r2[i] - h * k7[i] - dn.r3[i];
            dn.r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
        }

        Work nw = w;
        nw.v = y1;
        PhaseState s1 = to_state(sys, nw);
        std::vector<double> g1 = gvals(s1);

        // Event localization on the dense output.
        double th_stop = 2.0;
        struct Hit {
            double th;
            size_t idx;
            int dir;
        };
        std::vector<Hit> hits;
        for (size_t i = 0; i < ctl.events.size(); ++i) {
            const double ga = g0[i], gb = g1[i];
            if (!std::isfinite(ga) || !std::isfinite(gb)) continue;
            const int dir = ga < 0.0 && gb >= 0.0 ? 1 : (ga > 0.0 && gb <= 0.0 ? -1 : 0);
            if (dir == 0) continue;
            if (ctl.events[i].direction != 0 && ctl.events[i].direction != dir) continue;
            double lo = 0.0, hi = 1.0;
            const double tol = 1e-10 / std::max(h, 1e-300);
            auto geval = [&](double th) {
                Work tw = w;
                tw.v = dn.at(th);
                const auto mc = to_main_coords(to_state(sys, tw));
                return mc ? ctl.events[i].g(*mc) : NAN;
            };
            for (int it = 0; it < 200 && hi - lo > tol; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double gm = geval(mid);
                if (!std::isfinite(gm)) break;
                if ((gm < 0.0) == (ga < 0.0) && gm != 0.0)
                    lo = mid;
                else
                    hi = mid;
            }
            hits.push_back({hi, i, dir});
        }
        std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return a.th < b.th; });
        for (const auto& ht : hits) {
            if (ht.th > th_stop) break;
            Work tw = w;
            tw.v = dn.at(ht.th);
            const PhaseState es = to_state(sys, tw);
            tr.events.push_back({EventKind::PlaneCrossing, ctl.events[ht.idx].name, es.eta, es, ht.dir, 0.0});
            if (ctl.events[ht.idx].terminal) th_stop = ht.th;
        }
        if (th_stop <= 1.0) {
            Work tw = w;
            tw.v = dn.at(th_stop);
            push(tw, tau + th_stop * h, kFlagEvent | kFlagTerminal);
            tr.omega = det.finish(tr.samples.back().state, "terminal event");
            tr.termination = "terminal event";
            break;
        }

        tau += h;
        w = nw;
        k1 = k7;
        unsigned flags = hits.empty() ? 0u : unsigned(kFlagEvent);

        // Chart switching between steps.
        const Vec3 u = sys.phys(w);
        std::optional<Chart> target;
        if (w.chart == Chart::Main && u[0] > ctl.chart_switch_bound) target = Chart::Inf1;
        if (w.chart == Chart::Inf1 && u[0] > 100.0 / ctl.chart_switch_bound) target = Chart::Main;
        if (w.chart == Chart::Inf1 && !target && u[2] > ctl.chart_switch_bound) target = Chart::Ext;
        if (w.chart == Chart::Ext && u[0] > 100.0 / ctl.chart_switch_bound) target = Chart::Main;
        if (target) {
            const PhaseState cs = chart_change(to_state(sys, w), *target);
            sys.set_chart(*target);
            w = make_work(cs, ctl.log_variables);
            k1 = sys(w, w.v);
            flags |= kFlagChartSwitch;
            ++tr.integrator_stats.chart_switches;
        }
        push(w, tau, flags);
        const PhaseState& cur = tr.samples.back().state;
        g0 = gvals(cur);
        check_near(cur);

        if (auto o = det.feed(cur, tau)) {
            if (o->label == OmegaLabel::ToQ3) {
                tr.events.push_back({EventKind::Escape, "Y", cur.eta, cur, -1, -det.q3_bound()});
            }
            if (ctl.stop_on_omega || o->label == OmegaLabel::ToQ3) {
                tr.omega = *o;
                tr.termination = "omega criterion";
                tr.samples.back().flags |= kFlagTerminal;
                done = true;
                continue;
            }
        }
        if (cur.eta - eta0 > ctl.eta_max) {
            tr.omega = det.finish(cur, "eta span exceeded");
            tr.termination = "eta span exceeded";
            break;
        }

        const double fac = err == 0.0 ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2)));
        h *= fac;
    }
    return tr;
}

Trajectory integrate(const SystemId& sys, const Params& prm, const LocalSeed& seed, const Controls& ctl) {
    return integrate(sys, prm, seed.state, ctl);
}

OmegaLimit classify_omega(const Trajectory& traj, const std::vector<CriticalPointInfo>& catalog, const Controls& ctl) {
    OmegaDetector det(traj.params, catalog, ctl);
    for (const auto& s : traj.samples)
        if (auto o = det.feed(s.state, s.tau)) return *o;
    if (traj.samples.empty()) return {};
    const std::string reason = traj.termination == "step failure" ? "step failure" : "no criterion met";
    return det.finish(traj.samples.back().state, reason);
}

void write_csv(std::ostream& os, const Trajectory& traj, const std::map<std::string, std::string>& meta) {
    const auto& p = traj.params;
    os << "# m=" << std::setprecision(17) << p.m << " N=" << p.N << " p=" << p.p << " sigma=" << p.sigma
       << " direction=" << to_string(p.direction) << "\n";
    for (const auto& [k, v] : meta) os << "# " << k << "=" << v << "\n";
    os << "# omega=" << to_string(traj.omega.label) << " termination=" << traj.termination << "\n";
    os << "eta,X,Y,Z,chart,flags\n";
    os << std::setprecision(17);
    for (const auto& s : traj.samples) {
        std::string fl;
        auto add = [&](unsigned b, const char* n) {
            if (s.flags & b) fl += (fl.empty() ? "" : "|") + std::string(n);
        };
        add(kFlagSeed, "seed");
        add(kFlagChartSwitch, "switch");
        add(kFlagEvent, "event");
        add(kFlagTerminal, "terminal");
        os << s.state.eta << "," << s.state.c[0] << "," << s.state.c[1] << "," << s.state.c[2] << ","
           << to_string(s.state.chart) << "," << fl << "\n";
    }
}

std::string to_string(OmegaLabel l) {
    switch (l) {
        case OmegaLabel::ToQ1: return "ToQ1";
        case OmegaLabel::ToQ3: return "ToQ3";
        case OmegaLabel::ToP3: return "ToP3";
        case OmegaLabel::ToP2: return "ToP2";
        case OmegaLabel::ToP1P3crit: return "ToP1P3crit";
        case OmegaLabel::ToQ5: return "ToQ5";
        case OmegaLabel::ToQgamma: return "ToQgamma";
        case OmegaLabel::VerticalAsymptote: return "VerticalAsymptote";
        case OmegaLabel::Undetermined: return "Undetermined";
    }
    return "?";
}

std::string to_string(EventKind k) {
    switch (k) {
        case EventKind::PlaneCrossing: return "PlaneCrossing";
        case EventKind::Escape: return "Escape";
        case EventKind::NearPoint: return "NearPoint";
        case EventKind::StepFailure: return "StepFailure";
    }
    return "?";
}

}  // namespace ssfd
