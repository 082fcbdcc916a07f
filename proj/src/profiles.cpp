#include "ssfd/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

namespace ssfd {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Fornberg weights for derivatives 0..2 at z on nodes x[0..n).
void fornberg(double z, const double* x, int n, double c[][3]) {
    for (int i = 0; i < n; ++i) c[i][0] = c[i][1] = c[i][2] = 0.0;
    double c1 = 1.0, c4 = x[0] - z;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, 2);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i] - z;
        for (int j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
}

bool is_origin(Behavior k) {
    switch (k) {
        case Behavior::OriginRegular:
        case Behavior::OriginSingularP1:
        case Behavior::OriginPowerP2:
        case Behavior::OriginN2:
        case Behavior::OriginN1:
        case Behavior::OriginN1Singular: return true;
        default: return false;
    }
}

// Solves the normal equations of a small least-squares problem.
std::vector<double> least_squares(const std::vector<std::vector<double>>& rows, const std::vector<double>& rhs) {
    const size_t n = rows.front().size();
    std::vector<std::vector<double>> A(n, std::vector<double>(n + 1, 0.0));
    for (size_t r = 0; r < rows.size(); ++r)
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = 0; j < n; ++j) A[i][j] += rows[r][i] * rows[r][j];
            A[i][n] += rows[r][i] * rhs[r];
        }
    for (size_t c = 0; c < n; ++c) {
        size_t piv = c;
        for (size_t r = c + 1; r < n; ++r)
            if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
        std::swap(A[c], A[piv]);
        if (A[c][c] == 0.0) throw ProfileError("fit_tail: singular least-squares system");
        for (size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            const double f = A[r][c] / A[c][c];
            for (size_t j = c; j <= n; ++j) A[r][j] -= f * A[c][j];
        }
    }
    std::vector<double> x(n);
    for (size_t i = 0; i < n; ++i) x[i] = A[i][n] / A[i][i];
    return x;
}

double scale_of(const Params& prm, double t, double T) {
    if (prm.direction == Direction::Forward) {
        if (!(t > 0.0)) throw ProfileError("assemble_solution: forward needs t > 0");
        return t;
    }
    if (!(t >= 0.0 && t < T)) throw ProfileError("assemble_solution: backward needs 0 <= t < T");
    return T - t;
}

}  // namespace

ProfileSample reconstruct_profile(const Trajectory& traj, const Params& prm) {
    ProfileSample out;
    out.direction = prm.direction;
    out.params = prm;
    out.source = "trajectory";
    size_t skipped = 0, nonmonotone = 0;
    for (const Sample& s : traj.samples) {
        const auto main = to_main_coords(s.state);
        if (!main || !((*main)[0] > 0.0) || !std::isfinite((*main)[0])) {
            ++skipped;
            continue;
        }
        PhaseState ps{*main, Chart::Main, s.state.eta};
        const ProfilePoint pp = phase_to_profile(prm, ps);
        if (!std::isfinite(pp.f) || !(pp.f > 0.0) || !std::isfinite(pp.xi) || !(pp.xi > 0.0)) {
            ++skipped;
            continue;
        }
        // Event and chart-switch samples can repeat a point; keep a strictly increasing grid.
        if (!out.xi.empty() && !(s.state.eta > std::log(out.xi.back()) + 1e-9)) {
            ++nonmonotone;
            continue;
        }
        out.xi.push_back(pp.xi);
        out.f.push_back(pp.f);
    }
    if (skipped) out.notices.push_back(std::to_string(skipped) + " samples with X = 0 or no Main image skipped");
    if (nonmonotone) out.notices.push_back(std::to_string(nonmonotone) + " samples dropped to keep xi increasing");
    return out;
}

ProfileSample sample_profile(const std::function<double(double)>& f, const Params& prm, double lo, double hi,
                             int points, const std::string& source) {
    if (!(lo > 0.0 && hi > lo) || points < 2) throw ProfileError("sample_profile: bad window");
    ProfileSample out;
    out.direction = prm.direction;
    out.params = prm;
    out.source = source;
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < points; ++i) {
        const double xi = std::exp(a + (b - a) * i / (points - 1));
        out.xi.push_back(xi);
        out.f.push_back(f(xi));
    }
    return out;
}

ResidualReport ode_residual(const ProfileSample& prof, const Params& prm) {
    return ode_residual(prof, prm,
                        prof.direction == Direction::Forward ? ProfileEquation::Forward : ProfileEquation::Backward);
}

ResidualReport ode_residual(const ProfileSample& prof, const Params& prm, ProfileEquation eq) {
    const size_t n = prof.xi.size();
    if (n < 5 || prof.f.size() != n) throw ProfileError("ode_residual: grid too coarse (need at least 5 points)");
    const Exponents e = compute_exponents(prm);
    const double m = prm.m;
    const double sgn = eq == ProfileEquation::Forward ? 1.0 : eq == ProfileEquation::Backward ? -1.0 : 0.0;

    // Differences act on ln g, g = f^m: power-law pieces are then linear and the stencil
    // truncation error drops out for them.
    std::vector<double> t(n), lg(n);
    for (size_t i = 0; i < n; ++i) {
        t[i] = std::log(prof.xi[i]);
        lg[i] = m * std::log(prof.f[i]);
    }
    ResidualReport rep;
    rep.equation = eq;
    for (size_t i = 2; i + 2 < n; ++i) {
        double x[5], c[5][3];
        for (int k = 0; k < 5; ++k) x[k] = t[i - 2 + k] - t[i];
        // Rounding in ln xi makes a uniform grid look slightly irregular; general weights then
        // amplify that noise by 1/h^3, so uniform stencils get the textbook weights.
        const double h = (x[4] - x[0]) / 4.0;
        bool uniform = true;
        for (int k = 0; k < 5; ++k) uniform = uniform && std::abs(x[k] - (k - 2) * h) <= 1e-9 * h;
        const double* ls = &lg[i - 2];
        double lt = 0.0, ltt = 0.0;
        if (uniform) {
            lt = (ls[0] - 8.0 * ls[1] + 8.0 * ls[3] - ls[4]) / (12.0 * h);
            ltt = (-ls[0] + 16.0 * ls[1] - 30.0 * ls[2] + 16.0 * ls[3] - ls[4]) / (12.0 * h * h);
        } else {
            fornberg(0.0, x, 5, c);
            for (int k = 0; k < 5; ++k) {
                lt += c[k][1] * ls[k];
                ltt += c[k][2] * ls[k];
            }
        }
        const double xi = prof.xi[i], f = prof.f[i];
        const double g = std::exp(lg[i]);
        const double gt = g * lt, gtt = g * (ltt + lt * lt);
        const double ft = f * lt / m;
        // In ln xi: (f^m)'' + (N-1)/xi (f^m)' = (g_tt + (N-2) g_t) / xi^2 and xi f' = f_t.
        const double source = std::pow(xi, prm.sigma) * std::pow(f, prm.p);
        const double res = (gtt + (prm.N - 2) * gt) / (xi * xi) + sgn * (e.alpha * f + e.beta * ft) + source;
        const double scaled = std::abs(res) / (1.0 + std::abs(source));
        ++rep.points;
        if (!(scaled <= rep.max_scaled)) {
            rep.max_scaled = scaled;
            rep.at_xi = xi;
        }
    }
    return rep;
}

TailFit fit_tail(const ProfileSample& prof, Behavior kind, std::optional<std::pair<double, double>> window) {
    const size_t n = prof.xi.size();
    if (n < 5) throw ProfileError("fit_tail: window not reached (profile has fewer than 5 points)");
    const Params& prm = prof.params;
    const bool origin = is_origin(kind);

    size_t lo = 0, hi = n;  // [lo, hi)
    if (!window && kind == Behavior::TailFastLog) window = std::make_pair(1e2, 1e6);
    if (!window && kind == Behavior::OriginRegular) {
        // Quadratic regime: X = (alpha/m) xi^2 f^{1-m} small.
        const Exponents e = compute_exponents(prm);
        hi = 0;
        while (hi < n && e.alpha / prm.m * prof.xi[hi] * prof.xi[hi] * std::pow(prof.f[hi], 1.0 - prm.m) <= 1e-2)
            ++hi;
    } else if (window) {
        lo = n;
        hi = 0;
        for (size_t i = 0; i < n; ++i)
            if (prof.xi[i] >= window->first && prof.xi[i] <= window->second) {
                lo = std::min(lo, i);
                hi = i + 1;
            }
        if (lo >= hi) throw ProfileError("fit_tail: window not reached");
    } else {
        // Segment where the local log slope is stable within 1% of its end value.
        std::vector<double> slope(n - 1);
        for (size_t i = 0; i + 1 < n; ++i)
            slope[i] = (std::log(prof.f[i + 1]) - std::log(prof.f[i])) / (std::log(prof.xi[i + 1]) - std::log(prof.xi[i]));
        auto stable = [](double s, double ref) { return std::abs(s - ref) <= 0.01 * std::abs(ref); };
        if (origin) {
            const double ref = slope.front();
            size_t j = 0;
            while (j < slope.size() && stable(slope[j], ref)) ++j;
            lo = 0;
            hi = j + 1;
        } else {
            const double ref = slope.back();
            size_t j = slope.size();
            while (j > 0 && stable(slope[j - 1], ref)) --j;
            lo = j;
            hi = n;
        }
    }
    if (hi < lo + 5) throw ProfileError("fit_tail: window not reached (fewer than 5 points in the asymptotic window)");

    TailFit fit;
    fit.kind = kind;
    fit.xi_lo = prof.xi[lo];
    fit.xi_hi = prof.xi[hi - 1];
    fit.points = hi - lo;

    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
    std::function<double(double)> model;
    if (kind == Behavior::OriginRegular) {
        // f^{-(1-m)} = D + q xi^2, plus the next-order xi^{sigma+2} and xi^4 terms.
        const bool extra = prm.sigma > 0.0 && std::abs(prm.sigma - 2.0) > 1e-9;
        for (size_t i = lo; i < hi; ++i) {
            const double x2 = prof.xi[i] * prof.xi[i];
            std::vector<double> row{1.0, x2, x2 * x2};
            if (extra) row.push_back(std::pow(prof.xi[i], prm.sigma + 2.0));
            rows.push_back(row);
            rhs.push_back(std::pow(prof.f[i], -(1.0 - prm.m)));
        }
        const auto c = least_squares(rows, rhs);
        fit.offset = c[0];
        fit.constant = c[1];
        fit.exponent = 2.0;
        const double s = prm.sigma;
        model = [c, extra, s, m = prm.m](double xi) {
            const double x2 = xi * xi;
            double g = c[0] + c[1] * x2 + c[2] * x2 * x2;
            if (extra) g += c[3] * std::pow(xi, s + 2.0);
            return std::pow(g, -1.0 / (1.0 - m));
        };
    } else {
        const bool log_corr = kind == Behavior::TailFastLog;
        const double half_n = 0.5 * prm.N;
        if (log_corr && !(fit.xi_lo > 1.0)) throw ProfileError("fit_tail: log-corrected template needs xi > 1");
        for (size_t i = lo; i < hi; ++i) {
            const double lx = std::log(prof.xi[i]);
            rows.push_back({1.0, lx});
            rhs.push_back(std::log(prof.f[i]) + (log_corr ? half_n * std::log(lx) : 0.0));
        }
        const auto c = least_squares(rows, rhs);
        fit.constant = std::exp(c[0]);
        fit.exponent = c[1];
        model = [c, log_corr, half_n](double xi) {
            const double lx = std::log(xi);
            return std::exp(c[0] + c[1] * lx - (log_corr ? half_n * std::log(lx) : 0.0));
        };
    }
    double ss = 0.0;
    for (size_t i = lo; i < hi; ++i) {
        const double fm = model(prof.xi[i]);
        fit.max_deviation = std::max(fit.max_deviation, std::abs(fm / prof.f[i] - 1.0));
        ss += std::pow(std::log(fm / prof.f[i]), 2);
    }
    fit.misfit = std::sqrt(ss / static_cast<double>(hi - lo));
    return fit;
}

SolutionGrid assemble_solution(const std::function<double(double)>& f, const Params& prm,
                               const std::vector<double>& r, const std::vector<double>& t, double T) {
    const Exponents e = compute_exponents(prm);
    SolutionGrid g;
    g.r = r;
    g.t = t;
    for (double ti : t) {
        const double s = scale_of(prm, ti, T);
        const double amp = std::pow(s, -e.alpha), shrink = std::pow(s, -e.beta);
        std::vector<double> row;
        row.reserve(r.size());
        for (double rj : r) row.push_back(amp * f(rj * shrink));
        g.u.push_back(std::move(row));
    }
    return g;
}

SolutionGrid assemble_solution(const ProfileSample& prof, const std::vector<double>& r, const std::vector<double>& t) {
    return assemble_solution([&prof](double xi) { return interpolate_profile(prof, xi); }, prof.params, r, t, prof.T);
}

double collapse_deviation(const SolutionGrid& g, const std::function<double(double)>& f, const Params& prm,
                          double T) {
    const Exponents e = compute_exponents(prm);
    double worst = 0.0;
    for (size_t i = 0; i < g.t.size(); ++i) {
        const double s = scale_of(prm, g.t[i], T);
        for (size_t j = 0; j < g.r.size(); ++j) {
            const double ref = f(g.r[j] * std::pow(s, -e.beta));
            const double v = g.u[i][j] * std::pow(s, e.alpha);
            if (!std::isfinite(ref) || !std::isfinite(v)) continue;
            worst = std::max(worst, std::abs(v - ref) / std::abs(ref));
        }
    }
    return worst;
}

double interpolate_profile(const ProfileSample& prof, double xi) {
    const auto& x = prof.xi;
    if (x.empty() || !(xi >= x.front() && xi <= x.back())) return kNaN;
    auto it = std::upper_bound(x.begin(), x.end(), xi);
    if (it == x.end()) return prof.f.back();
    const size_t j = static_cast<size_t>(it - x.begin());
    if (j == 0) return prof.f.front();
    const double a = std::log(x[j - 1]), b = std::log(x[j]);
    const double w = (std::log(xi) - a) / (b - a);
    return std::exp((1.0 - w) * std::log(prof.f[j - 1]) + w * std::log(prof.f[j]));
}

std::function<double(double)> explicit_Uc(const Params& prm, double C) {
    if (!(C > 0.0)) throw ProfileError("explicit_Uc: C must be positive");
    if (prm.N < 3) throw ProfileError("explicit_Uc: needs N >= 3");
    const double ps = compute_exponents(prm).p_s;
    if (std::abs(prm.p - ps) > 1e-9 * std::max(1.0, ps)) throw ProfileError("explicit_Uc: needs p = p_s");
    const double N = prm.N, s = prm.sigma;
    const double power = (N - 2.0) / (2.0 * prm.m * (s + 2.0));
    return [=](double xi) {
        const double d = std::pow(xi, s + 2.0) + C;
        return std::pow((N - 2.0) * (N + s) * C / (d * d), power);
    };
}

double power_stationary_constant(const Params& prm) {
    const double gamma = (prm.sigma + 2.0) / (prm.p - prm.m);
    const double a = prm.m * gamma;
    const double base = a * (prm.N - 2.0 - a);
    if (!(base > 0.0)) throw ProfileError("power stationary solution needs p > p_c");
    return std::pow(base, 1.0 / (prm.p - prm.m));
}

std::function<double(double)> explicit_power_stationary(const Params& prm) {
    const double K = power_stationary_constant(prm);
    const double gamma = (prm.sigma + 2.0) / (prm.p - prm.m);
    return [=](double xi) { return K * std::pow(xi, -gamma); };
}

std::function<double(double)> explicit_pstar_profile(const Params& prm) {
    const Exponents e = compute_exponents(prm);
    if (!e.p_star || std::abs(prm.p - *e.p_star) > 1e-9 * std::max(1.0, *e.p_star))
        throw ProfileError("explicit p_* solution needs N >= 3 and p = p_*");
    if (!(prm.sigma > 0.0)) throw ProfileError("explicit p_* solution needs sigma > 0");
    const double q = (prm.N - 2.0) / (prm.m * prm.sigma);
    const double A = std::pow(q, q);
    const double gamma = (prm.N - 2.0) / prm.m;
    return [=](double xi) { return A * std::pow(xi, -gamma); };
}

double explicit_pstar_solution(const Params& prm, double r, double t, double T) {
    if (!(t < T)) throw ProfileError("explicit p_* solution: needs t < T");
    const double q = (prm.N - 2.0) / (prm.m * prm.sigma);
    return std::pow(q, q) * std::pow(T - t, -q) * std::pow(r, -(prm.N - 2.0) / prm.m);
}

double fast_decay_constant(const Params& prm) {
    const double m = prm.m;
    return std::pow(2.0 * m * (m * prm.N - prm.N + 2.0) / (1.0 - m), 1.0 / (1.0 - m));
}

void write_profile_csv(std::ostream& os, const ProfileSample& prof) {
    const Params& p = prof.params;
    os << std::setprecision(17);
    os << "# m=" << p.m << " N=" << p.N << " p=" << p.p << " sigma=" << p.sigma
       << " direction=" << to_string(prof.direction) << " source=" << prof.source << "\n";
    if (prof.direction == Direction::Backward) os << "# T=" << prof.T << "\n";
    os << "xi,f\n";
    for (size_t i = 0; i < prof.xi.size(); ++i) os << prof.xi[i] << "," << prof.f[i] << "\n";
}

std::string to_string(ProfileEquation e) {
    switch (e) {
        case ProfileEquation::Forward: return "forward profile ODE";
        case ProfileEquation::Backward: return "backward profile ODE";
        case ProfileEquation::Stationary: return "radial stationary PDE";
    }
    return "?";
}

}  // namespace ssfd
