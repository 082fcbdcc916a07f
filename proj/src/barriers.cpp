#include "ssfd/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>

namespace ssfd {

namespace {

constexpr size_t kMaxStoredViolations = 200;

template <class T>
struct BP {
    T m, p, s;
    int N;
    T n() const { return T(static_cast<std::int64_t>(N)); }
    T pF() const { return m + (s + T(2)) / n(); }
    T L() const { return s * (m - T(1)) + T(2) * (p - T(1)); }
    T ps() const { return m * (n() + T(2) * s + T(2)) / (n() - T(2)); }
    T pcgap() const { return m * (n() + s) - p * (n() - T(2)); }
    T k() const { return (p - m) / (s + T(2)); }
    T y2() const { return -(s + T(2)) / (p - m); }  // Y of the plane through P2
    T zp2() const { return -(s + T(2)) * pcgap() / ((p - m) * (p - m)); }
    T polc_K() const { return n() * m - n() * p + m * s - T(2) * p * s - T(2) * m + s + T(2); }
};

BP<double> to_bp(const Params& prm) { return {prm.m, prm.p, prm.sigma, prm.N}; }
BP<Rational> to_bp(const RationalParams& prm) { return {prm.m, prm.p, prm.sigma, prm.N}; }

bool gt_tol(double a, double b) { return a > b + kBoundaryTol; }
bool gt_tol(const Rational& a, const Rational& b) { return a > b; }

template <class T>
std::pair<T, T> polc_interval(const BP<T>& q, bool literal) {
    const T a = (q.s + T(2)) / (q.p - q.m), b = q.s / (q.p - T(1));
    if (literal) return {-a, -b};
    return {b, a};
}

template <class T>
T polc(const BP<T>& q, const T& c) {
    return -(q.p - T(1)) / q.L() * ((q.m + q.p - T(1)) * (q.p - q.m) * c * c + q.polc_K() * c + q.s * (q.s + T(2)));
}

template <class T>
bool region(BarrierId id, const BP<T>& q, const T& a, const T& b, const BarrierOptions& opt) {
    const T zero(0);
    switch (id) {
        case BarrierId::LineYeqMinusXoverN: return a > zero;
        case BarrierId::PlaneG: return a > zero && b > zero;
        case BarrierId::CylinderE: {
            const T lo = -(q.n() - T(2)) / q.m;
            if (!(a > zero) || b < lo || b > zero) return false;
            // For p > p_s the open band -(N-2)/m < Y < -(s+2)/(p-m) is excluded.
            if (gt_tol(q.p, q.ps()) && b > lo && b < q.y2()) return false;
            return true;
        }
        case BarrierId::Plane1F1: return a > zero && b > zero && b <= a / q.n();
        case BarrierId::SurfaceF2: return a > zero && b > q.y2() && b < zero;
        case BarrierId::Surface4F:
            return a > zero && b >= q.y2() * a && b <= -q.s / (q.p - T(1)) * a;
        case BarrierId::PolynomialPc: {
            const auto [lo, hi] = polc_interval(q, opt.polc_literal_interval);
            return a >= lo && a <= hi;
        }
        case BarrierId::DiffInterm18:
        case BarrierId::DiffInterm19: return a > zero && b >= zero && b > q.zp2() * a;
        case BarrierId::FlowPlanesF1F2: return a > zero && b > zero;
    }
    return false;
}

template <class T>
T value(BarrierId id, const BP<T>& q, const T& a, const T& b) {
    const T N = q.n(), s2 = q.s + T(2), pm = q.p - q.m;
    switch (id) {
        case BarrierId::LineYeqMinusXoverN: return a * a * (q.p - q.pF()) / (N * s2);
        case BarrierId::PlaneG: return a * a * (q.p - q.pF()) / (N * s2) - b;
        case BarrierId::CylinderE: {
            const T X = a, Y = b;
            return (N + q.s) / (N - T(2)) *
                   ((q.ps() - q.p) * Y * Y * (q.m * Y + N - T(2)) -
                    X * (T(1) + pm / s2 * Y) * (T(2) * q.m * Y + N - T(2)));
        }
        case BarrierId::Plane1F1: {
            const T X = a, Y = b;
            return -N * q.p * (N + q.s) * Y * (Y - (pm * (N + q.s) + q.L()) * X / (N * q.p * s2));
        }
        case BarrierId::SurfaceF2: {
            const T X = a, Y = b;
            const T C = -(N + q.s) * (T(1) - q.m) - T(2) * q.p * q.s;
            return (Y + s2 / pm) * (q.s * pm * pm * (N + q.s) / (N * N * s2 * s2) * X * X +
                                    pm * C / (N * s2) * X * Y + pm * q.p * Y * Y);
        }
        case BarrierId::Surface4F: {
            const T x = a, y = b, L = q.L(), p1 = q.p - T(1);
            return -p1 * s2 * q.s / L * x * x - p1 * pm * (q.m + q.p - T(1)) / L * y * y +
                   p1 * q.polc_K() / L * x * y - p1 * pm * pm * q.s / (L * L) * x -
                   p1 * pm * pm * pm * q.s / (L * L * s2) * y;
        }
        case BarrierId::PolynomialPc: return polc(q, a);
        case BarrierId::DiffInterm18: {
            const T x = a, z = b;
            return q.s * x / (N + q.s) * (s2 * s2 * q.pcgap() / (pm * pm * pm) * x + s2 / pm * z);
        }
        case BarrierId::DiffInterm19: {
            const T x = a, z = b;
            const T pm5 = pm * pm * pm * pm * pm;
            return T(8) * (T(1) - q.m) * x * x / pm5 * (T(2) * q.pcgap() * x + pm * pm * z);
        }
        case BarrierId::FlowPlanesF1F2: {
            const T X = a, Z = b;
            if (!(q.pcgap() > T(0))) return q.pcgap() / (q.m * s2) * X - Z;
            return -s2 * q.pcgap() / (pm * pm) - Z;
        }
    }
    return T(0);
}

Direction barrier_direction(BarrierId id) {
    switch (id) {
        case BarrierId::LineYeqMinusXoverN:
        case BarrierId::PlaneG:
        case BarrierId::CylinderE: return Direction::Forward;
        default: return Direction::Backward;
    }
}

SignClaim claim_for(BarrierId id, const Params& prm) {
    switch (id) {
        case BarrierId::LineYeqMinusXoverN: {
            const double pF = compute_exponents(prm).p_F;
            if (prm.p > pF + kBoundaryTol) return SignClaim::Positive;
            if (prm.p < pF - kBoundaryTol) return SignClaim::Negative;
            return SignClaim::NonNegative;
        }
        case BarrierId::PlaneG: return SignClaim::Negative;
        case BarrierId::CylinderE: return SignClaim::NonPositive;
        case BarrierId::Plane1F1: return SignClaim::NonNegative;
        case BarrierId::SurfaceF2: return SignClaim::Positive;
        case BarrierId::Surface4F: return SignClaim::NonPositive;
        case BarrierId::PolynomialPc: return SignClaim::NonPositive;
        case BarrierId::DiffInterm18: return SignClaim::Positive;
        case BarrierId::DiffInterm19: return SignClaim::Positive;
        case BarrierId::FlowPlanesF1F2: return SignClaim::Negative;
    }
    return SignClaim::NonPositive;
}

Rational rational_bound(double bound) {
    const double r = std::round(bound);
    if (std::abs(bound - r) > 0.0 || r < 1.0) throw BarrierError("exact mode needs a positive integer bound");
    return Rational(static_cast<std::int64_t>(r));
}

// Grid of free coordinates for one barrier; i runs over the first axis.
template <class T>
struct GridGen {
    BarrierId id;
    BP<T> q;
    int n;
    T bound;
    BarrierOptions opt;

    bool one_dimensional() const {
        return id == BarrierId::LineYeqMinusXoverN || id == BarrierId::PolynomialPc;
    }
    // Appends points of row i.
    void row(int i, std::vector<std::pair<T, T>>& out) const {
        const T N(static_cast<std::int64_t>(n));
        const T ti = T(static_cast<std::int64_t>(i)) / N;
        if (id == BarrierId::PolynomialPc) {
            const auto [lo, hi] = polc_interval(q, opt.polc_literal_interval);
            out.push_back({lo + (hi - lo) * ti, T(0)});
            return;
        }
        const T a = bound * ti;
        if (id == BarrierId::LineYeqMinusXoverN) {
            out.push_back({a, T(0)});
            return;
        }
        for (int j = 0; j <= n; ++j) {
            const T tj = T(static_cast<std::int64_t>(j)) / N;
            switch (id) {
                case BarrierId::PlaneG:
                case BarrierId::FlowPlanesF1F2:
                    if (j > 0) out.push_back({a, bound * tj});
                    break;
                case BarrierId::CylinderE: {
                    T lo = -(q.n() - T(2)) / q.m;
                    if (gt_tol(q.p, q.ps()) && q.y2() > lo) lo = q.y2();
                    out.push_back({a, lo - lo * tj});
                    break;
                }
                case BarrierId::Plane1F1:
                    if (j > 0) out.push_back({a, tj * a / q.n()});
                    break;
                case BarrierId::SurfaceF2:
                    if (j > 0 && j < n) out.push_back({a, q.y2() * (T(1) - tj)});
                    break;
                case BarrierId::Surface4F: {
                    const T lo = q.y2(), hi = -q.s / (q.p - T(1));
                    out.push_back({a, a * (lo + (hi - lo) * tj)});
                    break;
                }
                case BarrierId::DiffInterm18:
                case BarrierId::DiffInterm19: {
                    const T zlo = q.zp2() * a;
                    if (zlo > T(0)) {
                        if (j > 0) out.push_back({a, zlo + bound * tj});
                    } else {
                        out.push_back({a, bound * tj});
                    }
                    break;
                }
                default: break;
            }
        }
    }
    int first_row() const { return id == BarrierId::PolynomialPc ? 0 : 1; }
};

struct Partial {
    size_t points = 0;
    double mn = INFINITY, mx = -INFINITY;
    size_t violations = 0;
    std::vector<Violation> stored;
    size_t exact_points = 0, exact_fallbacks = 0;
};

double to_d(double v) { return v; }
double to_d(const Rational& v) { return v.to_double(); }

template <class T>
Partial certify_rows(const GridGen<T>& gen, const BP<double>& qd, SignClaim claim, int i0, int i1, bool exact) {
    Partial part;
    std::vector<std::pair<T, T>> pts;
    for (int i = i0; i < i1; ++i) {
        pts.clear();
        gen.row(i, pts);
        for (const auto& [a, b] : pts) {
            double v = 0.0;
            bool ok = false;
            if constexpr (std::is_same_v<T, Rational>) {
                try {
                    if (!region(gen.id, gen.q, a, b, gen.opt) && !gen.opt.unchecked) continue;
                    const Rational r = value(gen.id, gen.q, a, b);
                    v = r.to_double();
                    const int sg = r.sign();
                    switch (claim) {
                        case SignClaim::Negative: ok = sg < 0; break;
                        case SignClaim::NonPositive: ok = sg <= 0; break;
                        case SignClaim::NonNegative: ok = sg >= 0; break;
                        case SignClaim::Positive: ok = sg > 0; break;
                    }
                    ++part.exact_points;
                } catch (const std::overflow_error&) {
                    ++part.exact_fallbacks;
                    const double ad = to_d(a), bd = to_d(b);
                    v = value(gen.id, qd, ad, bd);
                    ok = claim_holds(claim, v);
                }
            } else {
                (void)exact;
                if (!region(gen.id, gen.q, a, b, gen.opt) && !gen.opt.unchecked) continue;
                v = value(gen.id, gen.q, a, b);
                ok = claim_holds(claim, v);
            }
            ++part.points;
            part.mn = std::min(part.mn, v);
            part.mx = std::max(part.mx, v);
            if (!ok) {
                ++part.violations;
                if (part.stored.size() < kMaxStoredViolations) part.stored.push_back({to_d(a), to_d(b), v});
            }
        }
    }
    return part;
}

template <class T>
CertificationReport certify_impl(BarrierId id, const Params& prm, const BP<T>& q, const T& bound,
                                 const GridSpec& grid, bool exact) {
    if (grid.points_per_axis < 2) throw BarrierError("certify_sign_on_grid: need at least 2 points per axis");
    CertificationReport rep;
    rep.id = id;
    rep.params = prm;
    rep.claim = claim_for(id, prm);
    if (auto why = inapplicable_reason(id, prm)) {
        rep.applicable = false;
        rep.inapplicable_reason = *why;
    }
    GridGen<T> gen{id, q, grid.points_per_axis, bound, grid.options};
    const int i0 = gen.first_row(), i1 = grid.points_per_axis + 1;
    const int threads = std::max(1, std::min<int>(static_cast<int>(std::thread::hardware_concurrency()), i1 - i0));
    std::vector<std::future<Partial>> futs;
    const BP<double> qd = to_bp(prm);
    for (int t = 0; t < threads; ++t) {
        const int a = i0 + (i1 - i0) * t / threads, b = i0 + (i1 - i0) * (t + 1) / threads;
        futs.push_back(std::async(std::launch::async, [&, a, b] { return certify_rows(gen, qd, rep.claim, a, b, exact); }));
    }
    double mn = INFINITY, mx = -INFINITY;
    for (auto& f : futs) {
        Partial p = f.get();
        rep.points += p.points;
        mn = std::min(mn, p.mn);
        mx = std::max(mx, p.mx);
        rep.violation_count += p.violations;
        rep.exact_points += p.exact_points;
        rep.exact_fallbacks += p.exact_fallbacks;
        for (auto& v : p.stored)
            if (rep.violations.size() < kMaxStoredViolations) rep.violations.push_back(v);
    }
    rep.min_value = rep.points ? mn : 0.0;
    rep.max_value = rep.points ? mx : 0.0;
    return rep;
}

}  // namespace

const std::vector<BarrierId>& all_barriers() {
    static const std::vector<BarrierId> ids{
        BarrierId::LineYeqMinusXoverN, BarrierId::PlaneG,        BarrierId::CylinderE,    BarrierId::Plane1F1,
        BarrierId::SurfaceF2,          BarrierId::Surface4F,     BarrierId::PolynomialPc, BarrierId::DiffInterm18,
        BarrierId::DiffInterm19,       BarrierId::FlowPlanesF1F2};
    return ids;
}

std::string to_string(BarrierId id) {
    switch (id) {
        case BarrierId::LineYeqMinusXoverN: return "LineYeqMinusXoverN";
        case BarrierId::PlaneG: return "PlaneG";
        case BarrierId::CylinderE: return "CylinderE";
        case BarrierId::Plane1F1: return "Plane1F1";
        case BarrierId::SurfaceF2: return "SurfaceF2";
        case BarrierId::Surface4F: return "Surface4F";
        case BarrierId::PolynomialPc: return "PolynomialPc";
        case BarrierId::DiffInterm18: return "DiffInterm18";
        case BarrierId::DiffInterm19: return "DiffInterm19";
        case BarrierId::FlowPlanesF1F2: return "FlowPlanesF1F2";
    }
    return "?";
}

BarrierId parse_barrier(const std::string& name) {
    for (BarrierId id : all_barriers())
        if (to_string(id) == name) return id;
    throw BarrierError("unknown barrier id: " + name);
}

std::string to_string(SignClaim c) {
    switch (c) {
        case SignClaim::Negative: return "<0";
        case SignClaim::NonPositive: return "<=0";
        case SignClaim::NonNegative: return ">=0";
        case SignClaim::Positive: return ">0";
    }
    return "?";
}

bool claim_holds(SignClaim c, double v) {
    switch (c) {
        case SignClaim::Negative: return v < 0.0;
        case SignClaim::NonPositive: return v <= 0.0;
        case SignClaim::NonNegative: return v >= 0.0;
        case SignClaim::Positive: return v > 0.0;
    }
    return false;
}

BarrierSpec barrier_spec(BarrierId id, const Params& prm) {
    BarrierSpec s;
    s.id = id;
    s.name = to_string(id);
    s.claim = claim_for(id, prm);
    switch (id) {
        case BarrierId::LineYeqMinusXoverN:
            s.coordinates = {"X"};
            s.region = "X > 0 on {Y = -X/N, Z = 0}";
            s.applicability = "forward; sign of p - p_F";
            break;
        case BarrierId::PlaneG:
            s.coordinates = {"X", "Z"};
            s.region = "X > 0, Z > 0 on {Y = -X/N}";
            s.applicability = "forward, p <= p_F";
            break;
        case BarrierId::CylinderE:
            s.coordinates = {"X", "Y"};
            s.region = "X > 0, -(N-2)/m <= Y <= 0 on the cylinder; for p > p_s outside -(N-2)/m < Y < -(s+2)/(p-m)";
            s.applicability = "forward, N >= 3, p >= p_s";
            break;
        case BarrierId::Plane1F1:
            s.direction = Direction::Backward;
            s.coordinates = {"X", "Y"};
            s.region = "X > 0, 0 < Y <= X/N on {Z = pln(X,Y)}";
            s.applicability = "backward, sigma >= 0, p >= p_F";
            break;
        case BarrierId::SurfaceF2:
            s.direction = Direction::Backward;
            s.coordinates = {"X", "Y"};
            s.region = "X > 0, -(s+2)/(p-m) < Y < 0 on {Z = sup(X,Y)}";
            s.applicability = "backward, sigma >= 0";
            break;
        case BarrierId::Surface4F:
            s.direction = Direction::Backward;
            s.chart = Chart::Inf1;
            s.coordinates = {"x", "y"};
            s.region = "x > 0, -(s+2)x/(p-m) <= y <= -s x/(p-1)";
            s.applicability = "backward, sigma > 0, N >= 4, p_L < p < p_*";
            break;
        case BarrierId::PolynomialPc:
            s.direction = Direction::Backward;
            s.coordinates = {"c"};
            s.region = "s/(p-1) <= c <= (s+2)/(p-m) (printed: -(s+2)/(p-m) <= c <= -s/(p-1))";
            s.applicability = "backward, sigma > 0, N >= 4, p_L < p < p_*";
            break;
        case BarrierId::DiffInterm18:
            s.direction = Direction::Backward;
            s.chart = Chart::Inf1;
            s.coordinates = {"x", "z"};
            s.region = "x > 0, z >= 0, z/x > Z(P2)";
            s.applicability = "backward, sigma > 0, N >= 3";
            break;
        case BarrierId::DiffInterm19:
            s.direction = Direction::Backward;
            s.chart = Chart::Inf1;
            s.coordinates = {"x", "z"};
            s.region = "x > 0, z >= 0, z/x > Z(P2)";
            s.applicability = "backward, sigma = 0, N >= 3, 1 < p < p_s";
            break;
        case BarrierId::FlowPlanesF1F2:
            s.direction = Direction::Backward;
            s.coordinates = {"X", "Z"};
            s.region = "X > 0, Z > 0 on {Y = -(N-2)/m} if p >= p_c, else on {Y = -(s+2)/(p-m)}";
            s.applicability = "backward, N >= 3";
            break;
    }
    return s;
}

std::optional<std::string> inapplicable_reason(BarrierId id, const Params& prm) {
    const Exponents e = compute_exponents(prm);
    const bool fwd = prm.direction == Direction::Forward;
    const double tol = kBoundaryTol;
    switch (id) {
        case BarrierId::LineYeqMinusXoverN:
            if (!fwd) return "forward system only";
            break;
        case BarrierId::PlaneG:
            if (!fwd) return "forward system only";
            if (prm.p > e.p_F + tol) return "needs p <= p_F";
            break;
        case BarrierId::CylinderE:
            if (!fwd) return "forward system only";
            if (prm.N < 3) return "needs N >= 3";
            if (prm.p < e.p_s - tol) return "needs p >= p_s";
            break;
        case BarrierId::Plane1F1:
            if (fwd) return "backward system only";
            if (prm.sigma < 0.0) return "needs sigma >= 0";
            if (prm.p < e.p_F - tol) return "needs p >= p_F";
            break;
        case BarrierId::SurfaceF2:
            if (fwd) return "backward system only";
            if (prm.sigma < 0.0) return "needs sigma >= 0";
            break;
        case BarrierId::Surface4F:
        case BarrierId::PolynomialPc:
            if (fwd) return "backward system only";
            if (!(prm.sigma > 0.0)) return "needs sigma > 0";
            if (prm.N < 4) return "needs N >= 4";
            if (!(prm.p > e.p_L + tol) || !e.p_star || !(prm.p < *e.p_star - tol)) return "needs p_L < p < p_*";
            break;
        case BarrierId::DiffInterm18:
            if (fwd) return "backward system only";
            if (!(prm.sigma > 0.0)) return "needs sigma > 0";
            if (prm.N < 3) return "needs N >= 3";
            break;
        case BarrierId::DiffInterm19:
            if (fwd) return "backward system only";
            if (prm.sigma != 0.0) return "needs sigma = 0";
            if (prm.N < 3) return "needs N >= 3";
            if (!(prm.p > 1.0) || !(prm.p < e.p_s - tol)) return "needs 1 < p < p_s";
            break;
        case BarrierId::FlowPlanesF1F2:
            if (fwd) return "backward system only";
            if (prm.N < 3) return "needs N >= 3";
            break;
    }
    return std::nullopt;
}

bool in_region(BarrierId id, const Params& prm, double a, double b, const BarrierOptions& opt) {
    return region(id, to_bp(prm), a, b, opt);
}

double evaluate_barrier(BarrierId id, const Params& prm, double a, double b, const BarrierOptions& opt) {
    if (!opt.unchecked) {
        if (auto why = inapplicable_reason(id, prm)) throw BarrierError(to_string(id) + ": out of applicability, " + *why);
        if (!in_region(id, prm, a, b, opt)) throw BarrierError(to_string(id) + ": point out of region");
    }
    return value(id, to_bp(prm), a, b);
}

Rational evaluate_barrier_exact(BarrierId id, const RationalParams& prm, const Rational& a, const Rational& b,
                                const BarrierOptions& opt) {
    const BP<Rational> q = to_bp(prm);
    if (!opt.unchecked) {
        const Params pd{prm.m.to_double(), prm.N, prm.p.to_double(), prm.sigma.to_double(),
                        barrier_direction(id)};
        if (auto why = inapplicable_reason(id, pd)) throw BarrierError(to_string(id) + ": out of applicability, " + *why);
        if (!region(id, q, a, b, opt)) throw BarrierError(to_string(id) + ": point out of region");
    }
    return value(id, q, a, b);
}

std::optional<double> defining_function(BarrierId id, const Params& prm, const Vec3& u) {
    const BP<double> q = to_bp(prm);
    const double N = prm.N, s = prm.sigma, m = prm.m, p = prm.p;
    const double X = u[0], Y = u[1], Z = u[2];
    switch (id) {
        case BarrierId::LineYeqMinusXoverN:
        case BarrierId::PlaneG: return Y + X / N;
        case BarrierId::CylinderE: return Z + (N + s) * (m * Y + N - 2.0) * Y / (N - 2.0);
        case BarrierId::Plane1F1: return Z - (N + s) * (X / N - Y);
        case BarrierId::SurfaceF2:
            return Z - ((N + s) * (X / N - Y) - p * Y * Y + (p - m) * (N + s) / (N * (s + 2.0)) * X * Y);
        case BarrierId::Surface4F: {
            if (!(X > 0.0)) return std::nullopt;
            const double x = 1.0 / X, y = Y / X, z = Z / X, L = q.L();
            return (s + 2.0) * (p - 1.0) / L * x + (p - m) * (p - 1.0) / L * y - x * z;
        }
        case BarrierId::FlowPlanesF1F2:
            return q.pcgap() > 0.0 ? Y - q.y2() : Y + (N - 2.0) / m;
        default: return std::nullopt;
    }
}

std::optional<Vec3> lift_to_surface(BarrierId id, const Params& prm, double a, double b) {
    const BP<double> q = to_bp(prm);
    const double N = prm.N, s = prm.sigma, m = prm.m, p = prm.p;
    switch (id) {
        case BarrierId::LineYeqMinusXoverN: return Vec3{a, -a / N, 0.0};
        case BarrierId::PlaneG: return Vec3{a, -a / N, b};
        case BarrierId::CylinderE: return Vec3{a, b, -(N + s) * (m * b + N - 2.0) * b / (N - 2.0)};
        case BarrierId::Plane1F1: return Vec3{a, b, (N + s) * (a / N - b)};
        case BarrierId::SurfaceF2:
            return Vec3{a, b, (N + s) * (a / N - b) - p * b * b + (p - m) * (N + s) / (N * (s + 2.0)) * a * b};
        case BarrierId::Surface4F: {
            if (!(a > 0.0)) return std::nullopt;
            const double L = q.L();
            const double z = ((s + 2.0) * (p - 1.0) * a + (p - m) * (p - 1.0) * b) / (L * a);
            return Vec3{1.0 / a, b / a, z / a};
        }
        case BarrierId::FlowPlanesF1F2:
            return Vec3{a, q.pcgap() > 0.0 ? q.y2() : -(N - 2.0) / m, b};
        default: return std::nullopt;
    }
}

std::pair<double, double> free_coordinates(BarrierId id, const Params&, const Vec3& u) {
    switch (id) {
        case BarrierId::LineYeqMinusXoverN: return {u[0], 0.0};
        case BarrierId::PlaneG:
        case BarrierId::FlowPlanesF1F2: return {u[0], u[2]};
        case BarrierId::CylinderE:
        case BarrierId::Plane1F1:
        case BarrierId::SurfaceF2: return {u[0], u[1]};
        case BarrierId::Surface4F: return {1.0 / u[0], u[1] / u[0]};
        case BarrierId::PolynomialPc: return {-u[1], 0.0};
        case BarrierId::DiffInterm18:
        case BarrierId::DiffInterm19: return {1.0 / u[0], u[2] / u[0]};
    }
    return {0.0, 0.0};
}

CertificationReport certify_sign_on_grid(BarrierId id, const Params& prm, const GridSpec& grid) {
    if (grid.exact) throw BarrierError("exact mode needs rational parameters");
    return certify_impl(id, prm, to_bp(prm), grid.bound, grid, false);
}

CertificationReport certify_sign_on_grid(BarrierId id, const RationalParams& prm, const GridSpec& grid) {
    const Params pd{prm.m.to_double(), prm.N, prm.p.to_double(), prm.sigma.to_double(),
                    barrier_direction(id)};
    if (!grid.exact) return certify_impl(id, pd, to_bp(pd), grid.bound, grid, false);
    return certify_impl(id, pd, to_bp(prm), rational_bound(grid.bound), grid, true);
}

PolcMaximum polc_maximum(const Params& prm, bool literal_interval) {
    const BP<double> q = to_bp(prm);
    PolcMaximum r;
    std::tie(r.c_lo, r.c_hi) = polc_interval(q, literal_interval);
    const double A = (q.m + q.p - 1.0) * (q.p - q.m);
    r.vertex = -q.polc_K() / (2.0 * A);
    r.vertex_inside = r.vertex > r.c_lo && r.vertex < r.c_hi;
    std::vector<double> cands{r.c_lo, r.c_hi};
    if (r.vertex_inside) cands.push_back(r.vertex);
    r.max_value = -INFINITY;
    for (double c : cands) {
        const double v = polc(q, c);
        if (v > r.max_value) {
            r.max_value = v;
            r.argmax = c;
        }
    }
    return r;
}

EntryReport verify_unstable_entry_region(const Params& prm, const std::vector<double>& C_grid, double seed_delta,
                                         const Controls& ctl) {
    validate(prm);
    if (prm.direction != Direction::Backward) throw BarrierError("verify_unstable_entry_region: backward system only");
    if (prm.sigma < 0.0) throw BarrierError("verify_unstable_entry_region: needs sigma >= 0");
    const Exponents e = compute_exponents(prm);
    const bool flat = prm.sigma == 0.0;
    if (!flat && !(prm.p > e.p_F)) throw BarrierError("verify_unstable_entry_region: needs p > p_F for sigma > 0");
    if (flat && !(prm.p > 1.0)) throw BarrierError("verify_unstable_entry_region: needs p > 1 for sigma = 0");

    EntryReport rep;
    rep.params = prm;
    rep.region = flat ? "Z > sup(X,Y)" : "Z > pln(X,Y)";
    const double ybar = -(prm.sigma + 2.0) / (prm.p - prm.m);
    const BarrierId bid = flat ? BarrierId::SurfaceF2 : BarrierId::Plane1F1;

    Controls c = ctl;
    c.events.push_back({"Y=0 down", [](const Vec3& u) { return u[1]; }, !flat, -1});
    const SystemId sys{Direction::Backward, Chart::Main, {}};
    rep.all_passed = true;
    for (double C : C_grid) {
        EntryRecord rec;
        rec.C = C;
        Trajectory tr;
        try {
            tr = integrate(sys, prm, seed_P0_unstable(prm, C, seed_delta), c);
        } catch (const std::exception& ex) {
            rec.note = ex.what();
            rep.records.push_back(rec);
            rep.all_passed = false;
            continue;
        }
        rec.omega = tr.omega.label;
        std::optional<double> cross_eta;
        for (const Event& ev : tr.events)
            if (ev.name == "Y=0 down") {
                if (auto u = to_main_coords(ev.state)) {
                    rec.crossed_Y0 = true;
                    rec.crossing_ratio = (*u)[2] / (*u)[0];
                    cross_eta = ev.eta;
                }
                break;
            }
        // Stretch checked: until the first downward crossing of {Y = 0} for the plane, and
        // from that crossing (or from P0 when the orbit starts in {Y < 0}) until Y reaches
        // -(s+2)/(p-m) for the surface.
        bool started = false, seen = false, ok = true;
        for (size_t i = 1; i < tr.samples.size(); ++i) {
            const auto u = to_main_coords(tr.samples[i].state);
            if (!u) break;
            const double eta = tr.samples[i].state.eta;
            double phi;
            if (!flat) {
                if (cross_eta && eta > *cross_eta) break;
                if ((*u)[1] <= 0.0) break;
                phi = *defining_function(bid, prm, *u);
            } else {
                if (!started) {
                    if ((*u)[1] < 0.0 && (!cross_eta || eta >= *cross_eta)) started = true;
                    else continue;
                }
                if ((*u)[1] <= ybar) break;
                phi = *defining_function(bid, prm, *u);
            }
            if (!seen) {
                seen = true;
                rec.entered = phi > 0.0;
            }
            if (!(phi > 0.0)) {
                ok = false;
                rec.exit_eta = eta;
                rec.exit_state = *u;
                break;
            }
        }
        rec.remained = seen && ok;
        if (!seen) rec.note = flat ? "orbit never entered {Y < 0}" : "orbit starts outside {Y > 0}";
        bool pass = rec.entered && rec.remained;
        if (flat && rec.crossed_Y0 && rec.crossing_ratio) pass = pass && *rec.crossing_ratio > 1.0;
        if (!flat && rec.crossed_Y0 && rec.crossing_ratio)
            pass = pass && *rec.crossing_ratio > (prm.N + prm.sigma) / prm.N;
        if (rec.omega == OmegaLabel::Undetermined && tr.termination != "terminal event") {
            rec.note += rec.note.empty() ? "omega Undetermined" : "; omega Undetermined";
        }
        rep.all_passed = rep.all_passed && pass;
        rep.records.push_back(rec);
    }
    return rep;
}

}  // namespace ssfd
