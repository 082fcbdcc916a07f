#include "ssfd/critical.hpp"

#include <cmath>
#include <limits>

namespace ssfd {

Vec3 coords_P1(const Params& prm) { return {0.0, -(prm.N - 2.0) / prm.m, 0.0}; }

Vec3 coords_P2(const Params& prm) {
    const double s = prm.sigma, pm = prm.p - prm.m;
    return {0.0, -(s + 2.0) / pm, -(s + 2.0) * pc_gap(prm) / (pm * pm)};
}

Vec3 coords_P3(const Params& prm) {
    const double m = prm.m, N = prm.N;
    const double L = prm.sigma * (m - 1.0) + 2.0 * (prm.p - 1.0);
    return {2.0 * (prm.sigma + 2.0) * (m * N - N + 2.0) / (L * (1.0 - m)), -2.0 / (1.0 - m), 0.0};
}

namespace {

CriticalPointInfo make_point(const Params& prm, PointId id, Chart chart, Vec3 coords, std::string exist,
                             std::string cls, std::vector<Behavior> beh, std::optional<Branch> branch = {}) {
    CriticalPointInfo c;
    c.id = id;
    c.chart = chart;
    c.branch = branch;
    c.coords = coords;
    c.existence_condition = std::move(exist);
    c.local_class = std::move(cls);
    c.expansions = std::move(beh);
    Field f(SystemId{prm.direction, chart, branch}, prm);
    c.linearization = f.jacobian(coords);
    c.eigen = eigen_analysis(*c.linearization);
    c.stability = c.eigen->stability;
    return c;
}

}  // namespace

std::vector<CriticalPointInfo> enumerate_points(const Params& prm) {
    validate(prm);
    const Exponents e = compute_exponents(prm);
    const bool fwd = prm.direction == Direction::Forward;
    const double k = (prm.p - prm.m) / (prm.sigma + 2.0);
    const double sk = fwd ? -k : k;
    const bool mcrit = prm.N > 2 && std::abs(prm.m - e.m_c) <= kBoundaryTol;
    std::vector<CriticalPointInfo> out;

    out.push_back(make_point(prm, PointId::P0, Chart::Main, {0, 0, 0}, "always",
                             prm.N == 2   ? "saddle-node (merged with P1)"
                             : prm.N == 1 ? "unstable node"
                                          : "saddle: 2D unstable, 1D stable manifold",
                             prm.N == 2 ? std::vector{Behavior::OriginRegular, Behavior::OriginN2}
                             : prm.N == 1 ? std::vector{Behavior::OriginRegular, Behavior::OriginN1}
                                          : std::vector{Behavior::OriginRegular}));

    if (mcrit && fwd) {
        out.push_back(make_point(prm, PointId::P1P3crit, Chart::Main, coords_P1(prm), "m = m_c",
                                 "non-hyperbolic saddle: 2D center-stable, 1D unstable manifold",
                                 {Behavior::TailFastLog}));
    } else if (prm.N != 2) {
        const bool node = prm.N >= 3 && prm.p < e.p_c;
        out.push_back(make_point(prm, PointId::P1, Chart::Main, coords_P1(prm), "N != 2",
                                 prm.N == 1 ? "saddle: 2D unstable manifold"
                                 : node     ? "unstable node"
                                            : "saddle: 2D unstable in {Z=0}, 1D stable in {X=0}",
                                 prm.N == 1 ? std::vector{Behavior::OriginN1Singular}
                                            : std::vector{Behavior::OriginSingularP1}));
    }
    if (prm.N >= 3 && prm.p > e.p_c + kBoundaryTol) {
        out.push_back(make_point(prm, PointId::P2, Chart::Main, coords_P2(prm), "p > p_c",
                                 prm.p < e.p_s ? "unstable node or focus" : "saddle",
                                 {Behavior::OriginPowerP2}));
    }
    if (fwd && !mcrit) {
        out.push_back(make_point(prm, PointId::P3, Chart::Main, coords_P3(prm), "forward system, m > m_c",
                                 "saddle: 2D stable, 1D unstable in {Z=0}", {Behavior::TailFast}));
    }

    out.push_back(make_point(prm, PointId::Q1, Chart::Inf1, {0, 0, 0}, "always",
                             fwd ? "non-hyperbolic, attracting: 2D stable center manifold, 1D stable"
                                 : "non-hyperbolic: unique 2D stable center manifold, 1D unstable",
                             {Behavior::TailSlow}));
    out.push_back(make_point(prm, PointId::Q2, Chart::Inf2, {0, 0, 0}, "always", "unstable node", {},
                             Branch::Minus));
    out.push_back(make_point(prm, PointId::Q3, Chart::Inf2, {0, 0, 0}, "always", "stable node", {},
                             Branch::Plus));
    {
        // Descriptor only: resolved in the Ext chart into Q1' and Q5'.
        CriticalPointInfo q4;
        q4.id = PointId::Q4;
        q4.chart = Chart::Ext;
        q4.coords = {0, 0, 0};
        q4.existence_condition = "always";
        q4.local_class = "split into Q1prime and Q5prime by w = x z";
        q4.relevant = false;
        out.push_back(q4);
    }
    out.push_back(make_point(prm, PointId::Q5, Chart::Inf1, {0, sk, 0}, "always",
                             fwd ? "saddle: 2D unstable in {z=0}, 1D stable in {x=0}"
                                 : "saddle: 2D stable in {z=0}, 1D unstable in {x=0}",
                             {}));
    {
        const double kappa = fwd ? 1.0 : e.L / ((prm.sigma + 2.0) * (prm.p - 1.0));
        auto q = make_point(prm, PointId::Qgamma, Chart::Inf1, {0, 0, kappa},
                            fwd ? "family; no orbit from the finite part" : "distinguished member of the family",
                            fwd ? "catalog only" : "unique incoming orbit",
                            fwd ? std::vector<Behavior>{} : std::vector{Behavior::TailGamma});
        q.gamma = 1.0 / std::sqrt(1.0 + kappa * kappa);
        q.relevant = !fwd;
        out.push_back(q);
    }
    const bool newq4 = prm.m + prm.p < 2.0;
    {
        auto q = make_point(prm, PointId::Q1prime, Chart::Ext, {0, 0, 0}, "always",
                            newq4 ? (fwd ? "non-hyperbolic with an unstable sector" : "non-hyperbolic with a stable sector")
                                  : "same orbits as Q1",
                            {});
        q.relevant = newq4;
        if (newq4) q.expansions = {fwd ? Behavior::VerticalAsymptoteForward : Behavior::VerticalAsymptoteBackward};
        out.push_back(q);
    }
    {
        auto q = make_point(prm, PointId::Q5prime, Chart::Ext, {0, sk, 0}, "always",
                            newq4 ? (fwd ? "unstable node" : "stable node") : "same orbits as Q5", {});
        q.relevant = newq4;
        if (newq4) q.expansions = {fwd ? Behavior::VerticalAsymptoteForward : Behavior::VerticalAsymptoteBackward};
        out.push_back(q);
    }
    return out;
}

const CriticalPointInfo* find_point(const std::vector<CriticalPointInfo>& cat, PointId id) {
    for (const auto& c : cat)
        if (c.id == id) return &c;
    return nullptr;
}

namespace {

// Angle between the field and the tangent plane of Y = phi(X,Z); grad = (phi_X, phi_Z).
double misalignment(const Field& f, const Vec3& u, double phiX, double phiZ) {
    const Vec3 v = f(u);
    const Vec3 n{-phiX, 1.0, -phiZ};
    const double vn = norm(v), nn = norm(n);
    if (vn == 0.0) return 0.0;
    const double dot = v[0] * n[0] + v[1] * n[1] + v[2] * n[2];
    return std::asin(std::min(1.0, std::abs(dot) / (vn * nn)));
}

}  // namespace

LocalSeed seed_P0_unstable(const Params& prm, double C, double delta) {
    validate(prm);
    if (!(C >= 0.0)) throw SeedError("seed_P0_unstable: C must be nonnegative");
    if (!(delta > 0.0)) throw SeedError("seed_P0_unstable: delta must be positive");
    const bool fwd = prm.direction == Direction::Forward;
    const double N = prm.N, s = prm.sigma;
    const Exponents e = compute_exponents(prm);
    Field f(SystemId{prm.direction, Chart::Main, {}}, prm);

    // Graph Y = b1 X + a1 Z + e2 X^2 + dxz XZ + a2 Z^2 + a3 Z^3 of the unstable manifold.
    const double sgn = fwd ? -1.0 : 1.0, k = (prm.p - prm.m) / (s + 2.0);
    const double b1 = sgn / N, a1 = -1.0 / (N + s);
    const double e2 = (k * N - 1.0) / (N * N * (N + 2.0));
    const double dxz = a1 * sgn * (k - (1.0 + prm.p) / N) / (N + s + 2.0);
    const double a2 = -prm.p * a1 * a1 / (N + 2.0 * s + 2.0);
    // Pure Z^3 term; it dominates the error when sigma < 0 and C is large.
    const double a3 = -a1 * a2 * (3.0 * prm.p - prm.m) / (N + 3.0 * s + 4.0);

    for (double d = delta; d >= kMinSeedDelta * (1.0 - 1e-12); d /= 2.0) {
        LocalSeed sd;
        sd.point = PointId::P0;
        sd.C = C;
        sd.delta = d;
        sd.state.chart = Chart::Main;
        sd.expansion_order = std::isinf(C) ? 3 : 2;
        const double X = std::isinf(C) ? 0.0 : d;
        const double Z = std::isinf(C) ? d : C * std::pow(d, (s + 2.0) / 2.0);
        const double Y = b1 * X + a1 * Z + e2 * X * X + dxz * X * Z + a2 * Z * Z + a3 * Z * Z * Z;
        const double phiX = b1 + 2.0 * e2 * X + dxz * Z;
        const double phiZ = a1 + dxz * X + 2.0 * a2 * Z + 3.0 * a3 * Z * Z;
        sd.state.c = {X, Y, Z};
        const Vec3& u = sd.state.c;
        sd.state.eta = u[0] > 0.0 && u[2] > 0.0 ? calibrated_eta(prm, u)
                       : u[0] > 0.0           ? 0.5 * std::log(prm.m * u[0] / e.alpha)
                                              : 0.0;
        sd.misalignment = misalignment(f, u, phiX, phiZ);
        sd.behavior = Behavior::OriginRegular;
        if (sd.misalignment <= kMaxMisalignment) return sd;
    }
    throw SeedError("seed_P0_unstable: tangency check failed down to the minimum offset");
}

QuadraticCoefficients quadratic_unstable_manifold_P0_backward(const Params& prm) {
    validate(prm);
    const double N = prm.N, s = prm.sigma, p = prm.p, m = prm.m;
    const double pF = m + (s + 2.0) / N;
    const double A = -((N * N + 3.0 * N * s + 4.0 * N + 2.0 * s + 4.0) * (p - pF) +
                       (N + 2.0) * (s + 2.0) * (N * m + s + 2.0) / N);
    const double den = (s + 2.0) * (N + s + 2.0) * (N + 2.0 * s + 2.0);
    return {-s * (N + s) * A / (N * N * (N + 2.0) * den), -(N + s) * A / (N * den),
            -(N + s) * p / (N + 2.0 * s + 2.0)};
}

CenterManifold center_manifold_Q1(const Params& prm, int order) {
    validate(prm);
    if (order != 2 && order != 3) throw std::invalid_argument("center_manifold_Q1: order must be 2 or 3");
    if (order == 3 && prm.sigma != 0.0) throw std::invalid_argument("center_manifold_Q1: order 3 needs sigma = 0");
    const double s = prm.sigma, pm = prm.p - prm.m, g = pc_gap(prm);
    CenterManifold c;
    c.order = order;
    c.x = -(s + 2.0) / pm;
    c.x2 = (s + 2.0) * (s + 2.0) * g / (pm * pm * pm);
    c.xz = (s + 2.0) / pm;
    if (order == 3) {
        const double h = g + 2.0 * prm.p + 2.0 * (prm.m - 1.0);
        c.x3 = -8.0 * g * h / std::pow(pm, 5);
        c.x2z = -4.0 * h / std::pow(pm, 3);
    }
    return c;
}

CenterManifold sup_surface_Q1(const Params& prm, int order) {
    validate(prm);
    if (order != 2 && order != 3) throw std::invalid_argument("sup_surface_Q1: order must be 2 or 3");
    if (order == 3 && prm.sigma != 0.0) throw std::invalid_argument("sup_surface_Q1: order 3 needs sigma = 0");
    const double s = prm.sigma, pm = prm.p - prm.m, g = pc_gap(prm), N = prm.N;
    CenterManifold c;
    c.order = order;
    c.x = -(s + 2.0) / pm;
    c.x2 = N * (s + 2.0) * (s + 2.0) * g / ((N + s) * pm * pm * pm);
    c.xz = (s + 2.0) * N / ((N + s) * pm);
    if (order == 3) {
        const double h = g + 2.0 * prm.p;
        c.x3 = -8.0 * g * h / std::pow(pm, 5);
        c.x2z = -4.0 * h / std::pow(pm, 3);
    }
    return c;
}

LinearCenterManifold center_manifold_P1P3_crit(const Params& prm) {
    validate(prm);
    if (prm.N < 3) throw std::invalid_argument("center_manifold_P1P3_crit: needs N >= 3");
    const Exponents e = compute_exponents(prm);
    if (std::abs(prm.m - e.m_c) > kBoundaryTol) throw std::invalid_argument("center_manifold_P1P3_crit: needs m = m_c");
    const double d = (prm.N - 2.0) * (prm.sigma + 2.0);
    return {-prm.N * (prm.p - e.p_c) / d, -2.0 * (prm.p - e.p_c) / d};
}

LocalSeed seed_low_dimension(const Params& prm, Behavior behavior, double delta, double constant) {
    validate(prm);
    if (!(delta > 0.0 && delta < 1.0)) throw SeedError("seed_low_dimension: delta must lie in (0,1)");
    const double m = prm.m, xi = delta;
    double f = 0.0, fp = 0.0;
    LocalSeed sd;
    sd.delta = delta;
    sd.C = constant;
    sd.behavior = behavior;
    sd.expansion_order = 1;
    if (prm.N == 1 && behavior == Behavior::OriginN1Singular) {
        f = constant * std::pow(xi, 1.0 / m);
        fp = constant / m * std::pow(xi, 1.0 / m - 1.0);
        sd.point = PointId::P1;
    } else if (prm.N == 1 && behavior == Behavior::OriginN1) {
        const double q = -2.0 / (1.0 - m);
        f = std::pow(1.0 - constant * xi, q);
        fp = -q * constant * std::pow(1.0 - constant * xi, q - 1.0);
        sd.point = PointId::P0;
    } else if (prm.N == 2 && behavior == Behavior::OriginN2) {
        const double l = -std::log(xi);
        f = constant * std::pow(l, 1.0 / m);
        fp = -constant / (m * xi) * std::pow(l, 1.0 / m - 1.0);
        sd.point = PointId::P0;
    } else {
        throw SeedError("seed_low_dimension: behavior " + to_string(behavior) + " not available for N = " +
                        std::to_string(prm.N));
    }
    sd.state = profile_to_phase(prm, xi, f, fp);
    return sd;
}

std::string to_string(PointId id) {
    switch (id) {
        case PointId::P0: return "P0";
        case PointId::P1: return "P1";
        case PointId::P2: return "P2";
        case PointId::P3: return "P3";
        case PointId::P1P3crit: return "P1P3crit";
        case PointId::Q1: return "Q1";
        case PointId::Q2: return "Q2";
        case PointId::Q3: return "Q3";
        case PointId::Q4: return "Q4";
        case PointId::Q5: return "Q5";
        case PointId::Qgamma: return "Qgamma";
        case PointId::Q1prime: return "Q1prime";
        case PointId::Q5prime: return "Q5prime";
    }
    return "?";
}

std::string to_string(Stability s) {
    switch (s) {
        case Stability::UnstableNode: return "UnstableNode";
        case Stability::StableNode: return "StableNode";
        case Stability::Saddle: return "Saddle";
        case Stability::SaddleNode: return "SaddleNode";
        case Stability::NonHyperbolic: return "NonHyperbolic";
        case Stability::NodeFocus: return "NodeFocus";
    }
    return "?";
}

}  // namespace ssfd
