#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "ssfd/params.hpp"
#include "ssfd/phase.hpp"

namespace ssfd {

enum class PointId { P0, P1, P2, P3, P1P3crit, Q1, Q2, Q3, Q4, Q5, Qgamma, Q1prime, Q5prime };

enum class Stability { UnstableNode, StableNode, Saddle, SaddleNode, NonHyperbolic, NodeFocus };

using CVec3 = std::array<std::complex<double>, 3>;

struct EigenResult {
    CVec3 values{};
    // Absent when the eigenvalue sits within kCollisionTol of another one.
    std::array<std::optional<CVec3>, 3> vectors;
    Stability stability = Stability::NonHyperbolic;
    std::string note;
};

constexpr double kCollisionTol = 1e-8;
constexpr double kZeroEigTol = 1e-10;

struct CriticalPointInfo {
    PointId id = PointId::P0;
    Chart chart = Chart::Main;
    std::optional<Branch> branch;
    Vec3 coords{};
    std::optional<Mat3> linearization;
    std::optional<EigenResult> eigen;
    Stability stability = Stability::NonHyperbolic;
    std::string existence_condition;
    std::string local_class;  // qualitative description of the local phase portrait
    std::vector<Behavior> expansions;
    // False for catalog-only entries (forward Q_gamma, Q1'/Q5' when m+p >= 2, Q4).
    bool relevant = true;
    std::optional<double> gamma;

    SystemId system(Direction d) const { return SystemId{d, chart, branch}; }
};

std::vector<CriticalPointInfo> enumerate_points(const Params& prm);
const CriticalPointInfo* find_point(const std::vector<CriticalPointInfo>& cat, PointId id);

// Closed-form eigen-decomposition of a real 3x3 matrix: block reduction when a
// row or column is decoupled, trigonometric/Cardano cubic otherwise.
EigenResult eigen_analysis(const Mat3& A);
EigenResult eigen_analysis(const CriticalPointInfo& info);

// Coordinates of the finite points (no existence filtering).
Vec3 coords_P1(const Params& prm);
Vec3 coords_P2(const Params& prm);
Vec3 coords_P3(const Params& prm);

class SeedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LocalSeed {
    PointId point = PointId::P0;
    double C = 0.0;  // +inf for the orbit inside {X = 0}
    double delta = 0.0;
    PhaseState state;
    int expansion_order = 1;
    Behavior behavior = Behavior::OriginRegular;
    double misalignment = 0.0;  // radians between field and manifold tangent plane
};

constexpr double kDefaultSeedDelta = 1e-4;
constexpr double kMinSeedDelta = 1e-8;
constexpr double kMaxMisalignment = 1e-2;

// Orbit l_C (forward) or r_C (backward) leaving P0 on its 2D unstable manifold.
LocalSeed seed_P0_unstable(const Params& prm, double C, double delta = kDefaultSeedDelta);

struct QuadraticCoefficients {
    double a, b, c;
};

// Z = (N+sigma)(X/N - Y) + a X^2 + b X Y + c Y^2 on the backward unstable manifold of P0.
QuadraticCoefficients quadratic_unstable_manifold_P0_backward(const Params& prm);

// y = sum coef * x^i z^j around Q1 in the backward Inf1 chart.
struct CenterManifold {
    int order = 2;
    double x = 0, x2 = 0, xz = 0, x3 = 0, x2z = 0, xz2 = 0, z3 = 0;
    double operator()(double xv, double zv) const {
        return x * xv + x2 * xv * xv + xz * xv * zv + x3 * xv * xv * xv + x2z * xv * xv * zv +
               xz2 * xv * zv * zv + z3 * zv * zv * zv;
    }
};

CenterManifold center_manifold_Q1(const Params& prm, int order);
// Surface Z = sup(X,Y) written as y = h(x,z) near Q1 (order 2, or 3 for sigma = 0).
CenterManifold sup_surface_Q1(const Params& prm, int order);

struct LinearCenterManifold {
    double slope;           // W = slope * X with W = Y + (N-2)/m
    double flow_coefficient;  // X' = flow_coefficient * X^2 on the manifold
};

LinearCenterManifold center_manifold_P1P3_crit(const Params& prm);

// N in {1,2} starts from the leading-order profile of the chosen behavior.
// K (N = 1) or D (N = 2) is the free constant of that profile.
LocalSeed seed_low_dimension(const Params& prm, Behavior behavior, double delta = kDefaultSeedDelta,
                             double constant = 1.0);

std::string to_string(PointId id);
std::string to_string(Stability s);

}  // namespace ssfd
