#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ssfd/trajectory.hpp"

namespace ssfd {

class BarrierError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class BarrierId {
    LineYeqMinusXoverN,  // forward, on {Y = -X/N, Z = 0}; free (X)
    PlaneG,              // forward, on {Y = -X/N}; free (X, Z)
    CylinderE,           // forward, on the cylinder over Z = -(N+s)(mY+N-2)Y/(N-2); free (X, Y)
    Plane1F1,            // backward, on Z = pln(X,Y), Y > 0; free (X, Y)
    SurfaceF2,           // backward, on Z = sup(X,Y), Y <= 0; free (X, Y)
    Surface4F,           // backward Inf1 chart, on the surface through z = 1 at y = -s x/(p-1); free (x, y)
    PolynomialPc,        // quadratic part of Surface4F along y = -c x; free (c)
    DiffInterm18,        // y(Q1) - y(sup) to second order, sigma > 0; free (x, z)
    DiffInterm19,        // y(Q1) - y(sup) to third order, sigma = 0; free (x, z)
    FlowPlanesF1F2,      // backward, flow across {Y = -(N-2)/m} (p >= p_c) or {Y = -(s+2)/(p-m)}; free (X, Z)
};

enum class SignClaim { Negative, NonPositive, NonNegative, Positive };

struct BarrierSpec {
    BarrierId id;
    std::string name;
    Chart chart = Chart::Main;
    Direction direction = Direction::Forward;
    std::vector<std::string> coordinates;  // names of the free coordinates (a, b)
    SignClaim claim = SignClaim::NonPositive;
    std::string region;
    std::string applicability;
};

const std::vector<BarrierId>& all_barriers();
BarrierSpec barrier_spec(BarrierId id, const Params& prm);
std::string to_string(BarrierId id);
BarrierId parse_barrier(const std::string& name);
std::string to_string(SignClaim c);

// Empty when applicable, otherwise the reason.
std::optional<std::string> inapplicable_reason(BarrierId id, const Params& prm);

struct BarrierOptions {
    // PolynomialPc: use the printed c-interval [-(s+2)/(p-m), -s/(p-1)] instead of the one
    // implied by c = -y/x on the Surface4F region, [s/(p-1), (s+2)/(p-m)].
    bool polc_literal_interval = false;
    // Skip applicability and region checks (exploration and negative controls).
    bool unchecked = false;
};

bool in_region(BarrierId id, const Params& prm, double a, double b = 0.0, const BarrierOptions& opt = {});
bool claim_holds(SignClaim c, double v);

// Closed-form value at free coordinates (a, b). Throws BarrierError out of region or applicability.
double evaluate_barrier(BarrierId id, const Params& prm, double a, double b = 0.0, const BarrierOptions& opt = {});
// Exact evaluation for rational parameters and coordinates.
Rational evaluate_barrier_exact(BarrierId id, const RationalParams& prm, const Rational& a,
                                const Rational& b = Rational(0), const BarrierOptions& opt = {});

// Defining function Phi with the barrier surface as zero set, oriented so that
// d Phi / d eta = (positive factor) * evaluate_barrier on the surface. Main coordinates in,
// Inf1 coordinates used internally for Surface4F. Empty for barriers without a surface.
std::optional<double> defining_function(BarrierId id, const Params& prm, const Vec3& main);
// Point of the barrier surface at free coordinates (a, b), in Main coordinates.
std::optional<Vec3> lift_to_surface(BarrierId id, const Params& prm, double a, double b = 0.0);
// Free coordinates (a, b) of a Main-coordinate point.
std::pair<double, double> free_coordinates(BarrierId id, const Params& prm, const Vec3& main);

struct GridSpec {
    int points_per_axis = 100;
    double bound = 100.0;  // upper bound of unbounded coordinates
    bool exact = false;    // rational grid points and exact sign decisions
    BarrierOptions options;
};

struct Violation {
    double a = 0.0, b = 0.0;
    double value = 0.0;
};

struct CertificationReport {
    BarrierId id;
    Params params;
    SignClaim claim;
    bool applicable = true;
    std::string inapplicable_reason;
    size_t points = 0;
    double min_value = 0.0, max_value = 0.0;
    size_t violation_count = 0;
    std::vector<Violation> violations;  // first violations found, capped
    size_t exact_points = 0;            // points decided in exact arithmetic
    size_t exact_fallbacks = 0;         // exact evaluation overflowed, double used
    bool passed() const { return violation_count == 0; }
};

CertificationReport certify_sign_on_grid(BarrierId id, const Params& prm, const GridSpec& grid = {});
// Rational parameters for the exact mode; the double params are derived from them.
CertificationReport certify_sign_on_grid(BarrierId id, const RationalParams& prm, const GridSpec& grid);

// Maximum of P(c) over the c-interval, by endpoints and the stationary point.
struct PolcMaximum {
    double c_lo = 0.0, c_hi = 0.0;
    double max_value = 0.0;
    double argmax = 0.0;
    double vertex = 0.0;
    bool vertex_inside = false;
};
PolcMaximum polc_maximum(const Params& prm, bool literal_interval = false);

struct EntryRecord {
    double C = 0.0;
    bool entered = false;    // first sample past the seed lies in the region
    bool remained = false;   // stayed in the region over the checked stretch
    bool crossed_Y0 = false;
    std::optional<double> crossing_ratio;  // Z/X at the first downward {Y = 0} crossing
    std::optional<double> exit_eta;        // first sample leaving the region
    std::optional<Vec3> exit_state;
    OmegaLabel omega = OmegaLabel::Undetermined;
    std::string note;
};

struct EntryReport {
    Params params;
    std::string region;  // "Z > pln(X,Y)" or "Z > sup(X,Y)"
    std::vector<EntryRecord> records;
    bool all_passed = false;
};

// Backward, sigma >= 0. sigma > 0: the seed orbit stays in {Z > pln} until it crosses {Y = 0}.
// sigma = 0: orbits with C > 1 leave P0 inside {Y < 0, Z > sup}; orbits crossing {Y = 0}
// downward do so with Z > X.
EntryReport verify_unstable_entry_region(const Params& prm, const std::vector<double>& C_grid,
                                         double seed_delta = kDefaultSeedDelta, const Controls& ctl = {});

}  // namespace ssfd
