#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ssfd/trajectory.hpp"

namespace ssfd {

class ShootingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ShootingOutcome {
    double C = 0.0;
    OmegaLimit omega;
    // Shooting label: the ω-label name, or "CrossedY0Up" for backward sigma < 0 orbits
    // stopped on their first upward crossing of {Y = 0}.
    std::string flank;
    std::vector<Event> events;
    PhaseState terminal;
    std::string error;  // seed failure, if any
};

// Controls used for shooting: adds the terminal {Y = 0} upward event for backward sigma < 0.
Controls shooting_controls(const Params& prm, Controls base = {});
std::string flank_label(const Params& prm, const Trajectory& tr);

std::vector<ShootingOutcome> sweep_C(const Params& prm, const std::vector<double>& C_grid,
                                     double seed_delta = kDefaultSeedDelta, const Controls& ctl = {});

struct SweepSummary {
    size_t prefix_ToQ1 = 0;  // leading outcomes labeled ToQ1
    size_t suffix_ToQ3 = 0;  // trailing outcomes labeled ToQ3
    size_t undetermined = 0;
    // Adjacent grid pairs with different flank labels.
    std::vector<std::pair<double, double>> transitions;
};

SweepSummary summarize_sweep(const std::vector<ShootingOutcome>& outcomes);

std::vector<double> log_grid(double lo, double hi, int n);

struct ConnectOptions {
    Controls controls;
    double seed_delta = kDefaultSeedDelta;
    double bracket_rtol = 1e-10;
    int max_stages = 60;
    // Stop the continuation once the followed orbit reaches this eta (P1P3crit target).
    std::optional<double> eta_target;
};

struct RatioFit {
    double r0 = 0.0;  // extrapolated y/x at Q1
    double misfit = 0.0;
    int points = 0;
};

struct ConnectionCertificate {
    Params params;
    PointId target = PointId::P3;
    double C_lo = 0.0, C_hi = 0.0;
    std::string flank_lo, flank_hi;
    double seed_delta = 0.0;
    // Separatrix orbit: bisected seed orbit continued by staged re-shooting, truncated
    // where the two flanks separate.
    Trajectory trajectory;
    double closest_approach = 0.0;  // relative Main distance to the target (x for Q1)
    PhaseState closest_state;
    std::optional<double> terminal_ratio;  // y/x at the last trusted sample (Q1)
    std::optional<RatioFit> ratio_fit;     // Y = r0 + a/X + b Z/X + ... along the approach (Q1)
    int stages = 0;
    int integrations = 0;
    std::string note;
};

ConnectionCertificate bisect_connection(const Params& prm, PointId target, double C_lo, double C_hi,
                                        const ConnectOptions& opt = {});

// Least-squares extrapolation of Y = y/x towards Q1 from Main samples with X >= X_min.
std::optional<RatioFit> fit_q1_ratio(const Trajectory& tr, double X_min);

struct CrossingRecord {
    double C;
    double X, Z;
    int direction;
};

struct NonexistenceReport {
    Params params;
    std::vector<ShootingOutcome> outcomes;  // grid plus refinements, sorted by C
    int refinement_rounds = 0;
    std::vector<double> counterexample_candidates;  // C values labeled ToQ1
    std::vector<CrossingRecord> downward_crossings;  // of {Y = 0}
    int crossing_violations = 0;                      // sigma = 0: downward crossings with Z <= X - slack
    std::string statement;
};

NonexistenceReport nonexistence_scan(const Params& prm, const std::vector<double>& C_grid, int refinement_depth,
                                     double seed_delta = kDefaultSeedDelta, const Controls& ctl = {});

}  // namespace ssfd
