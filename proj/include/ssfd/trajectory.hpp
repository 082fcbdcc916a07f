#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ssfd/critical.hpp"

namespace ssfd {

enum class OmegaLabel { ToQ1, ToQ3, ToP3, ToP2, ToP1P3crit, ToQ5, ToQgamma, VerticalAsymptote, Undetermined };

struct OmegaLimit {
    OmegaLabel label = OmegaLabel::Undetermined;
    std::optional<Behavior> behavior;  // set for VerticalAsymptote
    double terminal_distance = 0.0;    // chart metric, to the matched point (or |Y| for ToQ3)
    double dwell_span = 0.0;           // chart time spent inside the criterion
    std::optional<double> ratio;       // y/x at termination for ToQ1
    std::string note;
};

// Generic sign function on Main coordinates; crossings are localized on the dense output.
struct EventSpec {
    std::string name;
    std::function<double(const Vec3&)> g;
    bool terminal = false;
    int direction = 0;  // +1 upward only, -1 downward only, 0 both
};

struct NearPointSpec {
    PointId point;
    Vec3 main_coords;
    double radius;
};

enum class EventKind { PlaneCrossing, Escape, NearPoint, StepFailure };

struct Event {
    EventKind kind = EventKind::PlaneCrossing;
    std::string name;  // plane name, escape component, point id
    double eta = 0.0;
    PhaseState state;
    int direction = 0;
    double value = 0.0;  // escape bound or distance
};

struct Controls {
    double rtol = 1e-10;
    double atol = 1e-12;
    double eta_max = 200.0;
    double chart_switch_bound = 1e6;
    double h_max = 0.5;  // Main chart only
    double h_init = 1e-3;
    long max_steps = 400000;
    double q3_factor = 10.0;
    double dwell_eps = 1e-6;
    double dwell_span = 5.0;
    double q1_ratio_tol = 1e-3;
    double q1_x_max = 1e-3;
    // Integrate ln X, ln Z (ln x, ln z in Inf1) when positive.
    bool log_variables = true;
    // Stop on the first labeled omega criterion.
    bool stop_on_omega = true;
    std::vector<EventSpec> events;
    std::vector<NearPointSpec> near_points;
};

struct IntegratorStats {
    long steps = 0;
    long rejected = 0;
    double max_residual = 0.0;  // max drift of the eta invariant over samples with X, Z > 0
    long chart_switches = 0;
};

enum SampleFlag : unsigned { kFlagSeed = 1, kFlagChartSwitch = 2, kFlagEvent = 4, kFlagTerminal = 8 };

struct Sample {
    PhaseState state;  // state.eta is the profile variable ln xi
    double tau = 0.0;  // cumulative integration time (eta in Main, chart time elsewhere)
    unsigned flags = 0;
};

struct Trajectory {
    SystemId system;
    Params params;
    std::vector<Sample> samples;
    std::vector<Event> events;
    OmegaLimit omega;
    IntegratorStats integrator_stats;
    std::string termination;
};

// Shared ω-detector: fed accepted samples in order, both online and in classify_omega.
class OmegaDetector {
public:
    OmegaDetector(const Params& prm, const std::vector<CriticalPointInfo>& catalog, const Controls& ctl);
    std::optional<OmegaLimit> feed(const PhaseState& s, double tau);
    // Label to use when integration stops for a reason other than a met criterion.
    OmegaLimit finish(const PhaseState& last, const std::string& reason) const;
    double q3_bound() const { return q3_bound_; }

private:
    struct Target {
        PointId id;
        Chart chart;
        Vec3 coords;
        double entered = -1.0;  // tau at entry, < 0 when outside
    };
    Params prm_;
    Controls ctl_;
    std::vector<Target> targets_;
    double q1_ratio_;
    double q1_entered_ = -1.0;
    double eta1_ = 0.0;
    std::optional<double> last_tau_;
    Chart last_chart_ = Chart::Main;
    double last_X_ = 0.0;
    double q3_bound_;
    Field main_;
};

Trajectory integrate(const SystemId& sys, const Params& prm, const PhaseState& seed, const Controls& ctl = {});
Trajectory integrate(const SystemId& sys, const Params& prm, const LocalSeed& seed, const Controls& ctl = {});

OmegaLimit classify_omega(const Trajectory& traj, const std::vector<CriticalPointInfo>& catalog,
                          const Controls& ctl = {});

// Main coordinates of any chart state, when defined.
std::optional<Vec3> to_main_coords(const PhaseState& s);

void write_csv(std::ostream& os, const Trajectory& traj, const std::map<std::string, std::string>& meta = {});

std::string to_string(OmegaLabel l);
std::string to_string(EventKind k);

}  // namespace ssfd
