#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ssfd/trajectory.hpp"

namespace ssfd {

class ProfileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Which equation a profile is checked against. Stationary is the radial PDE with u_t = 0.
enum class ProfileEquation { Forward, Backward, Stationary };

struct ProfileSample {
    std::vector<double> xi;
    std::vector<double> f;
    Direction direction = Direction::Forward;
    Params params;
    std::string source;
    double T = 1.0;  // blow-up time, backward only
    std::vector<std::string> notices;
};

ProfileSample reconstruct_profile(const Trajectory& traj, const Params& prm);

// Samples an exact profile on xi in [lo, hi], uniform in ln xi.
ProfileSample sample_profile(const std::function<double(double)>& f, const Params& prm, double lo, double hi,
                             int points, const std::string& source);

struct ResidualReport {
    double max_scaled = 0.0;
    double at_xi = 0.0;
    size_t points = 0;
    ProfileEquation equation = ProfileEquation::Forward;
};

// Max over interior points of |residual| / (1 + xi^sigma f^p), five-point finite differences
// of ln f^m in ln xi (Fornberg weights on irregular grids).
ResidualReport ode_residual(const ProfileSample& prof, const Params& prm);
ResidualReport ode_residual(const ProfileSample& prof, const Params& prm, ProfileEquation eq);

struct TailFit {
    Behavior kind = Behavior::TailFast;
    double constant = 0.0;
    double exponent = 0.0;
    double offset = 0.0;  // OriginRegular: f^{-(1-m)}(0)
    double xi_lo = 0.0, xi_hi = 0.0;
    double misfit = 0.0;         // RMS of ln f_fit - ln f over the window
    double max_deviation = 0.0;  // max |f_fit/f - 1| over the window
    size_t points = 0;
};

// Least-squares fit of the template of `kind`:
//   power law             ln f = ln K + a ln xi
//   TailFastLog           ln f = ln K + a ln xi - (N/2) ln ln xi
//   OriginRegular         f^{-(1-m)} = D + q xi^2   (constant = q, exponent = 2)
// Without an explicit window the tail (or origin) segment where the local log slope is
// stable within 1% is used.
TailFit fit_tail(const ProfileSample& prof, Behavior kind, std::optional<std::pair<double, double>> window = {});

struct SolutionGrid {
    std::vector<double> r;
    std::vector<double> t;
    std::vector<std::vector<double>> u;  // u[i][j] at t[i], r[j]
};

// Forward: u = t^{-alpha} f(r t^{-beta}); backward: u = (T-t)^{-alpha} f(r (T-t)^{-beta}).
SolutionGrid assemble_solution(const std::function<double(double)>& f, const Params& prm,
                               const std::vector<double>& r, const std::vector<double>& t, double T = 1.0);
SolutionGrid assemble_solution(const ProfileSample& prof, const std::vector<double>& r, const std::vector<double>& t);

// Max relative deviation of t-rescaled snapshots from the profile: for each (t, r),
// |scale(t)^{-1} u - f(xi)| / f(xi).
double collapse_deviation(const SolutionGrid& g, const std::function<double(double)>& f, const Params& prm,
                          double T = 1.0);

// Interpolation of a sampled profile (linear in ln xi / ln f).
double interpolate_profile(const ProfileSample& prof, double xi);

// Explicit families.
// Stationary U_C at p = p_s.
std::function<double(double)> explicit_Uc(const Params& prm, double C);
// Stationary K xi^{-(sigma+2)/(p-m)}, p > p_c.
double power_stationary_constant(const Params& prm);
std::function<double(double)> explicit_power_stationary(const Params& prm);
// Backward profile of the p = p_* blow-up solution.
std::function<double(double)> explicit_pstar_profile(const Params& prm);
// u(x,t) of the p = p_* blow-up solution.
double explicit_pstar_solution(const Params& prm, double r, double t, double T = 1.0);
// Fast-decay constant [2m(mN-N+2)/(1-m)]^{1/(1-m)}.
double fast_decay_constant(const Params& prm);

// xi,f columns, 17 significant digits, metadata as leading "# key=value" lines.
void write_profile_csv(std::ostream& os, const ProfileSample& prof);

std::string to_string(ProfileEquation e);

}  // namespace ssfd
