#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>

#include "ssfd/params.hpp"

namespace ssfd {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

// Main (X,Y,Z); Inf1 (x,y,z) = (1/X, Y/X, Z/X); Inf2 (x,z,w) = (X/Y, Z/Y, 1/Y);
// Ext (x,y,w) with w = x z from Inf1.
enum class Chart { Main, Inf1, Inf2, Ext };

// Inf2 sign branch: Minus resolves Q2 (Y -> +inf), Plus resolves Q3 (Y -> -inf).
enum class Branch { Minus, Plus };

struct SystemId {
    Direction direction = Direction::Forward;
    Chart chart = Chart::Main;
    std::optional<Branch> branch;
};

struct PhaseState {
    Vec3 c{};
    Chart chart = Chart::Main;
    double eta = 0.0;
};

class ChartError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Precomputed constants for one (system, params) pair; cheap to call in loops.
class Field {
public:
    Field(const SystemId& sys, const Params& prm);
    Vec3 operator()(const Vec3& u) const;
    Mat3 jacobian(const Vec3& u) const;
    const SystemId& system() const { return sys_; }
    const Params& params() const { return prm_; }

private:
    SystemId sys_;
    Params prm_;
    double k_;   // (p-m)/(sigma+2)
    double s_;   // -1 forward, +1 backward
};

Vec3 vector_field(const SystemId& sys, const Params& prm, const PhaseState& s);
Mat3 jacobian(const SystemId& sys, const Params& prm, const PhaseState& s);

PhaseState profile_to_phase(const Params& prm, double xi, double f, double fprime);

struct ProfilePoint {
    double xi;
    double f;
};
ProfilePoint phase_to_profile(const Params& prm, const PhaseState& s);

PhaseState chart_change(const PhaseState& s, Chart target);

// ln Z - ((p-m)/(1-m)) ln X + (L/(1-m)) eta; constant along Main trajectories.
double eta_invariant(const Params& prm, const PhaseState& s);
// Constant value taken by eta_invariant on trajectories of genuine profiles.
double eta_invariant_constant(const Params& prm);
// eta making eta_invariant equal to eta_invariant_constant at a state with X, Z > 0.
double calibrated_eta(const Params& prm, const Vec3& main);

std::string to_string(Chart c);

Vec3 operator+(const Vec3& a, const Vec3& b);
Vec3 operator-(const Vec3& a, const Vec3& b);
Vec3 operator*(double s, const Vec3& a);
double norm(const Vec3& a);
Vec3 mat_vec(const Mat3& A, const Vec3& v);

}  // namespace ssfd
