#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ssfd/rational.hpp"

namespace ssfd {

enum class Direction { Forward, Backward };

// Model u_t = Δu^m + |x|^σ u^p with self-similar profiles in forward
// (global) or backward (blow-up) form.
struct Params {
    double m = 0.0;
    int N = 3;
    double p = 0.0;
    double sigma = 0.0;
    Direction direction = Direction::Forward;
    // Allows 0 < m < m_c. Results are flagged and not covered by the
    // classification.
    bool exploratory = false;
};

class ParamError : public std::invalid_argument {
public:
    ParamError(std::string violation, const std::string& what)
        : std::invalid_argument(what), violation_(std::move(violation)) {}
    const std::string& violation() const { return violation_; }

private:
    std::string violation_;
};

constexpr double kBoundaryTol = 1e-12;

double critical_m(int N);
void validate(const Params& prm);

struct Exponents {
    double L = 0, alpha = 0, beta = 0;
    double m_c = 0, p_L = 0, p_F = 0;
    double p_c = 0, p_s = 0;  // +inf when N <= 2
    std::optional<double> p_star;  // absent when N <= 2
};

Exponents compute_exponents(const Params& prm);

// Same quantities in exact arithmetic. p_c, p_s, p_star are empty for N <= 2.
struct RationalParams {
    Rational m;
    int N = 3;
    Rational p;
    Rational sigma;
};

struct ExactExponents {
    Rational L, alpha, beta, m_c, p_L, p_F;
    std::optional<Rational> p_c, p_s, p_star;
};

ExactExponents exact_exponents(const RationalParams& prm);

// (N-2)(p_c - p) written so that it stays finite for N <= 2.
double pc_gap(const Params& prm);

enum class Regime {
    BelowFujita,
    FujitaToSobolev,
    AtOrAboveSobolev,
    Critical_m_equals_mc,
    NegativeSigmaBlowup,
    NoBlowupHomogeneous,
    NoBlowupPositiveSigma,
    NonexistenceUnresolved,
};

enum class Behavior {
    OriginRegular,       // f(0) finite, f'(0) = 0 type start from P0
    OriginSingularP1,    // f ~ C xi^{-(N-2)/m} at 0
    OriginPowerP2,       // f ~ K xi^{-(sigma+2)/(p-m)} at 0
    TailFast,            // xi^{-2/(1-m)}
    TailFastLog,         // xi^{-N} (ln xi)^{-N/2}, m = m_c
    TailSlow,            // K xi^{-(sigma+2)/(p-m)}
    TailGamma,           // (1/(p-1))^{1/(p-1)} xi^{-sigma/(p-1)}
    OriginN2,            // N = 2 saddle-node start
    OriginN1,            // N = 1 start, f'(0) may be nonzero
    OriginN1Singular,    // N = 1, f ~ K xi^{1/m}
    VerticalAsymptoteForward,
    VerticalAsymptoteBackward,
};

struct RegimeReport {
    Params params;
    Exponents exponents;
    Regime regime = Regime::NonexistenceUnresolved;
    std::vector<Behavior> expected_behaviors;
    std::string theorem_citation;
    // Names of critical exponents that p equals within kBoundaryTol.
    std::vector<std::string> boundaries;
    bool m_critical = false;
};

RegimeReport classify_regime(const Params& prm);

std::string to_string(Direction d);
std::string to_string(Regime r);
std::string to_string(Behavior b);
Direction parse_direction(const std::string& s);

}  // namespace ssfd
