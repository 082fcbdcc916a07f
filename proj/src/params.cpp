#include "ssfd/params.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace ssfd {

double critical_m(int N) { return N > 2 ? static_cast<double>(N - 2) / N : 0.0; }

void validate(const Params& prm) {
    std::ostringstream os;
    if (prm.N < 1) throw ParamError("N", "N must be a positive integer");
    if (!(prm.m > 0.0 && prm.m < 1.0))
        throw ParamError("m", "m must lie in (0,1)");
    const double mc = critical_m(prm.N);
    if (!prm.exploratory && prm.m < mc - kBoundaryTol) {
        os << "m = " << prm.m << " is below m_c = " << mc << " (use exploratory mode)";
        throw ParamError("m_c", os.str());
    }
    const double smin = std::max(-2.0, -static_cast<double>(prm.N));
    if (!(prm.sigma > smin)) {
        os << "sigma must exceed " << smin;
        throw ParamError("sigma", os.str());
    }
    if (prm.N == 1 && !(prm.sigma > -1.0)) throw ParamError("sigma", "sigma must exceed -1 when N = 1");
    const double pL = 1.0 + prm.sigma * (1.0 - prm.m) / 2.0;
    if (!(prm.p > 1.0) || !(prm.p > pL)) {
        os << "p must exceed max(1, p_L) = " << std::max(1.0, pL);
        throw ParamError("p", os.str());
    }
}

Exponents compute_exponents(const Params& prm) {
    validate(prm);
    const double m = prm.m, p = prm.p, s = prm.sigma;
    const double N = prm.N;
    Exponents e;
    e.L = s * (m - 1.0) + 2.0 * (p - 1.0);
    e.alpha = (s + 2.0) / e.L;
    e.beta = (p - m) / e.L;
    e.m_c = critical_m(prm.N);
    e.p_L = 1.0 + s * (1.0 - m) / 2.0;
    e.p_F = m + (s + 2.0) / N;
    if (prm.N > 2) {
        e.p_c = m * (N + s) / (N - 2.0);
        e.p_s = m * (N + 2.0 * s + 2.0) / (N - 2.0);
        e.p_star = 1.0 + m * s / (N - 2.0);
    } else {
        e.p_c = std::numeric_limits<double>::infinity();
        e.p_s = std::numeric_limits<double>::infinity();
    }
    return e;
}

ExactExponents exact_exponents(const RationalParams& prm) {
    const Rational one(1), two(2);
    const Rational& m = prm.m;
    const Rational& p = prm.p;
    const Rational& s = prm.sigma;
    const Rational N(prm.N);
    ExactExponents e;
    e.L = s * (m - one) + two * (p - one);
    if (e.L.sign() <= 0) throw ParamError("p", "L must be positive");
    e.alpha = (s + two) / e.L;
    e.beta = (p - m) / e.L;
    e.m_c = prm.N > 2 ? Rational(prm.N - 2, prm.N) : Rational(0);
    e.p_L = one + s * (one - m) / two;
    e.p_F = m + (s + two) / N;
    if (prm.N > 2) {
        const Rational n2(prm.N - 2);
        e.p_c = m * (N + s) / n2;
        e.p_s = m * (N + two * s + two) / n2;
        e.p_star = one + m * s / n2;
    }
    return e;
}

double pc_gap(const Params& prm) {
    return prm.m * (prm.N + prm.sigma) - prm.p * (prm.N - 2.0);
}

RegimeReport classify_regime(const Params& prm) {
    RegimeReport r;
    r.params = prm;
    r.exponents = compute_exponents(prm);
    const Exponents& e = r.exponents;
    const double p = prm.p, tol = kBoundaryTol;

    auto near = [&](double v) { return std::isfinite(v) && std::abs(p - v) <= tol; };
    if (near(e.p_L)) r.boundaries.push_back("p_L");
    if (near(e.p_F)) r.boundaries.push_back("p_F");
    if (near(e.p_c)) r.boundaries.push_back("p_c");
    if (near(e.p_s)) r.boundaries.push_back("p_s");
    if (e.p_star && near(*e.p_star)) r.boundaries.push_back("p_star");
    r.m_critical = prm.N > 2 && std::abs(prm.m - e.m_c) <= tol;

    // Open upper ends are max(1, .) so that p_s < 1 sends every p > 1 upward.
    const double ps = std::max(1.0, e.p_s);

    if (prm.direction == Direction::Forward) {
        if (p <= e.p_F + tol) {
            r.regime = Regime::BelowFujita;
            r.theorem_citation = "forward: no global self-similar solution for p <= p_F";
        } else if (prm.N >= 3 && p >= ps - tol) {
            r.regime = Regime::AtOrAboveSobolev;
            r.expected_behaviors = {Behavior::OriginRegular, Behavior::TailSlow};
            r.theorem_citation = "forward, N >= 3, p >= p_s: infinitely many slow-decay profiles, no fast decay";
        } else if (r.m_critical) {
            r.regime = Regime::Critical_m_equals_mc;
            r.expected_behaviors = {Behavior::OriginRegular, Behavior::TailFastLog, Behavior::TailSlow};
            r.theorem_citation = "forward, m = m_c, p_F < p < p_s: log-corrected fast decay plus slow-decay family";
        } else {
            r.regime = Regime::FujitaToSobolev;
            r.expected_behaviors = {Behavior::OriginRegular, Behavior::TailFast, Behavior::TailSlow};
            r.theorem_citation = "forward, m > m_c, p_F < p < p_s: a fast-decay profile and a slow-decay family";
        }
        return r;
    }

    const double s = prm.sigma;
    if (s < -tol) {
        if (p < ps - tol) {
            r.regime = Regime::NegativeSigmaBlowup;
            r.expected_behaviors = {Behavior::OriginRegular, Behavior::TailSlow};
            r.theorem_citation = "backward, sigma < 0, 1 < p < p_s: at least one blow-up profile with slow decay";
        } else {
            r.regime = Regime::NonexistenceUnresolved;
            r.theorem_citation = "backward, p >= p_s: range not analysed";
        }
    } else if (s <= tol) {
        if (p < ps - tol) {
            r.regime = Regime::NoBlowupHomogeneous;
            r.theorem_citation = "backward, sigma = 0, 1 < p < p_s: no blow-up self-similar profile";
        } else {
            r.regime = Regime::NonexistenceUnresolved;
            r.theorem_citation = "backward, p >= p_s: range not analysed";
        }
    } else {
        const bool band1 = p > e.p_F + tol && p < e.p_s - tol;
        const bool band2 = prm.N >= 4 && e.p_star && p > e.p_L + tol && p < *e.p_star - tol;
        if (band1 || band2) {
            r.regime = Regime::NoBlowupPositiveSigma;
            r.theorem_citation = band1 ? "backward, sigma > 0, p_F < p < p_s: no blow-up self-similar profile"
                                       : "backward, sigma > 0, N >= 4, p_L < p < p_*: no blow-up self-similar profile";
        } else {
            r.regime = Regime::NonexistenceUnresolved;
            r.theorem_citation = p >= ps - tol ? "backward, p >= p_s: range not analysed"
                                               : "backward, sigma > 0: nonexistence conjectured but not proved here";
        }
    }
    return r;
}

std::string to_string(Direction d) { return d == Direction::Forward ? "forward" : "backward"; }

Direction parse_direction(const std::string& s) {
    if (s == "forward") return Direction::Forward;
    if (s == "backward") return Direction::Backward;
    throw ParamError("direction", "direction must be forward or backward");
}

std::string to_string(Regime r) {
    switch (r) {
        case Regime::BelowFujita: return "BelowFujita";
        case Regime::FujitaToSobolev: return "FujitaToSobolev";
        case Regime::AtOrAboveSobolev: return "AtOrAboveSobolev";
        case Regime::Critical_m_equals_mc: return "Critical_m_equals_mc";
        case Regime::NegativeSigmaBlowup: return "NegativeSigmaBlowup";
        case Regime::NoBlowupHomogeneous: return "NoBlowupHomogeneous";
        case Regime::NoBlowupPositiveSigma: return "NoBlowupPositiveSigma";
        case Regime::NonexistenceUnresolved: return "NonexistenceUnresolved";
    }
    return "?";
}

std::string to_string(Behavior b) {
    switch (b) {
        case Behavior::OriginRegular: return "origin_regular";
        case Behavior::OriginSingularP1: return "origin_singular_P1";
        case Behavior::OriginPowerP2: return "origin_power_P2";
        case Behavior::TailFast: return "tail_fast";
        case Behavior::TailFastLog: return "tail_fast_log";
        case Behavior::TailSlow: return "tail_slow";
        case Behavior::TailGamma: return "tail_gamma";
        case Behavior::OriginN2: return "origin_N2";
        case Behavior::OriginN1: return "origin_N1";
        case Behavior::OriginN1Singular: return "origin_N1_singular";
        case Behavior::VerticalAsymptoteForward: return "vertical_asymptote_forward";
        case Behavior::VerticalAsymptoteBackward: return "vertical_asymptote_backward";
    }
    return "?";
}

}  // namespace ssfd
