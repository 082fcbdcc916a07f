#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ssfd/params.hpp"
#include "support.hpp"

using namespace ssfd;

TEST_SUITE("params") {
    TEST_CASE("figure parameters in exact arithmetic") {
        const ExactExponents e = exact_exponents({Rational(2, 3), 3, Rational(3), Rational(1)});
        CHECK(e.p_F == Rational(5, 3));
        CHECK(*e.p_s == Rational(14, 3));
        CHECK(e.L == Rational(11, 3));
        CHECK(e.alpha == Rational(9, 11));
        CHECK(e.beta == Rational(7, 11));
        CHECK(*e.p_c == Rational(8, 3));
        CHECK(*e.p_star == Rational(5, 3));
    }

    TEST_CASE("exponents coincide at m = m_c, sigma = 0") {
        const ExactExponents e = exact_exponents({Rational(1, 3), 3, Rational(2), Rational(0)});
        CHECK(e.p_L == Rational(1));
        CHECK(e.p_F == Rational(1));
        CHECK(*e.p_c == Rational(1));
    }

    TEST_CASE("double exponents agree with rational ones") {
        const Exponents e = compute_exponents({2.0 / 3, 3, 3, 1, Direction::Forward});
        CHECK(e.p_F == doctest::Approx(5.0 / 3).epsilon(1e-15));
        CHECK(e.p_s == doctest::Approx(14.0 / 3).epsilon(1e-15));
        CHECK(e.alpha > 0);
        CHECK(e.beta > 0);
    }

    TEST_CASE("low dimensions have infinite p_c, p_s and no p_star") {
        for (int N : {1, 2}) {
            const Exponents e = compute_exponents({0.5, N, 2, 0.5, Direction::Forward});
            CHECK(std::isinf(e.p_c));
            CHECK(std::isinf(e.p_s));
            CHECK_FALSE(e.p_star.has_value());
        }
        const Params two{0.5, 2, 2, 0.5, Direction::Forward};
        CHECK(pc_gap(two) == doctest::Approx(0.5 * 2.5));
    }

    TEST_CASE("invalid parameters name the violation") {
        auto violation = [](const Params& p) {
            try {
                validate(p);
            } catch (const ParamError& e) {
                return e.violation();
            }
            return std::string();
        };
        CHECK(violation({1.2, 3, 3, 1, Direction::Forward}) == "m");
        CHECK(violation({0.2, 3, 3, 1, Direction::Forward}) == "m_c");
        CHECK(violation({2.0 / 3, 3, 3, -2.5, Direction::Forward}) == "sigma");
        CHECK(violation({2.0 / 3, 1, 3, -1.0, Direction::Forward}) == "sigma");
        CHECK(violation({2.0 / 3, 3, 0.9, 1, Direction::Forward}) == "p");
        CHECK(violation({2.0 / 3, 3, 3, 1, Direction::Forward}).empty());
        Params expl{0.2, 3, 3, 1, Direction::Forward};
        expl.exploratory = true;
        CHECK_NOTHROW(validate(expl));
    }

    TEST_CASE("gap identities and ordering on random parameters") {
        std::mt19937_64 rng(11);
        for (int i = 0; i < 500; ++i) {
            const Params prm = test::random_params(rng);
            const Exponents e = compute_exponents(prm);
            const double s = prm.sigma, m = prm.m, N = prm.N, mc = (N - 2) / N;
            CHECK(e.p_F - e.p_L == doctest::Approx((s + 2) * (m - mc) / 2).epsilon(1e-12));
            CHECK(e.p_c - e.p_F == doctest::Approx((s + 2) * (m - mc) / (N - 2)).epsilon(1e-12));
            CHECK(e.p_s - e.p_c == doctest::Approx(m * (s + 2) / (N - 2)).epsilon(1e-12));
            CHECK(e.L > 0);
            CHECK(e.p_L < e.p_F);
            CHECK(e.p_F < e.p_c);
            CHECK(e.p_c < e.p_s);
            if (prm.N >= 4 && s > N - 2) CHECK(*e.p_star > e.p_F);
        }
    }

    TEST_CASE("regime examples") {
        CHECK(classify_regime({2.0 / 3, 3, 3, 1, Direction::Forward}).regime == Regime::FujitaToSobolev);
        CHECK(classify_regime({2.0 / 3, 3, 3, 0, Direction::Backward}).regime == Regime::NoBlowupHomogeneous);
        CHECK(classify_regime({2.0 / 3, 4, 1.75, 3, Direction::Backward}).regime == Regime::NoBlowupPositiveSigma);
        CHECK(classify_regime({2.0 / 3, 3, 1.6, 1, Direction::Forward}).regime == Regime::BelowFujita);
        CHECK(classify_regime({2.0 / 3, 3, 5, 1, Direction::Forward}).regime == Regime::AtOrAboveSobolev);
        CHECK(classify_regime({2.0 / 3, 3, 1.8, -1, Direction::Backward}).regime == Regime::NegativeSigmaBlowup);
        // p_s(-1) = 2 exactly: boundary reported.
        const RegimeReport edge = classify_regime({2.0 / 3, 3, 2, -1, Direction::Backward});
        CHECK(std::find(edge.boundaries.begin(), edge.boundaries.end(), "p_s") != edge.boundaries.end());
        const RegimeReport r = classify_regime({2.0 / 3, 3, 14.0 / 3, 1, Direction::Forward});
        CHECK(r.regime == Regime::AtOrAboveSobolev);
        REQUIRE(r.boundaries.size() == 1);
        CHECK(r.boundaries[0] == "p_s");
    }

    TEST_CASE("classification is total and deterministic") {
        std::mt19937_64 rng(12);
        for (int i = 0; i < 400; ++i) {
            const Params prm = test::random_params(rng, i % 2 ? Direction::Backward : Direction::Forward);
            const RegimeReport a = classify_regime(prm), b = classify_regime(prm);
            CHECK(a.regime == b.regime);
            CHECK_FALSE(a.theorem_citation.empty());
        }
    }

    TEST_CASE("direction parsing") {
        CHECK(parse_direction("forward") == Direction::Forward);
        CHECK(parse_direction("backward") == Direction::Backward);
        CHECK_THROWS_AS(parse_direction("sideways"), ParamError);
    }
}
