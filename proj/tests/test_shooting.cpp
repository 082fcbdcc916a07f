#include <doctest.h>

#include <cmath>

#include "ssfd/shooting.hpp"
#include "support.hpp"

using namespace ssfd;

namespace {
const Params kFig{2.0 / 3, 3, 3, 1, Direction::Forward};

size_t count(const std::vector<ShootingOutcome>& v, OmegaLabel l) {
    size_t n = 0;
    for (const auto& o : v) n += o.omega.label == l;
    return n;
}
}  // namespace

TEST_SUITE("shooting") {
    TEST_CASE("forward sweep has a ToQ1 prefix and a ToQ3 suffix") {
        const auto out = sweep_C(kFig, log_grid(1e-3, 1e3, 13));
        const SweepSummary s = summarize_sweep(out);
        CHECK(s.prefix_ToQ1 >= 1);
        CHECK(s.suffix_ToQ3 >= 1);
        CHECK(s.prefix_ToQ1 + s.suffix_ToQ3 + s.undetermined == out.size());
        REQUIRE(s.transitions.size() == 1);
        CHECK(s.transitions[0].first < 24.998);
        CHECK(s.transitions[0].second > 24.998);
    }

    TEST_CASE("below p_F no orbit reaches Q1 or P3") {
        const auto out = sweep_C({2.0 / 3, 3, 1.6, 1, Direction::Forward}, log_grid(1e-3, 1e3, 13));
        CHECK(count(out, OmegaLabel::ToQ1) == 0);
        CHECK(count(out, OmegaLabel::ToP3) == 0);
    }

    TEST_CASE("above p_s ToQ1 persists but P3 is never reached") {
        const auto out = sweep_C({2.0 / 3, 3, 5, 1, Direction::Forward}, log_grid(1e-3, 1e3, 13));
        CHECK(count(out, OmegaLabel::ToQ1) >= 1);
        CHECK(count(out, OmegaLabel::ToP3) == 0);
    }

    TEST_CASE("P3 certificate is reproducible") {
        const ConnectionCertificate a = bisect_connection(kFig, PointId::P3, 1, 100);
        const ConnectionCertificate b = bisect_connection(kFig, PointId::P3, 1, 100);
        CHECK(a.C_lo == b.C_lo);
        CHECK(a.C_hi == b.C_hi);
        CHECK((a.C_hi - a.C_lo) <= 1e-10 * a.C_hi);
        CHECK(a.closest_approach <= 1e-3);
        CHECK(a.closest_state.c[1] == doctest::Approx(-6).epsilon(1e-3));
        CHECK(a.closest_state.c[0] == doctest::Approx(54.0 / 11).epsilon(1e-3));
    }

    TEST_CASE("bracket without a separatrix is rejected") {
        CHECK_THROWS_AS(bisect_connection(kFig, PointId::P3, 0.01, 1), ShootingError);
    }

    TEST_CASE("backward sigma < 0 boundary orbit tends to Q1 along the center manifold") {
        // Existence holds for p < p_s(sigma) = 2 here; the ratio is -(sigma+2)/(p-m).
        const Params prm{2.0 / 3, 3, 1.8, -1, Direction::Backward};
        const ConnectionCertificate c = bisect_connection(prm, PointId::Q1, 1e-2, 10);
        CHECK(c.trajectory.omega.label == OmegaLabel::ToQ1);
        REQUIRE(c.ratio_fit.has_value());
        CHECK(c.ratio_fit->r0 == doctest::Approx(-1.0 / (1.8 - 2.0 / 3)).epsilon(1e-3));
    }

    TEST_CASE("backward sigma < 0 above p_s: the separatrix does not reach Q1") {
        const Params prm{2.0 / 3, 3, 3, -1, Direction::Backward};
        const ConnectionCertificate c = bisect_connection(prm, PointId::Q1, 1e-2, 10);
        CHECK(c.trajectory.omega.label != OmegaLabel::ToQ1);
    }

    TEST_CASE("backward sigma < 0 separatrices keep Y in the guaranteed band") {
        for (double p : {1.5, 1.8, 2.0}) {
            const Params prm{2.0 / 3, 3, p, -1, Direction::Backward};
            const double bound = pc_gap(prm) > 0 ? -(prm.sigma + 2) / (p - prm.m) : -(prm.N - 2) / prm.m;
            const ConnectionCertificate c = bisect_connection(prm, PointId::Q1, 1e-2, 10);
            double ymin = 0.0;
            for (const Sample& s : c.trajectory.samples)
                if (const auto u = to_main_coords(s.state)) ymin = std::min(ymin, (*u)[1]);
            CHECK_MESSAGE(ymin >= bound - 1e-8, "p=", p, " ymin=", ymin, " bound=", bound);
            CHECK(ymin > -2.0 / (1 - prm.m));
        }
    }

    TEST_CASE("backward sigma < 0: orbits leaving into Y < 0 first meet Y = 0 by an upward crossing") {
        for (double p : {1.8, 3.0}) {
            const Params prm{2.0 / 3, 3, p, -1, Direction::Backward};
            Controls ctl;
            ctl.events.push_back({"Y=0", [](const Vec3& u) { return u[1]; }, false, 0});
            for (double C : log_grid(0.1, 10, 7)) {
                const LocalSeed seed = seed_P0_unstable(prm, C);
                REQUIRE(seed.state.c[1] < 0.0);
                const Trajectory t = integrate({Direction::Backward, Chart::Main, {}}, prm, seed, ctl);
                for (const Event& e : t.events)
                    if (e.name == "Y=0") {
                        CHECK(e.direction > 0);
                        break;
                    }
            }
        }
    }

    TEST_CASE("nonexistence scans find no Q1 connection") {
        for (const Params& prm : {Params{2.0 / 3, 3, 2, 1, Direction::Backward},
                                  Params{2.0 / 3, 4, 1.75, 3, Direction::Backward}}) {
            const NonexistenceReport r = nonexistence_scan(prm, log_grid(1e-3, 1e3, 13), 1);
            CHECK(r.counterexample_candidates.empty());
            CHECK(r.statement.find("no connection") != std::string::npos);
        }
    }

    TEST_CASE("log grid") {
        const auto g = log_grid(1e-2, 1e2, 5);
        REQUIRE(g.size() == 5);
        CHECK(g[0] == doctest::Approx(1e-2));
        CHECK(g[2] == doctest::Approx(1.0));
        CHECK(g[4] == doctest::Approx(1e2));
    }
}
