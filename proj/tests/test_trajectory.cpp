#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ssfd/trajectory.hpp"
#include "support.hpp"

using namespace ssfd;

namespace {
const Params kFig{2.0 / 3, 3, 3, 1, Direction::Forward};
const SystemId kFwd{Direction::Forward, Chart::Main, {}};

Trajectory shoot(const Params& prm, double C, Controls ctl = {}) {
    return integrate({prm.direction, Chart::Main, {}}, prm, seed_P0_unstable(prm, C), ctl);
}
}  // namespace

TEST_SUITE("trajectory") {
    TEST_CASE("equilibria are recognized by dwell") {
        const auto cat = enumerate_points(kFig);
        const Trajectory t3 = integrate(kFwd, kFig, PhaseState{find_point(cat, PointId::P3)->coords, Chart::Main, 0});
        CHECK(t3.omega.label == OmegaLabel::ToP3);
        CHECK(t3.omega.dwell_span >= 5.0);
        const Trajectory t2 = integrate(kFwd, kFig, PhaseState{find_point(cat, PointId::P2)->coords, Chart::Main, 0});
        CHECK(t2.omega.label == OmegaLabel::ToP2);
    }

    TEST_CASE("l_0 enters Q1 with increasing X") {
        const Trajectory t = shoot(kFig, 0.0);
        CHECK(t.omega.label == OmegaLabel::ToQ1);
        REQUIRE(t.omega.ratio.has_value());
        CHECK(*t.omega.ratio == doctest::Approx(-9.0 / 7).epsilon(1e-3));
        double last = 0.0;
        bool increasing = true;
        for (const Sample& s : t.samples) {
            if (s.state.chart != Chart::Main) break;
            increasing = increasing && s.state.c[0] >= last;
            last = s.state.c[0];
        }
        CHECK(increasing);
    }

    TEST_CASE("large C escapes to Q3") {
        const Trajectory t = shoot(kFig, 1e3);
        CHECK(t.omega.label == OmegaLabel::ToQ3);
    }

    TEST_CASE("samples are ordered and stay in the closed positive region") {
        const Trajectory t = shoot(kFig, 5.0);
        double last_tau = -INFINITY;
        for (const Sample& s : t.samples) {
            CHECK(s.tau > last_tau);
            last_tau = s.tau;
            if (s.state.chart == Chart::Main) {
                CHECK(s.state.c[0] >= -1e-12);
                CHECK(s.state.c[2] >= -1e-12);
            }
        }
    }

    TEST_CASE("invariant planes are preserved") {
        Controls ctl;
        ctl.eta_max = 10.0;
        ctl.stop_on_omega = false;
        ctl.log_variables = false;
        const Trajectory tx = integrate(kFwd, kFig, PhaseState{{0.0, -0.1, 0.2}, Chart::Main, 0}, ctl);
        const Trajectory tz = integrate(kFwd, kFig, PhaseState{{0.3, -0.1, 0.0}, Chart::Main, 0}, ctl);
        double mx = 0.0, mz = 0.0;
        for (const Sample& s : tx.samples) mx = std::max(mx, std::abs(s.state.c[0]));
        for (const Sample& s : tz.samples) mz = std::max(mz, std::abs(s.state.c[2]));
        CHECK(mx <= 1e-10);
        CHECK(mz <= 1e-10);
    }

    TEST_CASE("eta invariant drift over span 20") {
        std::mt19937_64 rng(41);
        for (int i = 0; i < 10; ++i) {
            const Params prm = test::random_fujita_sobolev(rng);
            Controls ctl;
            ctl.eta_max = 20.0;
            ctl.stop_on_omega = false;
            ctl.chart_switch_bound = 1e300;
            const Trajectory t = shoot(prm, 1.0, ctl);
            CHECK(t.integrator_stats.max_residual <= 1e-7);
        }
    }

    TEST_CASE("labels are robust to tighter tolerances") {
        for (double C : {0.0, 1.0, 10.0, 100.0, 1e3}) {
            Controls tight;
            tight.rtol = 1e-11;
            tight.atol = 1e-13;
            CHECK(shoot(kFig, C).omega.label == shoot(kFig, C, tight).omega.label);
        }
    }

    TEST_CASE("trapping below the Fujita exponent") {
        const Params prm{2.0 / 3, 3, 1.6, 1, Direction::Forward};
        for (double C : {0.0, 0.1, 1.0, 10.0, 100.0}) {
            const Trajectory t = shoot(prm, C);
            bool inside = false, ok = true;
            for (const Sample& s : t.samples) {
                const auto u = to_main_coords(s.state);
                if (!u || !((*u)[0] > 0)) continue;
                const double g = (*u)[1] + (*u)[0] / prm.N;
                if (inside) ok = ok && g <= 1e-8;
                if (g <= 0.0) inside = true;
            }
            CHECK(ok);
            CHECK(t.omega.label != OmegaLabel::ToQ1);
            CHECK(t.omega.label != OmegaLabel::ToP3);
        }
    }

    TEST_CASE("backward sigma = 0 below C = 1 never reaches Q1") {
        const Params prm{2.0 / 3, 3, 3, 0, Direction::Backward};
        for (double C : {0.9, 0.99, 0.5}) CHECK(shoot(prm, C).omega.label != OmegaLabel::ToQ1);
    }

    TEST_CASE("plane events are localized") {
        Controls ctl;
        ctl.events.push_back({"Y=-X/N", [](const Vec3& u) { return u[1] + u[0] / 3.0; }, false, 0});
        const Trajectory t = shoot(kFig, 10.0, ctl);
        int found = 0;
        for (const Event& e : t.events)
            if (e.name == "Y=-X/N") {
                ++found;
                const auto u = to_main_coords(e.state);
                REQUIRE(u.has_value());
                CHECK(std::abs((*u)[1] + (*u)[0] / 3.0) <= 1e-10 * (1 + std::abs((*u)[0])));
            }
        CHECK(found >= 1);
    }

    TEST_CASE("CSV dump") {
        const Trajectory t = shoot(kFig, 1.0);
        std::ostringstream os;
        write_csv(os, t, {{"C", "1"}});
        const std::string s = os.str();
        CHECK(s.rfind("# m=", 0) == 0);
        CHECK(s.find("# C=1") != std::string::npos);
        CHECK(s.find("eta,X,Y,Z,chart,flags\n") != std::string::npos);
        size_t rows = 0;
        for (char c : s) rows += c == '\n';
        CHECK(rows >= t.samples.size());
    }
}
