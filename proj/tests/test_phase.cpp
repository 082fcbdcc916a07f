#include <doctest.h>

#include <cmath>

#include "ssfd/phase.hpp"
#include "ssfd/profiles.hpp"
#include "support.hpp"

using namespace ssfd;

namespace {
const Params kFig{2.0 / 3, 3, 3, 1, Direction::Forward};
const SystemId kFwd{Direction::Forward, Chart::Main, {}};
const SystemId kBwd{Direction::Backward, Chart::Main, {}};

Vec3 field_at(const SystemId& sys, const Params& prm, const Vec3& u) {
    return vector_field(sys, prm, PhaseState{u, sys.chart, 0.0});
}
}  // namespace

TEST_SUITE("phase") {
    TEST_CASE("field values at simple states") {
        const Vec3 z = field_at(kFwd, kFig, {0, 0, 0});
        CHECK(norm(z) == 0.0);
        const Vec3 p3 = field_at(kFwd, kFig, {54.0 / 11, -6, 0});
        CHECK(norm(p3) < 1e-13);
        const Vec3 v = field_at(kFwd, kFig, {1, 0, 0});
        CHECK(v[0] == doctest::Approx(2));
        CHECK(v[1] == doctest::Approx(-1));
        CHECK(v[2] == doctest::Approx(0));
    }

    TEST_CASE("backward field at a printed formula point") {
        const Params prm{2.0 / 3, 3, 2, 1, Direction::Backward};
        const Vec3 u{0.7, -0.3, 0.4};
        const Vec3 v = field_at(kBwd, prm, u);
        const double k = (prm.p - prm.m) / (prm.sigma + 2);
        CHECK(v[1] == doctest::Approx(u[0] - (prm.N - 2) * u[1] - u[2] - prm.m * u[1] * u[1] + k * u[0] * u[1]));
    }

    TEST_CASE("Jacobian at P0 and P3") {
        const Mat3 J0 = jacobian(kFwd, kFig, PhaseState{});
        const double want[3][3] = {{2, 0, 0}, {-1, -1, -1}, {0, 0, 3}};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) CHECK(J0[i][j] == doctest::Approx(want[i][j]));
        const Mat3 J3 = jacobian(kFwd, kFig, PhaseState{{54.0 / 11, -6, 0}, Chart::Main, 0});
        CHECK(J3[0][1] == doctest::Approx(18.0 / 11).epsilon(1e-13));
    }

    TEST_CASE("Jacobian agrees with central differences in every chart") {
        std::mt19937_64 rng(21);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        const SystemId systems[] = {{Direction::Forward, Chart::Main, {}},  {Direction::Backward, Chart::Main, {}},
                                    {Direction::Forward, Chart::Inf1, {}},  {Direction::Backward, Chart::Inf1, {}},
                                    {Direction::Forward, Chart::Inf2, Branch::Minus},
                                    {Direction::Backward, Chart::Inf2, Branch::Plus},
                                    {Direction::Forward, Chart::Ext, {}},   {Direction::Backward, Chart::Ext, {}}};
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const Params prm = test::random_params(rng);
            for (const SystemId& sys : systems) {
                const Field F(sys, prm);
                const Vec3 s{std::abs(u(rng)), u(rng), std::abs(u(rng))};
                const Mat3 J = F.jacobian(s);
                const double h = 1e-5;
                for (int j = 0; j < 3; ++j) {
                    Vec3 a = s, b = s;
                    a[j] += h;
                    b[j] -= h;
                    const Vec3 fa = F(a), fb = F(b);
                    for (int i2 = 0; i2 < 3; ++i2)
                        worst = std::max(worst, std::abs((fa[i2] - fb[i2]) / (2 * h) - J[i2][j]) / (1 + std::abs(J[i2][j])));
                }
            }
        }
        CHECK(worst <= 1e-6);
    }

    TEST_CASE("profile to phase and back") {
        const PhaseState s = profile_to_phase(kFig, 1.0, 1.0, 0.0);
        CHECK(s.c[0] == doctest::Approx(27.0 / 22).epsilon(1e-14));
        CHECK(s.c[1] == 0.0);
        CHECK(s.c[2] == doctest::Approx(1.5).epsilon(1e-14));
        const ProfilePoint back = phase_to_profile(kFig, s);
        CHECK(back.xi == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(back.f == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(profile_to_phase(kFig, 2.0, 5.0, 0.0).c[1] == 0.0);
        const ProfilePoint p3 = phase_to_profile(kFig, PhaseState{{54.0 / 11, -6, 0}, Chart::Main, 0});
        CHECK(p3.f == doctest::Approx(64).epsilon(1e-12));
        const ProfilePoint tiny = phase_to_profile(kFig, PhaseState{{1e-12, 0, 0}, Chart::Main, 0});
        CHECK(tiny.f < 1e-30);
        CHECK_THROWS_AS(phase_to_profile(kFig, PhaseState{{0, 0, 0}, Chart::Main, 0}), std::exception);
        CHECK_THROWS(profile_to_phase(kFig, -1.0, 1.0, 0.0));
        CHECK_THROWS(profile_to_phase(kFig, 1.0, 0.0, 0.0));
    }

    TEST_CASE("chart changes") {
        const PhaseState m{{2, -1, 4}, Chart::Main, 0.3};
        const PhaseState i1 = chart_change(m, Chart::Inf1);
        CHECK(i1.c[0] == 0.5);
        CHECK(i1.c[1] == -0.5);
        CHECK(i1.c[2] == 2.0);
        const PhaseState ex = chart_change(i1, Chart::Ext);
        CHECK(ex.c[0] == 0.5);
        CHECK(ex.c[1] == -0.5);
        CHECK(ex.c[2] == 1.0);
        const PhaseState back = chart_change(i1, Chart::Main);
        for (int k = 0; k < 3; ++k) CHECK(back.c[k] == doctest::Approx(m.c[k]).epsilon(1e-15));
        const PhaseState i2 = chart_change(m, Chart::Inf2);
        const PhaseState back2 = chart_change(i2, Chart::Main);
        for (int k = 0; k < 3; ++k) CHECK(back2.c[k] == doctest::Approx(m.c[k]).epsilon(1e-15));
        CHECK_THROWS_AS(chart_change(PhaseState{{0, 1, 1}, Chart::Main, 0}, Chart::Inf1), ChartError);
        CHECK_THROWS_AS(vector_field(kFwd, kFig, i1), ChartError);
    }

    TEST_CASE("explicit stationary orbit lies in X = 0 and is tangent to the field") {
        // U_C has no self-similar terms: its (Y, Z) follow the field restricted to the plane X = 0,
        // and they satisfy the cylinder relation.
        const Params prm{2.0 / 3, 3, 14.0 / 3, 1, Direction::Forward};
        const double N = prm.N, s = prm.sigma, m = prm.m, C = 1.0, k = s + 2;
        const double q = (N - 2) / (2 * m * k);
        auto YZ = [&](double t) {
            const double xi = std::exp(t), xk = std::pow(xi, k);
            const double U = std::pow((N - 2) * (N + s) * C / ((xk + C) * (xk + C)), q);
            return std::make_pair(-2 * q * k * xk / (xk + C), std::pow(xi, k) * std::pow(U, prm.p - m) / m);
        };
        double worst_tangent = 0.0, worst_cyl = 0.0;
        const double h = 1e-3;
        for (double t = std::log(0.1); t <= std::log(10.0); t += 0.05) {
            const auto [Y, Z] = YZ(t);
            const auto a = YZ(t - 2 * h), b = YZ(t - h), c = YZ(t + h), d = YZ(t + 2 * h);
            const double dY = (a.first - 8 * b.first + 8 * c.first - d.first) / (12 * h);
            const double dZ = (a.second - 8 * b.second + 8 * c.second - d.second) / (12 * h);
            const Vec3 v = field_at(kFwd, prm, {0.0, Y, Z});
            CHECK(v[0] == 0.0);
            worst_tangent = std::max(worst_tangent, (std::abs(v[1] - dY) + std::abs(v[2] - dZ)) / (1 + std::abs(Z)));
            worst_cyl = std::max(worst_cyl, std::abs(Z + (N + s) * (m * Y + N - 2) * Y / (N - 2)) / (1 + Z));
        }
        CHECK(worst_tangent <= 1e-8);
        CHECK(worst_cyl <= 1e-10);
    }

    TEST_CASE("eta invariant is constant under profile scaling") {
        const Params prm = kFig;
        const double lam = 1.7;
        const auto f = explicit_power_stationary(prm);
        const PhaseState a = profile_to_phase(prm, 1.3, f(1.3), 0.0);
        const PhaseState b = profile_to_phase(prm, 1.3 * lam, f(1.3 * lam), 0.0);
        CHECK(eta_invariant(prm, a) == doctest::Approx(eta_invariant(prm, b)).epsilon(1e-12));
        CHECK(eta_invariant(prm, a) == doctest::Approx(eta_invariant_constant(prm)).epsilon(1e-12));
        const Vec3 u{0.3, -0.2, 0.9};
        const PhaseState c{u, Chart::Main, calibrated_eta(prm, u)};
        CHECK(eta_invariant(prm, c) == doctest::Approx(eta_invariant_constant(prm)).epsilon(1e-12));
    }
}
