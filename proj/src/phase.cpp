#include "ssfd/phase.hpp"

#include <cmath>

namespace ssfd {

Field::Field(const SystemId& sys, const Params& prm) : sys_(sys), prm_(prm) {
    validate(prm);
    if (sys.chart == Chart::Inf2 && !sys.branch) throw ChartError("Inf2 system requires a sign branch");
    k_ = (prm.p - prm.m) / (prm.sigma + 2.0);
    s_ = sys.direction == Direction::Forward ? -1.0 : 1.0;
}

Vec3 Field::operator()(const Vec3& u) const {
    const double m = prm_.m, p = prm_.p, sg = prm_.sigma, N = prm_.N, k = k_, s = s_;
    switch (sys_.chart) {
        case Chart::Main: {
            const double X = u[0], Y = u[1], Z = u[2];
            return {X * (2.0 + (1.0 - m) * Y),
                    s * X - (N - 2.0) * Y - Z - m * Y * Y + s * k * X * Y,
                    Z * (sg + 2.0 + (p - m) * Y)};
        }
        case Chart::Inf1: {
            const double x = u[0], y = u[1], z = u[2];
            return {x * ((m - 1.0) * y - 2.0 * x),
                    -y * y + s * k * y + s * x - N * x * y - x * z,
                    z * ((p - 1.0) * y + sg * x)};
        }
        case Chart::Ext: {
            const double x = u[0], y = u[1], w = u[2];
            return {x * ((m - 1.0) * y - 2.0 * x),
                    -y * y + s * k * y + s * x - N * x * y - w,
                    w * ((sg - 2.0) * x + (m + p - 2.0) * y)};
        }
        case Chart::Inf2: {
            const double x = u[0], z = u[1], w = u[2], t = -s;
            const double sign = *sys_.branch == Branch::Minus ? 1.0 : -1.0;
            return {sign * (x + N * x * w + t * (k * x * x + x * x * w) + x * z * w),
                    sign * (p * z + (N + sg) * z * w + t * (k * x * z + x * z * w) + z * z * w),
                    sign * (m * w + (N - 2.0) * w * w + t * (k * x * w + x * w * w) + z * w * w)};
        }
    }
    return {};
}

Mat3 Field::jacobian(const Vec3& u) const {
    const double m = prm_.m, p = prm_.p, sg = prm_.sigma, N = prm_.N, k = k_, s = s_;
    switch (sys_.chart) {
        case Chart::Main: {
            const double X = u[0], Y = u[1], Z = u[2];
            return Mat3{Vec3{2.0 + (1.0 - m) * Y, (1.0 - m) * X, 0.0},
                        Vec3{s + s * k * Y, -(N - 2.0) - 2.0 * m * Y + s * k * X, -1.0},
                        Vec3{0.0, (p - m) * Z, sg + 2.0 + (p - m) * Y}};
        }
        case Chart::Inf1: {
            const double x = u[0], y = u[1], z = u[2];
            return Mat3{Vec3{(m - 1.0) * y - 4.0 * x, (m - 1.0) * x, 0.0},
                        Vec3{s - N * y - z, -2.0 * y + s * k - N * x, -x},
                        Vec3{sg * z, (p - 1.0) * z, (p - 1.0) * y + sg * x}};
        }
        case Chart::Ext: {
            const double x = u[0], y = u[1], w = u[2];
            return Mat3{Vec3{(m - 1.0) * y - 4.0 * x, (m - 1.0) * x, 0.0},
                        Vec3{s - N * y, -2.0 * y + s * k - N * x, -1.0},
                        Vec3{(sg - 2.0) * w, (m + p - 2.0) * w, (sg - 2.0) * x + (m + p - 2.0) * y}};
        }
        case Chart::Inf2: {
            const double x = u[0], z = u[1], w = u[2], t = -s;
            const double g = *sys_.branch == Branch::Minus ? 1.0 : -1.0;
            Mat3 J{Vec3{1.0 + N * w + t * (2.0 * k * x + 2.0 * x * w) + z * w, x * w, N * x + t * x * x + x * z},
                   Vec3{t * (k * z + z * w), p + (N + sg) * w + t * (k * x + x * w) + 2.0 * z * w,
                        (N + sg) * z + t * x * z + z * z},
                   Vec3{t * (k * w + w * w), w * w, m + 2.0 * (N - 2.0) * w + t * (k * x + 2.0 * x * w) + 2.0 * z * w}};
            for (auto& row : J)
                for (auto& v : row) v *= g;
            return J;
        }
    }
    return {};
}

namespace {

void check_chart(const SystemId& sys, const PhaseState& s) {
    if (sys.chart != s.chart)
        throw ChartError("state chart " + to_string(s.chart) + " does not match system chart " + to_string(sys.chart));
}

}  // namespace

Vec3 vector_field(const SystemId& sys, const Params& prm, const PhaseState& s) {
    check_chart(sys, s);
    return Field(sys, prm)(s.c);
}

Mat3 jacobian(const SystemId& sys, const Params& prm, const PhaseState& s) {
    check_chart(sys, s);
    return Field(sys, prm).jacobian(s.c);
}

PhaseState profile_to_phase(const Params& prm, double xi, double f, double fprime) {
    if (!(xi > 0.0)) throw std::domain_error("profile_to_phase: xi must be positive");
    if (!(f > 0.0)) throw std::domain_error("profile_to_phase: f must be positive");
    const Exponents e = compute_exponents(prm);
    const double m = prm.m;
    PhaseState s;
    s.chart = Chart::Main;
    s.c = {e.alpha / m * xi * xi * std::pow(f, 1.0 - m), xi * fprime / f,
           std::pow(xi, prm.sigma + 2.0) * std::pow(f, prm.p - m) / m};
    s.eta = std::log(xi);
    return s;
}

ProfilePoint phase_to_profile(const Params& prm, const PhaseState& s) {
    if (s.chart != Chart::Main) throw ChartError("phase_to_profile needs a Main-chart state");
    if (!(s.c[0] > 0.0)) throw std::domain_error("phase_to_profile: X must be positive");
    const Exponents e = compute_exponents(prm);
    const double xi = std::exp(s.eta);
    // Work in logs so that large eta does not overflow xi^2.
    const double lf = (std::log(prm.m * s.c[0] / e.alpha) - 2.0 * s.eta) / (1.0 - prm.m);
    return {xi, std::exp(lf)};
}

namespace {

Vec3 to_main(const PhaseState& s) {
    const Vec3& u = s.c;
    switch (s.chart) {
        case Chart::Main: return u;
        case Chart::Inf1:
            if (u[0] == 0.0) throw ChartError("chart-singular: x = 0 has no Main image");
            return {1.0 / u[0], u[1] / u[0], u[2] / u[0]};
        case Chart::Ext:
            if (u[0] == 0.0) throw ChartError("chart-singular: x = 0 has no Main image");
            return {1.0 / u[0], u[1] / u[0], u[2] / (u[0] * u[0])};
        case Chart::Inf2:
            if (u[2] == 0.0) throw ChartError("chart-singular: w = 0 has no Main image");
            return {u[0] / u[2], 1.0 / u[2], u[1] / u[2]};
    }
    return u;
}

Vec3 from_main(const Vec3& u, Chart c) {
    switch (c) {
        case Chart::Main: return u;
        case Chart::Inf1:
            if (u[0] == 0.0) throw ChartError("chart-singular: X = 0");
            return {1.0 / u[0], u[1] / u[0], u[2] / u[0]};
        case Chart::Ext:
            if (u[0] == 0.0) throw ChartError("chart-singular: X = 0");
            return {1.0 / u[0], u[1] / u[0], u[2] / (u[0] * u[0])};
        case Chart::Inf2:
            if (u[1] == 0.0) throw ChartError("chart-singular: Y = 0");
            return {u[0] / u[1], u[2] / u[1], 1.0 / u[1]};
    }
    return u;
}

}  // namespace

PhaseState chart_change(const PhaseState& s, Chart target) {
    if (s.chart == target) return s;
    PhaseState r;
    r.chart = target;
    r.eta = s.eta;
    // Inf1 <-> Ext stay defined on x = 0.
    if (s.chart == Chart::Inf1 && target == Chart::Ext) {
        r.c = {s.c[0], s.c[1], s.c[0] * s.c[2]};
        return r;
    }
    if (s.chart == Chart::Ext && target == Chart::Inf1) {
        if (s.c[0] == 0.0) throw ChartError("chart-singular: x = 0");
        r.c = {s.c[0], s.c[1], s.c[2] / s.c[0]};
        return r;
    }
    r.c = from_main(to_main(s), target);
    return r;
}

double eta_invariant(const Params& prm, const PhaseState& s) {
    const double m = prm.m;
    const double L = prm.sigma * (m - 1.0) + 2.0 * (prm.p - 1.0);
    return std::log(s.c[2]) - (prm.p - m) / (1.0 - m) * std::log(s.c[0]) + L / (1.0 - m) * s.eta;
}

double eta_invariant_constant(const Params& prm) {
    const Exponents e = compute_exponents(prm);
    const double m = prm.m;
    return -std::log(m) - (prm.p - m) / (1.0 - m) * std::log(e.alpha / m);
}

double calibrated_eta(const Params& prm, const Vec3& u) {
    const double m = prm.m;
    const double L = prm.sigma * (m - 1.0) + 2.0 * (prm.p - 1.0);
    return (1.0 - m) / L *
           (eta_invariant_constant(prm) - std::log(u[2]) + (prm.p - m) / (1.0 - m) * std::log(u[0]));
}

std::string to_string(Chart c) {
    switch (c) {
        case Chart::Main: return "main";
        case Chart::Inf1: return "inf1";
        case Chart::Inf2: return "inf2";
        case Chart::Ext: return "ext";
    }
    return "?";
}

Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
double norm(const Vec3& a) { return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]); }
Vec3 mat_vec(const Mat3& A, const Vec3& v) {
    return {A[0][0] * v[0] + A[0][1] * v[1] + A[0][2] * v[2], A[1][0] * v[0] + A[1][1] * v[1] + A[1][2] * v[2],
            A[2][0] * v[0] + A[2][1] * v[1] + A[2][2] * v[2]};
}

}  // namespace ssfd
