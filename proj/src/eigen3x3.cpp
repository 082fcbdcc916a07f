#include <algorithm>
#include <cmath>
#include <numbers>

#include "ssfd/critical.hpp"

namespace ssfd {

namespace {

using cd = std::complex<double>;

std::array<cd, 2> eig2(double a, double b, double c, double d) {
    const double tr = a + d, det = a * d - b * c;
    const double disc = tr * tr / 4.0 - det;
    if (disc >= 0.0) {
        const double r = std::sqrt(disc);
        // Avoid cancellation for the smaller root.
        const double l1 = tr / 2.0 + (tr >= 0 ? r : -r);
        const double l2 = l1 != 0.0 ? det / l1 : tr / 2.0 - (tr >= 0 ? r : -r);
        return {cd(l1, 0.0), cd(l2, 0.0)};
    }
    const double im = std::sqrt(-disc);
    return {cd(tr / 2.0, im), cd(tr / 2.0, -im)};
}

std::array<cd, 3> cubic_roots(const Mat3& A) {
    const double tr = A[0][0] + A[1][1] + A[2][2];
    const double c2 = A[0][0] * A[1][1] - A[0][1] * A[1][0] + A[0][0] * A[2][2] - A[0][2] * A[2][0] +
                      A[1][1] * A[2][2] - A[1][2] * A[2][1];
    const double det = A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1]) -
                       A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0]) +
                       A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0]);
    // lambda^3 - tr lambda^2 + c2 lambda - det = 0, shift lambda = t + tr/3.
    const double sh = tr / 3.0;
    const double pp = c2 - tr * tr / 3.0;
    const double qq = -2.0 * tr * tr * tr / 27.0 + tr * c2 / 3.0 - det;
    std::array<cd, 3> r;
    const double D = qq * qq / 4.0 + pp * pp * pp / 27.0;
    if (D > 0.0) {
        const double sd = std::sqrt(D);
        const double u = std::cbrt(-qq / 2.0 + sd), v = std::cbrt(-qq / 2.0 - sd);
        r[0] = cd(u + v + sh, 0.0);
        r[1] = cd(-(u + v) / 2.0 + sh, std::sqrt(3.0) / 2.0 * (u - v));
        r[2] = std::conj(r[1]);
    } else if (pp == 0.0) {
        r = {cd(sh), cd(sh), cd(sh)};
    } else {
        const double rad = 2.0 * std::sqrt(-pp / 3.0);
        const double arg = std::clamp(3.0 * qq / (pp * rad), -1.0, 1.0);
        const double phi = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k) r[k] = cd(rad * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0) + sh, 0.0);
    }
    // One Newton polish per real root.
    for (auto& z : r) {
        if (z.imag() != 0.0) continue;
        double x = z.real();
        const double f = ((x - tr) * x + c2) * x - det;
        const double fp = (3.0 * x - 2.0 * tr) * x + c2;
        if (fp != 0.0) x -= f / fp;
        z = cd(x, 0.0);
    }
    return r;
}

std::optional<CVec3> null_vector(const Mat3& A, cd lambda) {
    std::array<CVec3, 3> M;
    double scale = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            M[i][j] = cd(A[i][j]) - (i == j ? lambda : cd(0.0));
            scale = std::max(scale, std::abs(M[i][j]));
        }
    auto cross = [](const CVec3& a, const CVec3& b) {
        return CVec3{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
    };
    auto nrm = [](const CVec3& v) { return std::sqrt(std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2])); };
    CVec3 best{};
    double bn = 0.0;
    for (auto [i, j] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
        CVec3 v = cross(M[i], M[j]);
        double n = nrm(v);
        if (n > bn) {
            bn = n;
            best = v;
        }
    }
    if (scale == 0.0 || bn <= 1e-14 * scale * scale) return std::nullopt;
    // Fix the phase so the largest component is real positive.
    int k = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(best[i]) > std::abs(best[k])) k = i;
    const cd ph = std::abs(best[k]) / best[k];
    for (auto& c : best) c *= ph / bn;
    return best;
}

Stability classify(const std::array<cd, 3>& ev) {
    int pos = 0, neg = 0;
    bool cplx = false;
    for (const auto& l : ev) {
        if (std::abs(l.real()) < kZeroEigTol) return Stability::NonHyperbolic;
        (l.real() > 0 ? pos : neg)++;
        if (l.imag() != 0.0) cplx = true;
    }
    if (pos == 3) return cplx ? Stability::NodeFocus : Stability::UnstableNode;
    if (neg == 3) return cplx ? Stability::NodeFocus : Stability::StableNode;
    return Stability::Saddle;
}

}  // namespace

EigenResult eigen_analysis(const Mat3& A) {
    EigenResult r;
    int split = -1;
    for (int i = 0; i < 3 && split < 0; ++i) {
        bool row = true, col = true;
        for (int j = 0; j < 3; ++j) {
            if (j == i) continue;
            row = row && A[i][j] == 0.0;
            col = col && A[j][i] == 0.0;
        }
        if (row || col) split = i;
    }
    if (split >= 0) {
        int a = (split + 1) % 3, b = (split + 2) % 3;
        if (a > b) std::swap(a, b);
        auto two = eig2(A[a][a], A[a][b], A[b][a], A[b][b]);
        r.values = {cd(A[split][split], 0.0), two[0], two[1]};
        r.note = "block reduction on index " + std::to_string(split);
    } else {
        r.values = cubic_roots(A);
        r.note = "cubic formula";
    }
    for (int i = 0; i < 3; ++i) {
        bool collide = false;
        for (int j = 0; j < 3; ++j)
            if (j != i && std::abs(r.values[i] - r.values[j]) < kCollisionTol) collide = true;
        if (!collide) r.vectors[i] = null_vector(A, r.values[i]);
    }
    r.stability = classify(r.values);
    return r;
}

EigenResult eigen_analysis(const CriticalPointInfo& info) {
    if (!info.linearization) throw std::invalid_argument("eigen_analysis: point has no linearization");
    return eigen_analysis(*info.linearization);
}

}  // namespace ssfd
