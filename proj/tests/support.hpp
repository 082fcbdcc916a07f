#pragma once

#include <algorithm>
#include <random>

#include "ssfd/params.hpp"

namespace ssfd::test {

// Valid supercritical parameters: N in {3,4,5}, m in (m_c, 1), sigma in (-1.5, 3), p above max(1, p_L).
inline Params random_params(std::mt19937_64& rng, Direction d = Direction::Forward) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Params prm;
    prm.N = 3 + static_cast<int>(rng() % 3);
    const double mc = (prm.N - 2.0) / prm.N;
    prm.m = mc + (1.0 - mc) * (0.05 + 0.9 * u(rng));
    prm.sigma = -1.5 + 4.5 * u(rng);
    const double pL = 1.0 + prm.sigma * (1.0 - prm.m) / 2.0;
    prm.p = std::max(1.0, pL) + 0.05 + 6.0 * u(rng);
    prm.direction = d;
    return prm;
}

// Forward parameters with p_F < p < p_s.
inline Params random_fujita_sobolev(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (;;) {
        Params prm = random_params(rng);
        const Exponents e = compute_exponents(prm);
        const double lo = std::max({e.p_F, e.p_L, 1.0});
        if (!(e.p_s > lo + 0.2)) continue;
        prm.p = lo + 0.1 + (e.p_s - lo - 0.2) * u(rng);
        return prm;
    }
}

}  // namespace ssfd::test
