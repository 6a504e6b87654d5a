#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "uqr/grid.hpp"
#include "uqr/states.hpp"

namespace uqr::testing {

inline std::mt19937_64 make_rng(uint64_t seed) { return std::mt19937_64(seed); }

inline cplx random_coefficient(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    return cplx(u(rng), u(rng));
}

/// Random finite superposition of circle modes; strictly periodic when
/// alpha = 0. Always satisfies |psi(2pi)| = |psi(0)|.
inline StateRecipe random_circle_packet(std::mt19937_64& rng, int max_abs_mode = 4,
                                        double alpha = 0.0) {
    const int m_min = -max_abs_mode;
    std::vector<cplx> coeffs;
    for (int m = m_min; m <= max_abs_mode; ++m) coeffs.push_back(random_coefficient(rng));
    return StateRecipe::circle_wave_packet(std::move(coeffs), m_min, alpha);
}

/// Orthonormal Hermite function h_k(x) (harmonic-oscillator eigenfunctions
/// with unit frequency), evaluated by the stable three-term recurrence.
inline double hermite_function(int k, double x) {
    const double h0 = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
    if (k == 0) return h0;
    double prev = h0;
    double cur = std::sqrt(2.0) * x * h0;
    for (int j = 2; j <= k; ++j) {
        const double next =
            std::sqrt(2.0 / j) * x * cur - std::sqrt((j - 1.0) / j) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

/// Random smooth, rapidly decaying line state as a Hermite superposition,
/// bundled with an exact closed-form resampler.
inline ResampleableState random_hermite_state(std::mt19937_64& rng, const GridTopology& topo,
                                              int max_order = 6) {
    std::vector<cplx> coeffs;
    for (int k = 0; k <= max_order; ++k) coeffs.push_back(random_coefficient(rng));
    auto sample = [coeffs](const GridTopology& t) {
        std::vector<cplx> a(static_cast<size_t>(t.n_points()));
        for (int i = 0; i < t.n_points(); ++i) {
            const double x = t.coordinate(i);
            cplx v = 0.0;
            for (size_t k = 0; k < coeffs.size(); ++k)
                v += coeffs[k] * hermite_function(static_cast<int>(k), x);
            a[static_cast<size_t>(i)] = v;
        }
        return normalize(WaveFunction(t, std::move(a)));
    };
    WaveFunction wf = sample(topo);
    return ResampleableState{std::move(wf), sample};
}

/// Random dense complex amplitudes (no smoothness, for algebraic identities).
inline WaveFunction random_rough_state(std::mt19937_64& rng, const GridTopology& topo) {
    std::vector<cplx> a(static_cast<size_t>(topo.n_points()));
    for (auto& v : a) v = random_coefficient(rng);
    return WaveFunction(topo, std::move(a));
}

}  // namespace uqr::testing
