#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "uqr/errors.hpp"

namespace uqr {

using cplx = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Default acceptance window for |norm - 1| after normalize().
inline constexpr double kNormTol = 1e-9;

enum class GridKind { Line, Circle };

/**
 * Uniform discretization of a 1-D configuration space.
 *
 * Line:   n_points samples of [x_min, x_max], both ends included.
 * Circle: n_points samples phi_k = 2*pi*k/(n_points-1), k = 0..n_points-1.
 *         Both phi = 0 and phi = 2*pi are stored as distinct samples; the
 *         grid deliberately does NOT identify them, so endpoint values can
 *         be inspected independently (boundary-condition diagnostics need
 *         psi(0) and psi(2*pi) separately).
 */
class GridTopology {
public:
    static GridTopology line(double x_min, double x_max, int n_points) {
        if (!(x_min < x_max))
            throw StructuralError("GridTopology::line: x_min must be < x_max");
        if (n_points < 3)
            throw StructuralError("GridTopology::line: need n_points >= 3");
        return GridTopology(GridKind::Line, x_min, x_max, n_points);
    }

    static GridTopology circle(int n_points) {
        if (n_points < 3)
            throw StructuralError("GridTopology::circle: need n_points >= 3");
        return GridTopology(GridKind::Circle, 0.0, kTwoPi, n_points);
    }

    GridKind kind() const { return kind_; }
    double x_min() const { return x_min_; }
    double x_max() const { return x_max_; }
    int n_points() const { return n_; }

    double step() const { return (x_max_ - x_min_) / static_cast<double>(n_ - 1); }

    double coordinate(int k) const { return x_min_ + static_cast<double>(k) * step(); }

    std::vector<double> coordinates() const {
        std::vector<double> xs(static_cast<size_t>(n_));
        for (int k = 0; k < n_; ++k) xs[static_cast<size_t>(k)] = coordinate(k);
        return xs;
    }

    /// Composite-trapezoid quadrature weight of sample k.
    double weight(int k) const {
        const double h = step();
        return (k == 0 || k == n_ - 1) ? 0.5 * h : h;
    }

    /// Same span, (n-1)*factor + 1 points. Existing nodes stay on the grid.
    GridTopology refined(int factor) const {
        if (factor < 1) throw StructuralError("GridTopology::refined: factor must be >= 1");
        return GridTopology(kind_, x_min_, x_max_, (n_ - 1) * factor + 1);
    }

    bool operator==(const GridTopology& o) const {
        return kind_ == o.kind_ && x_min_ == o.x_min_ && x_max_ == o.x_max_ && n_ == o.n_;
    }
    bool operator!=(const GridTopology& o) const { return !(*this == o); }

    std::string describe() const {
        if (kind_ == GridKind::Circle)
            return "circle(n=" + std::to_string(n_) + ")";
        return "line[" + std::to_string(x_min_) + ", " + std::to_string(x_max_) +
               "](n=" + std::to_string(n_) + ")";
    }

private:
    GridTopology(GridKind kind, double x_min, double x_max, int n)
        : kind_(kind), x_min_(x_min), x_max_(x_max), n_(n) {}

    GridKind kind_;
    double x_min_;
    double x_max_;
    int n_;
};

/// Complex amplitudes sampled on a GridTopology. Immutable value type.
struct WaveFunction {
    WaveFunction(GridTopology topo, std::vector<cplx> amps)
        : topology(std::move(topo)), amplitudes(std::move(amps)) {
        if (static_cast<int>(amplitudes.size()) != topology.n_points())
            throw StructuralError("WaveFunction: amplitude count does not match grid");
        for (const cplx& a : amplitudes)
            if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
                throw StructuralError("WaveFunction: non-finite amplitude");
    }

    GridTopology topology;
    std::vector<cplx> amplitudes;

    const cplx& front() const { return amplitudes.front(); }
    const cplx& back() const { return amplitudes.back(); }
};

/**
 * <chi, psi> by composite trapezoid quadrature; conjugate-linear in the
 * FIRST argument (physics convention), so <chi, psi> = sum w_k chi_k* psi_k.
 */
inline cplx inner_product(const WaveFunction& chi, const WaveFunction& psi) {
    if (chi.topology != psi.topology)
        throw StructuralError("inner_product: topology mismatch");
    const int n = psi.topology.n_points();
    cplx acc = 0.0;
    for (int k = 0; k < n; ++k) {
        const size_t i = static_cast<size_t>(k);
        acc += psi.topology.weight(k) * std::conj(chi.amplitudes[i]) * psi.amplitudes[i];
    }
    return acc;
}

inline double norm_squared(const WaveFunction& psi) {
    const int n = psi.topology.n_points();
    double acc = 0.0;
    for (int k = 0; k < n; ++k)
        acc += psi.topology.weight(k) * std::norm(psi.amplitudes[static_cast<size_t>(k)]);
    return acc;
}

inline double norm(const WaveFunction& psi) { return std::sqrt(norm_squared(psi)); }

inline WaveFunction normalize(const WaveFunction& psi) {
    const double nrm = norm(psi);
    if (!(nrm > 0.0))
        throw DegenerateStateError("normalize: state has zero norm");
    std::vector<cplx> scaled = psi.amplitudes;
    for (cplx& a : scaled) a /= nrm;
    return WaveFunction(psi.topology, std::move(scaled));
}

/// Produces the same state sampled on another grid of the same kind/span.
using Resampler = std::function<WaveFunction(const GridTopology&)>;

/**
 * A wavefunction bundled with the rule for reproducing it at any resolution.
 * States realized from analytic recipes resample exactly; states known only
 * through their samples fall back to local cubic interpolation.
 */
struct ResampleableState {
    WaveFunction wf;
    Resampler resample;

    WaveFunction at(const GridTopology& topo) const {
        if (topo == wf.topology) return wf;
        return resample(topo);
    }
};

namespace detail {

/// Catmull-Rom interpolation of uniformly sampled values, clamped at the ends.
inline cplx cubic_sample(const std::vector<cplx>& a, const GridTopology& topo, double x) {
    const int n = topo.n_points();
    const double h = topo.step();
    double u = (x - topo.x_min()) / h;
    if (u <= 0.0) return a.front();
    if (u >= static_cast<double>(n - 1)) return a.back();
    int j = static_cast<int>(std::floor(u));
    if (j > n - 2) j = n - 2;
    const double t = u - static_cast<double>(j);
    auto at = [&](int k) {
        if (k < 0) k = 0;
        if (k > n - 1) k = n - 1;
        return a[static_cast<size_t>(k)];
    };
    const cplx p0 = at(j - 1), p1 = at(j), p2 = at(j + 1), p3 = at(j + 2);
    return 0.5 * ((2.0 * p1) + (-p0 + p2) * t + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * (t * t) +
                  (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * (t * t * t));
}

}  // namespace detail

inline Resampler interpolating_resampler(WaveFunction source) {
    return [src = std::move(source)](const GridTopology& topo) {
        if (topo.kind() != src.topology.kind() || topo.x_min() != src.topology.x_min() ||
            topo.x_max() != src.topology.x_max())
            throw StructuralError("interpolating_resampler: target grid spans a different domain");
        std::vector<cplx> out(static_cast<size_t>(topo.n_points()));
        for (int k = 0; k < topo.n_points(); ++k)
            out[static_cast<size_t>(k)] = detail::cubic_sample(src.amplitudes, src.topology, topo.coordinate(k));
        return WaveFunction(topo, std::move(out));
    };
}

inline ResampleableState make_resampleable(WaveFunction wf) {
    Resampler r = interpolating_resampler(wf);
    return ResampleableState{std::move(wf), std::move(r)};
}

inline ResampleableState refine(const ResampleableState& state, int factor) {
    if (factor < 2) throw StructuralError("refine: factor must be >= 2");
    const GridTopology finer = state.wf.topology.refined(factor);
    return ResampleableState{state.at(finer), state.resample};
}

}  // namespace uqr
