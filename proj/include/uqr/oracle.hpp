#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "uqr/errors.hpp"
#include "uqr/grid.hpp"
#include "uqr/operators.hpp"
#include "uqr/quantum_stats.hpp"

namespace uqr {

inline constexpr int kOracleDefaultCap = 2049;

/**
 * Explicit dense-matrix representation of an operator on one grid, built by
 * applying the operator to every basis vector. Everything downstream is
 * plain dense algebra: an independent route to the same statistics, used as
 * ground truth on small instances.
 */
struct DenseOperator {
    GridTopology topology;
    std::vector<cplx> matrix;  // row-major, n x n

    int n() const { return topology.n_points(); }

    const cplx& at(int r, int c) const {
        return matrix[static_cast<size_t>(r) * static_cast<size_t>(n()) + static_cast<size_t>(c)];
    }

    std::vector<cplx> apply_raw(const std::vector<cplx>& v) const {
        const int nn = n();
        std::vector<cplx> out(static_cast<size_t>(nn));
        for (int r = 0; r < nn; ++r) {
            cplx acc = 0.0;
            const size_t row = static_cast<size_t>(r) * static_cast<size_t>(nn);
            for (int c = 0; c < nn; ++c) acc += matrix[row + static_cast<size_t>(c)] * v[static_cast<size_t>(c)];
            out[static_cast<size_t>(r)] = acc;
        }
        return out;
    }

    WaveFunction apply(const WaveFunction& psi) const {
        if (psi.topology != topology) throw StructuralError("DenseOperator: topology mismatch");
        return WaveFunction(topology, apply_raw(psi.amplitudes));
    }
};

inline DenseOperator materialize(const OperatorSpec& A, const GridTopology& topo,
                                 int cap = kOracleDefaultCap) {
    if (topo.n_points() > cap)
        throw CapExceededError("materialize: " + std::to_string(topo.n_points()) +
                               " points exceeds the dense cap of " + std::to_string(cap));
    if (!A.compatible_with(topo))
        throw StructuralError("materialize: operator '" + A.label() + "' is incompatible with " +
                              topo.describe());
    const int n = topo.n_points();
    DenseOperator op{topo, std::vector<cplx>(static_cast<size_t>(n) * static_cast<size_t>(n))};
    std::vector<cplx> basis(static_cast<size_t>(n), cplx(0.0, 0.0));
    for (int c = 0; c < n; ++c) {
        basis[static_cast<size_t>(c)] = 1.0;
        const WaveFunction col = uqr::apply(A, WaveFunction(topo, basis));
        for (int r = 0; r < n; ++r)
            op.matrix[static_cast<size_t>(r) * static_cast<size_t>(n) + static_cast<size_t>(c)] =
                col.amplitudes[static_cast<size_t>(r)];
        basis[static_cast<size_t>(c)] = 0.0;
    }
    return op;
}

namespace detail {

inline cplx weighted_dot(const GridTopology& topo, const std::vector<cplx>& u,
                         const std::vector<cplx>& v) {
    cplx acc = 0.0;
    for (int k = 0; k < topo.n_points(); ++k) {
        const size_t i = static_cast<size_t>(k);
        acc += topo.weight(k) * std::conj(u[i]) * v[i];
    }
    return acc;
}

}  // namespace detail

/**
 * StatReport computed entirely through dense matrices and explicit weighted
 * sums. Mechanical: no domain gating — the caller compares it against the
 * gated pipeline, which is exactly the point of having two routes.
 */
inline StatReport oracle_stat_report(const OperatorSpec& A, const OperatorSpec& B,
                                     const WaveFunction& psi, int cap = kOracleDefaultCap) {
    const GridTopology& topo = psi.topology;
    const DenseOperator ma = materialize(A, topo, cap);
    const DenseOperator mb = materialize(B, topo, cap);

    const std::vector<cplx>& v = psi.amplitudes;
    std::vector<cplx> av = ma.apply_raw(v);
    std::vector<cplx> bv = mb.apply_raw(v);

    StatReport out;
    const cplx ea = detail::weighted_dot(topo, v, av);
    const cplx eb = detail::weighted_dot(topo, v, bv);
    out.mean_a = ea.real();
    out.mean_b = eb.real();
    out.mean_imag_residual_a = std::abs(ea.imag());
    out.mean_imag_residual_b = std::abs(eb.imag());

    std::vector<cplx> ua = av, ub = bv;
    for (int k = 0; k < topo.n_points(); ++k) {
        const size_t i = static_cast<size_t>(k);
        ua[i] -= out.mean_a * v[i];
        ub[i] -= out.mean_b * v[i];
    }
    out.delta_a = std::sqrt(std::max(0.0, detail::weighted_dot(topo, ua, ua).real()));
    out.delta_b = std::sqrt(std::max(0.0, detail::weighted_dot(topo, ub, ub).real()));
    const cplx cross = detail::weighted_dot(topo, ua, ub);
    out.covariance = cross.real();
    out.imag_cross = cross.imag();

    const std::vector<cplx> ab_v = ma.apply_raw(bv);
    const std::vector<cplx> ba_v = mb.apply_raw(av);
    std::vector<cplx> comm(ab_v.size());
    for (size_t i = 0; i < comm.size(); ++i) comm[i] = ab_v[i] - ba_v[i];
    out.commutator_expectation = (cplx(0.0, 1.0) * detail::weighted_dot(topo, v, comm)).real();
    return out;
}

}  // namespace uqr
