#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "uqr/errors.hpp"
#include "uqr/grid.hpp"

namespace uqr {

enum class OperatorKind { Position, Momentum, Angle, AngularMomentum, MultiplyByFunction, DenseMatrix };

inline bool is_derivative_kind(OperatorKind k) {
    return k == OperatorKind::Momentum || k == OperatorKind::AngularMomentum;
}

/**
 * Symbolic descriptor of an observable.
 *
 * Position        multiply by x            (line grids)
 * Momentum        (hbar/i) d/dx            (line grids)
 * Angle           multiply by phi          (circle grids, phi in [0, 2 pi])
 * AngularMomentum (hbar/i) d/dphi          (circle grids)
 * MultiplyByFunction  multiply by f(coordinate), any grid
 * DenseMatrix     explicit n x n complex matrix tied to one grid
 *
 * Derivatives use second-order central differences with one-sided
 * second-order stencils at the first and last sample. Nothing here checks
 * domain membership; apply() is mechanical and domain_check() is the
 * gatekeeper.
 */
class OperatorSpec {
public:
    static OperatorSpec position(double hbar = 1.0) {
        return OperatorSpec(OperatorKind::Position, hbar, "x");
    }
    static OperatorSpec momentum(double hbar = 1.0) {
        return OperatorSpec(OperatorKind::Momentum, hbar, "p");
    }
    static OperatorSpec angle(double hbar = 1.0) {
        return OperatorSpec(OperatorKind::Angle, hbar, "phi");
    }
    static OperatorSpec angular_momentum(double hbar = 1.0) {
        return OperatorSpec(OperatorKind::AngularMomentum, hbar, "Lz");
    }

    static OperatorSpec multiply_by(std::function<double(double)> f, std::string label = "f",
                                    double hbar = 1.0) {
        OperatorSpec op(OperatorKind::MultiplyByFunction, hbar, std::move(label));
        op.function_ = std::move(f);
        return op;
    }

    /// Multiplication operator given as samples on a specific grid. Off-grid
    /// values (needed when the state is refined) come from linear
    /// interpolation between the original samples.
    static OperatorSpec multiply_by_samples(std::vector<double> samples, const GridTopology& topo,
                                            std::string label = "f", double hbar = 1.0) {
        if (static_cast<int>(samples.size()) != topo.n_points())
            throw StructuralError("multiply_by_samples: sample count does not match grid");
        auto data = std::make_shared<const std::vector<double>>(std::move(samples));
        GridTopology source = topo;
        return multiply_by(
            [data, source](double x) {
                const double h = source.step();
                double u = (x - source.x_min()) / h;
                const int n = source.n_points();
                if (u <= 0.0) return (*data)[0];
                if (u >= n - 1.0) return (*data)[static_cast<size_t>(n - 1)];
                const int j = std::min(static_cast<int>(u), n - 2);
                const double t = u - j;
                return (1.0 - t) * (*data)[static_cast<size_t>(j)] +
                       t * (*data)[static_cast<size_t>(j + 1)];
            },
            std::move(label), hbar);
    }

    static OperatorSpec dense(std::vector<cplx> row_major, const GridTopology& topo,
                              std::string label = "M", double hbar = 1.0) {
        const size_t n = static_cast<size_t>(topo.n_points());
        if (row_major.size() != n * n)
            throw StructuralError("dense: matrix must be n_points x n_points");
        OperatorSpec op(OperatorKind::DenseMatrix, hbar, std::move(label));
        op.matrix_ = std::make_shared<const std::vector<cplx>>(std::move(row_major));
        op.matrix_topology_ = std::make_shared<const GridTopology>(topo);
        return op;
    }

    OperatorKind kind() const { return kind_; }
    double hbar() const { return hbar_; }
    const std::string& label() const { return label_; }

    bool compatible_with(const GridTopology& topo) const {
        switch (kind_) {
            case OperatorKind::Position:
            case OperatorKind::Momentum: return topo.kind() == GridKind::Line;
            case OperatorKind::Angle:
            case OperatorKind::AngularMomentum: return topo.kind() == GridKind::Circle;
            case OperatorKind::MultiplyByFunction: return true;
            case OperatorKind::DenseMatrix: return *matrix_topology_ == topo;
        }
        return false;
    }

    const std::function<double(double)>& function() const { return function_; }
    const std::vector<cplx>& matrix() const { return *matrix_; }
    const GridTopology& matrix_topology() const { return *matrix_topology_; }

private:
    OperatorSpec(OperatorKind kind, double hbar, std::string label)
        : kind_(kind), hbar_(hbar), label_(std::move(label)) {
        if (!(hbar_ > 0.0)) throw StructuralError("OperatorSpec: hbar must be > 0");
    }

    OperatorKind kind_;
    double hbar_;
    std::string label_;
    std::function<double(double)> function_;                    // MultiplyByFunction
    std::shared_ptr<const std::vector<cplx>> matrix_;           // DenseMatrix
    std::shared_ptr<const GridTopology> matrix_topology_;       // DenseMatrix
};

namespace detail {

/// d/dx by second-order stencils: central in the interior, one-sided at ends.
inline std::vector<cplx> first_derivative(const WaveFunction& psi) {
    const int n = psi.topology.n_points();
    const double h = psi.topology.step();
    const auto& a = psi.amplitudes;
    std::vector<cplx> d(static_cast<size_t>(n));
    d[0] = (-3.0 * a[0] + 4.0 * a[1] - a[2]) / (2.0 * h);
    for (int k = 1; k < n - 1; ++k)
        d[static_cast<size_t>(k)] =
            (a[static_cast<size_t>(k + 1)] - a[static_cast<size_t>(k - 1)]) / (2.0 * h);
    d[static_cast<size_t>(n - 1)] =
        (3.0 * a[static_cast<size_t>(n - 1)] - 4.0 * a[static_cast<size_t>(n - 2)] +
         a[static_cast<size_t>(n - 3)]) /
        (2.0 * h);
    return d;
}

}  // namespace detail

/// A psi -> A psi, mechanically; no domain verdict is implied.
inline WaveFunction apply(const OperatorSpec& A, const WaveFunction& psi) {
    if (!A.compatible_with(psi.topology))
        throw StructuralError("apply: operator '" + A.label() + "' is incompatible with " +
                              psi.topology.describe());
    const int n = psi.topology.n_points();
    std::vector<cplx> out(static_cast<size_t>(n));
    switch (A.kind()) {
        case OperatorKind::Position:
        case OperatorKind::Angle:
            for (int k = 0; k < n; ++k)
                out[static_cast<size_t>(k)] =
                    psi.topology.coordinate(k) * psi.amplitudes[static_cast<size_t>(k)];
            break;
        case OperatorKind::MultiplyByFunction:
            for (int k = 0; k < n; ++k)
                out[static_cast<size_t>(k)] =
                    A.function()(psi.topology.coordinate(k)) * psi.amplitudes[static_cast<size_t>(k)];
            break;
        case OperatorKind::Momentum:
        case OperatorKind::AngularMomentum: {
            out = detail::first_derivative(psi);
            const cplx scale = A.hbar() / cplx(0.0, 1.0);  // hbar/i
            for (cplx& v : out) v *= scale;
            break;
        }
        case OperatorKind::DenseMatrix: {
            const auto& m = A.matrix();
            for (int r = 0; r < n; ++r) {
                cplx acc = 0.0;
                const size_t row = static_cast<size_t>(r) * static_cast<size_t>(n);
                for (int c = 0; c < n; ++c)
                    acc += m[row + static_cast<size_t>(c)] * psi.amplitudes[static_cast<size_t>(c)];
                out[static_cast<size_t>(r)] = acc;
            }
            break;
        }
    }
    return WaveFunction(psi.topology, std::move(out));
}

// ---------------------------------------------------------------------------
// Domain diagnostics
// ---------------------------------------------------------------------------

enum class DomainVerdict { Yes, No, Marginal };

enum class DomainReason { OK, BoundaryConditionViolated, DerivativeNotSquareIntegrable, NotDifferentiable };

inline const char* to_string(DomainVerdict v) {
    switch (v) {
        case DomainVerdict::Yes: return "yes";
        case DomainVerdict::No: return "no";
        case DomainVerdict::Marginal: return "marginal";
    }
    return "?";
}

inline const char* to_string(DomainReason r) {
    switch (r) {
        case DomainReason::OK: return "ok";
        case DomainReason::BoundaryConditionViolated: return "boundary-condition-violated";
        case DomainReason::DerivativeNotSquareIntegrable: return "derivative-not-square-integrable";
        case DomainReason::NotDifferentiable: return "not-differentiable";
    }
    return "?";
}

/**
 * Verdict on whether a state lies in the domain of an operator, with the
 * numerical evidence that produced it.
 *
 * For derivative operators on circle grids the endpoint magnitudes must
 * match (the Hermiticity-preserving boundary condition allows an arbitrary
 * relative phase but not a magnitude jump). For all resampleable states,
 * ||A psi|| is tracked across grid doublings; a sequence whose squared
 * increments stop shrinking is flagged as divergent (image not square
 * integrable).
 */
struct DomainReport {
    DomainVerdict in_domain = DomainVerdict::Yes;
    DomainReason reason = DomainReason::OK;
    double boundary_magnitude_mismatch = 0.0;  // | |psi(2pi)| - |psi(0)| |, circle only
    std::vector<std::pair<int, double>> derivative_norm_sequence;  // (n_points, ||A psi||)
    bool divergence_flag = false;
    std::string checked;  // human-readable "operator on state" tag

    bool yes() const { return in_domain == DomainVerdict::Yes; }
};

/// Thrown by gated statistics when the state fails a domain check.
class InapplicableError : public std::runtime_error {
public:
    InapplicableError(std::string what, DomainReport evidence)
        : std::runtime_error(std::move(what)), report(std::move(evidence)) {}
    DomainReport report;
};

struct DomainCheckOptions {
    int refinements = 4;           // grid doublings examined
    double divergence_ratio = 0.9; // successive ||A psi||^2 increments must shrink to this fraction
    double boundary_tol_factor = 10.0;  // mismatch threshold = factor * h
    double increment_floor_rel = 1e-10; // increments below floor count as converged
    double settle_rel = 1e-3;  // increments this small relative to the value also count as settled
};

namespace detail {

struct SequenceAnalysis {
    bool converged = false;
    bool diverged = false;
};

inline SequenceAnalysis analyze_norm_sequence(const std::vector<double>& norms,
                                              const DomainCheckOptions& opts) {
    // Work on ||A psi||^2; a convergent discretization produces increments
    // shrinking roughly 4x per doubling, a log-divergent image produces
    // near-constant increments.
    std::vector<double> s(norms.size());
    double s_max = 0.0;
    for (size_t i = 0; i < norms.size(); ++i) {
        s[i] = norms[i] * norms[i];
        s_max = std::max(s_max, s[i]);
    }
    const double floor = opts.increment_floor_rel * std::max(1.0, s_max);
    const double settled = opts.settle_rel * std::max(1.0, s_max);
    if (s.size() < 3) return {true, false};

    std::vector<double> inc(s.size() - 1);
    for (size_t i = 0; i + 1 < s.size(); ++i) inc[i] = s[i + 1] - s[i];

    size_t bad = 0;
    bool last_bad = false;
    for (size_t i = 0; i + 1 < inc.size(); ++i) {
        // An increment is acceptable when it shrinks geometrically, or when
        // it is negligible in absolute terms or against the value scale
        // (a genuine log-divergence moves by a visible fraction of the value
        // at every doubling; interpolation wobble does not).
        const bool small_enough =
            std::abs(inc[i + 1]) <= floor || std::abs(inc[i + 1]) <= settled ||
            std::abs(inc[i + 1]) <= opts.divergence_ratio * std::abs(inc[i]);
        if (!small_enough) {
            ++bad;
            if (i + 2 == inc.size()) last_bad = true;
        }
    }
    if (bad == 0) return {true, false};
    if (last_bad || bad >= 2) return {false, true};
    return {false, false};  // marginal: one mid-sequence wobble
}

}  // namespace detail

/**
 * Diagnostic domain membership check. Always returns a report; never throws
 * for in-domain questions (structural misuse still throws).
 */
inline DomainReport domain_check(const OperatorSpec& A, const ResampleableState& state,
                                 const DomainCheckOptions& opts = {}) {
    if (opts.refinements < 2)
        throw StructuralError("domain_check: need at least 2 refinements");
    if (!A.compatible_with(state.wf.topology))
        throw StructuralError("domain_check: operator '" + A.label() + "' is incompatible with " +
                              state.wf.topology.describe());

    DomainReport report;
    report.checked = A.label();

    const GridTopology& base = state.wf.topology;

    if (base.kind() == GridKind::Circle && is_derivative_kind(A.kind())) {
        const double m0 = std::abs(state.wf.front());
        const double m1 = std::abs(state.wf.back());
        report.boundary_magnitude_mismatch = std::abs(m1 - m0);
        if (report.boundary_magnitude_mismatch > opts.boundary_tol_factor * base.step()) {
            report.in_domain = DomainVerdict::No;
            report.reason = DomainReason::BoundaryConditionViolated;
        }
    }

    // ||A psi|| across grid doublings. DenseMatrix operators are pinned to a
    // single grid, so only the base resolution is recorded for them.
    const int levels = (A.kind() == OperatorKind::DenseMatrix) ? 1 : opts.refinements + 1;
    std::vector<double> norms;
    norms.reserve(static_cast<size_t>(levels));
    for (int j = 0; j < levels; ++j) {
        const GridTopology topo = base.refined(1 << j);
        const WaveFunction psi_j = state.at(topo);
        norms.push_back(norm(apply(A, psi_j)));
        report.derivative_norm_sequence.emplace_back(topo.n_points(), norms.back());
    }

    if (levels > 1) {
        const auto seq = detail::analyze_norm_sequence(norms, opts);
        if (seq.diverged) {
            report.divergence_flag = true;
            if (report.in_domain == DomainVerdict::Yes) {
                report.in_domain = DomainVerdict::No;
                report.reason = DomainReason::DerivativeNotSquareIntegrable;
            }
        } else if (!seq.converged && report.in_domain == DomainVerdict::Yes) {
            report.in_domain = DomainVerdict::Marginal;
        }
    }
    return report;
}

/// The state A psi, resampleable by re-applying A at any resolution.
inline ResampleableState applied_state(const OperatorSpec& A, const ResampleableState& state) {
    Resampler inner = state.resample;
    WaveFunction base = apply(A, state.wf);
    return ResampleableState{std::move(base), [A, inner](const GridTopology& topo) {
                                 return apply(A, inner(topo));
                             }};
}

/**
 * Checks membership in D(A B): first psi in D(B), then B psi in D(A).
 * The returned report is the first failing stage (or the outer stage when
 * both pass), tagged with what was checked.
 */
inline DomainReport composite_domain_check_one(const OperatorSpec& A, const OperatorSpec& B,
                                               const ResampleableState& state,
                                               const DomainCheckOptions& opts = {}) {
    DomainReport inner = domain_check(B, state, opts);
    inner.checked = B.label() + " on psi";
    if (inner.in_domain == DomainVerdict::No) return inner;

    DomainReport outer = domain_check(A, applied_state(B, state), opts);
    outer.checked = A.label() + " on (" + B.label() + " psi)";
    if (outer.in_domain == DomainVerdict::No) return outer;

    // Both stages pass individually; composite verdict is the weaker one.
    if (inner.in_domain == DomainVerdict::Marginal) return inner;
    return outer;
}

/// Reports for (AB, BA), in that order.
inline std::pair<DomainReport, DomainReport> composite_domain_check(
    const OperatorSpec& A, const OperatorSpec& B, const ResampleableState& state,
    const DomainCheckOptions& opts = {}) {
    return {composite_domain_check_one(A, B, state, opts),
            composite_domain_check_one(B, A, state, opts)};
}

/// <chi, A psi> - <A chi, psi>; zero for Hermitian action, and for the
/// circle derivative equal to (hbar/i)[chi*(2pi) psi(2pi) - chi*(0) psi(0)]
/// up to discretization error.
inline cplx hermiticity_defect(const OperatorSpec& A, const WaveFunction& chi,
                               const WaveFunction& psi) {
    return inner_product(chi, apply(A, psi)) - inner_product(apply(A, chi), psi);
}

}  // namespace uqr
