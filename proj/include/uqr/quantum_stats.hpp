#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "uqr/errors.hpp"
#include "uqr/grid.hpp"
#include "uqr/operators.hpp"

namespace uqr {

struct StatOptions {
    DomainCheckOptions domain;
    double norm_tol = kNormTol;   // |norm - 1| allowed on input states
    double herm_tol = 1e-8;       // imaginary-residual warning threshold (relative)
};

namespace detail {

inline void require_normalized(const WaveFunction& psi, double norm_tol) {
    const double n = norm(psi);
    if (std::abs(n - 1.0) > norm_tol)
        throw NotNormalizedError("state must be unit-normalized (norm = " + std::to_string(n) +
                                 "); normalize() it first");
}

inline void require_in_domain(const OperatorSpec& A, const ResampleableState& state,
                              const StatOptions& opts) {
    DomainReport r = domain_check(A, state, opts.domain);
    if (!r.yes())
        throw InapplicableError("state is not in the domain of '" + A.label() + "'", std::move(r));
}

/// Re <psi, A psi> together with the imaginary residual (the Hermiticity
/// defect signal; large values mean the operator is not acting Hermitian
/// on this state).
struct Mean {
    double value = 0.0;
    double imag_residual = 0.0;
};

inline Mean mean_of(const OperatorSpec& A, const WaveFunction& psi) {
    const cplx e = inner_product(psi, apply(A, psi));
    return Mean{e.real(), std::abs(e.imag())};
}

/// (A - <A>) psi with <A> = Re <psi, A psi>.
inline WaveFunction centered_apply(const OperatorSpec& A, const WaveFunction& psi, double mean) {
    WaveFunction u = apply(A, psi);
    for (int k = 0; k < psi.topology.n_points(); ++k)
        u.amplitudes[static_cast<size_t>(k)] -= mean * psi.amplitudes[static_cast<size_t>(k)];
    return u;
}

}  // namespace detail

/**
 * All pairwise statistics of (A, B) on one state.
 *
 * delta_* are computed as ||(A - <A>) psi||, which only needs A psi — not
 * A^2 psi — so they exist on all of D(A). covariance and imag_cross are the
 * real and imaginary parts of <(A - <A>) psi, (B - <B>) psi>, valid on
 * D(A) n D(B). commutator_expectation = i<[A,B]> is present only when the
 * composite domain checks for AB and BA both pass.
 */
struct StatReport {
    double mean_a = 0.0;
    double mean_b = 0.0;
    double delta_a = 0.0;
    double delta_b = 0.0;
    double covariance = 0.0;
    double imag_cross = 0.0;
    std::optional<double> commutator_expectation;

    double mean_imag_residual_a = 0.0;
    double mean_imag_residual_b = 0.0;
    std::vector<std::string> warnings;
};

/// Re <psi, A psi>, gated on psi in D(A) and unit norm.
inline double expectation(const OperatorSpec& A, const ResampleableState& state,
                          const StatOptions& opts = {}) {
    detail::require_normalized(state.wf, opts.norm_tol);
    detail::require_in_domain(A, state, opts);
    return detail::mean_of(A, state.wf).value;
}

/// ||(A - <A>) psi||. Exists on all of D(A); never computed via <A^2>.
inline double uncertainty(const OperatorSpec& A, const ResampleableState& state,
                          const StatOptions& opts = {}) {
    detail::require_normalized(state.wf, opts.norm_tol);
    detail::require_in_domain(A, state, opts);
    const auto mean = detail::mean_of(A, state.wf);
    return norm(detail::centered_apply(A, state.wf, mean.value));
}

/// Re <(A - <A>) psi, (B - <B>) psi>; symmetric in A and B.
inline double covariance(const OperatorSpec& A, const OperatorSpec& B,
                         const ResampleableState& state, const StatOptions& opts = {}) {
    detail::require_normalized(state.wf, opts.norm_tol);
    detail::require_in_domain(A, state, opts);
    detail::require_in_domain(B, state, opts);
    const auto ma = detail::mean_of(A, state.wf);
    const auto mb = detail::mean_of(B, state.wf);
    return inner_product(detail::centered_apply(A, state.wf, ma.value),
                         detail::centered_apply(B, state.wf, mb.value))
        .real();
}

/// Im <(A - <A>) psi, (B - <B>) psi> = Im <A psi, B psi>; antisymmetric.
inline double imag_cross(const OperatorSpec& A, const OperatorSpec& B,
                         const ResampleableState& state, const StatOptions& opts = {}) {
    detail::require_normalized(state.wf, opts.norm_tol);
    detail::require_in_domain(A, state, opts);
    detail::require_in_domain(B, state, opts);
    const auto ma = detail::mean_of(A, state.wf);
    const auto mb = detail::mean_of(B, state.wf);
    return inner_product(detail::centered_apply(A, state.wf, ma.value),
                         detail::centered_apply(B, state.wf, mb.value))
        .imag();
}

/**
 * i <psi, (AB - BA) psi>, a real number for Hermitian A, B. Gated on the
 * composite domain checks: if psi fails D(AB) or D(BA), this throws
 * InapplicableError carrying the failing report — it does not return a
 * number that the algebra cannot support.
 */
inline double commutator_expectation(const OperatorSpec& A, const OperatorSpec& B,
                                     const ResampleableState& state, const StatOptions& opts = {}) {
    detail::require_normalized(state.wf, opts.norm_tol);
    const auto [ab, ba] = composite_domain_check(A, B, state, opts.domain);
    if (!ab.yes())
        throw InapplicableError("state is not in D(" + A.label() + " " + B.label() + ")", ab);
    if (!ba.yes())
        throw InapplicableError("state is not in D(" + B.label() + " " + A.label() + ")", ba);
    const WaveFunction ab_psi = apply(A, apply(B, state.wf));
    const WaveFunction ba_psi = apply(B, apply(A, state.wf));
    const cplx z = inner_product(state.wf, ab_psi) - inner_product(state.wf, ba_psi);
    return (cplx(0.0, 1.0) * z).real();
}

/**
 * One-pass computation of the full StatReport. Each operator's domain is
 * checked once; the commutator expectation is attached only when both
 * composite checks pass (the pair of failing reports is otherwise
 * recoverable via composite_domain_check).
 */
inline StatReport compute_stats(const OperatorSpec& A, const OperatorSpec& B,
                                const ResampleableState& state, const StatOptions& opts = {},
                                bool try_commutator = true) {
    detail::require_normalized(state.wf, opts.norm_tol);
    detail::require_in_domain(A, state, opts);
    detail::require_in_domain(B, state, opts);

    StatReport out;
    const auto ma = detail::mean_of(A, state.wf);
    const auto mb = detail::mean_of(B, state.wf);
    out.mean_a = ma.value;
    out.mean_b = mb.value;
    out.mean_imag_residual_a = ma.imag_residual;
    out.mean_imag_residual_b = mb.imag_residual;

    const WaveFunction ua = detail::centered_apply(A, state.wf, ma.value);
    const WaveFunction ub = detail::centered_apply(B, state.wf, mb.value);
    out.delta_a = norm(ua);
    out.delta_b = norm(ub);
    const cplx cross = inner_product(ua, ub);
    out.covariance = cross.real();
    out.imag_cross = cross.imag();

    const double scale_a = std::max(1.0, std::abs(ma.value));
    const double scale_b = std::max(1.0, std::abs(mb.value));
    if (ma.imag_residual > opts.herm_tol * scale_a)
        out.warnings.push_back("<" + A.label() + "> has imaginary residual " +
                               std::to_string(ma.imag_residual) +
                               "; operator may not act Hermitian on this state");
    if (mb.imag_residual > opts.herm_tol * scale_b)
        out.warnings.push_back("<" + B.label() + "> has imaginary residual " +
                               std::to_string(mb.imag_residual) +
                               "; operator may not act Hermitian on this state");

    if (try_commutator) {
        const auto [ab, ba] = composite_domain_check(A, B, state, opts.domain);
        if (ab.yes() && ba.yes()) {
            const WaveFunction ab_psi = apply(A, apply(B, state.wf));
            const WaveFunction ba_psi = apply(B, apply(A, state.wf));
            const cplx z = inner_product(state.wf, ab_psi) - inner_product(state.wf, ba_psi);
            out.commutator_expectation = (cplx(0.0, 1.0) * z).real();
        }
    }
    return out;
}

}  // namespace uqr
