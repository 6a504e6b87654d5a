#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "uqr/errors.hpp"
#include "uqr/grid.hpp"
#include "uqr/operators.hpp"
#include "uqr/quantum_stats.hpp"

namespace uqr {

struct RelationOptions {
    StatOptions stats;
    double tol_c = 4.0;      // satisfied-with-margin tolerance: tol = tol_c * h^2 + tol_abs
    double tol_abs = 1e-10;
    double truncation_tol = 1e-12;  // |x| |psi|^2 allowed at a line-box edge
};

inline double tolerance_for_grid(const GridTopology& topo, const RelationOptions& opts) {
    const double h = topo.step();
    return opts.tol_c * h * h + opts.tol_abs;
}

/// One uncertainty bound: its value when applicable, otherwise the domain
/// evidence explaining why the bound may not be quoted for this state.
struct BoundReport {
    double value = 0.0;
    bool applies = false;
    std::optional<DomainReport> blocker;  // set when !applies
    bool satisfied = false;               // lhs >= value - tol (meaningful when applies)
    double margin = 0.0;                  // lhs - value

    static BoundReport applicable(double value, double lhs, double tol) {
        BoundReport b;
        b.value = value;
        b.applies = true;
        b.margin = lhs - value;
        b.satisfied = b.margin >= -tol;
        return b;
    }
    static BoundReport inapplicable(DomainReport evidence) {
        BoundReport b;
        b.applies = false;
        b.blocker = std::move(evidence);
        return b;
    }
};

/**
 * Evaluation of dA * dB against up to three lower bounds:
 *
 *   modified:   sqrt(covariance^2 + imag_cross^2)   — needs D(A) n D(B) only
 *   commutator: sqrt(covariance^2 + (i<[A,B]>)^2/4) — needs D(AB) n D(BA)
 *   standard:   |i<[A,B]>| / 2                      — needs D(AB) n D(BA)
 *
 * A bound whose domain requirements fail is reported inapplicable with the
 * failing DomainReport attached; its numeric value is never fabricated.
 */
struct RelationReport {
    StatReport stats;
    double lhs = 0.0;  // delta_a * delta_b
    BoundReport modified;
    std::optional<BoundReport> commutator_form;
    std::optional<BoundReport> standard;
    double tolerance_used = 0.0;

    bool any_applicable() const {
        return modified.applies || (commutator_form && commutator_form->applies) ||
               (standard && standard->applies);
    }
    bool all_applicable_satisfied() const {
        if (modified.applies && !modified.satisfied) return false;
        if (commutator_form && commutator_form->applies && !commutator_form->satisfied) return false;
        if (standard && standard->applies && !standard->satisfied) return false;
        return true;
    }
};

/// Covariance-augmented bound only; valid whenever both single-operator
/// domains hold. Throws InapplicableError if either fails.
inline RelationReport evaluate_modified(const OperatorSpec& A, const OperatorSpec& B,
                                        const ResampleableState& state,
                                        const RelationOptions& opts = {}) {
    RelationReport r;
    r.stats = compute_stats(A, B, state, opts.stats, /*try_commutator=*/false);
    r.lhs = r.stats.delta_a * r.stats.delta_b;
    r.tolerance_used = tolerance_for_grid(state.wf.topology, opts);
    const double bound = std::hypot(r.stats.covariance, r.stats.imag_cross);
    r.modified = BoundReport::applicable(bound, r.lhs, r.tolerance_used);
    return r;
}

/// Full evaluation: modified bound plus the commutator and standard bounds
/// when the composite domain checks allow them. When they do not, the
/// commutator/standard entries carry the failing evidence instead of
/// numbers.
inline RelationReport evaluate_commutator_form(const OperatorSpec& A, const OperatorSpec& B,
                                               const ResampleableState& state,
                                               const RelationOptions& opts = {}) {
    RelationReport r = evaluate_modified(A, B, state, opts);
    const auto [ab, ba] = composite_domain_check(A, B, state, opts.stats.domain);
    if (ab.yes() && ba.yes()) {
        const WaveFunction ab_psi = apply(A, apply(B, state.wf));
        const WaveFunction ba_psi = apply(B, apply(A, state.wf));
        const cplx z = inner_product(state.wf, ab_psi) - inner_product(state.wf, ba_psi);
        const double icomm = (cplx(0.0, 1.0) * z).real();
        r.stats.commutator_expectation = icomm;
        r.commutator_form = BoundReport::applicable(std::hypot(r.stats.covariance, 0.5 * icomm),
                                                    r.lhs, r.tolerance_used);
        r.standard = BoundReport::applicable(0.5 * std::abs(icomm), r.lhs, r.tolerance_used);
    } else {
        const DomainReport& evidence = ab.yes() ? ba : ab;
        r.commutator_form = BoundReport::inapplicable(evidence);
        r.standard = BoundReport::inapplicable(evidence);
    }
    return r;
}

/// (hbar/2) (1 - 2 pi |psi(2 pi)|^2): the closed-form value of
/// Im<phi psi, Lz psi> obtained from the endpoint sample alone.
inline double phi_lz_boundary_im(const ResampleableState& state, double hbar = 1.0) {
    if (state.wf.topology.kind() != GridKind::Circle)
        throw StructuralError("phi_lz_boundary_im: requires a circle state");
    return 0.5 * hbar * (1.0 - kTwoPi * std::norm(state.wf.back()));
}

/**
 * Angle / angular-momentum bound computed from the closed-form boundary
 * expression: sqrt(sigma^2 + (hbar/2)^2 (1 - 2 pi |psi(2 pi)|^2)^2).
 * The covariance still comes from quadrature; the imaginary cross term is
 * replaced by its endpoint formula.
 */
inline double phi_lz_bound(const ResampleableState& state, double hbar = 1.0,
                           const RelationOptions& opts = {}) {
    if (state.wf.topology.kind() != GridKind::Circle)
        throw StructuralError("phi_lz_bound: requires a circle state");
    const OperatorSpec phi = OperatorSpec::angle(hbar);
    const OperatorSpec lz = OperatorSpec::angular_momentum(hbar);
    const double sigma = covariance(phi, lz, state, opts.stats);
    return std::hypot(sigma, phi_lz_boundary_im(state, hbar));
}

/// Endpoint evaluation of the position/momentum boundary expression
/// together with a truncation-adequacy flag.
struct XpBoundaryTerm {
    double value = 0.0;         // (hbar/2) (1 - [x |psi|^2] at the box edges)
    double edge_density = 0.0;  // max |x| |psi|^2 over the two edges
    bool truncation_suspect = false;
};

inline XpBoundaryTerm xp_boundary_term(const ResampleableState& state, double hbar = 1.0,
                                       const RelationOptions& opts = {}) {
    const GridTopology& topo = state.wf.topology;
    if (topo.kind() != GridKind::Line)
        throw StructuralError("xp_boundary_term: requires a line state");
    detail::require_normalized(state.wf, opts.stats.norm_tol);
    detail::require_in_domain(OperatorSpec::position(hbar), state, opts.stats);
    detail::require_in_domain(OperatorSpec::momentum(hbar), state, opts.stats);

    const double lo = topo.x_min() * std::norm(state.wf.front());
    const double hi = topo.x_max() * std::norm(state.wf.back());
    XpBoundaryTerm out;
    out.value = 0.5 * hbar * (1.0 - (hi - lo));
    out.edge_density = std::max(std::abs(lo), std::abs(hi));
    out.truncation_suspect = out.edge_density > opts.truncation_tol;
    return out;
}

inline std::vector<double> default_lambda_grid() {
    // 41 points geometric over [1e-3, 1e3], plus their negatives and zero.
    std::vector<double> grid;
    grid.reserve(83);
    for (int k = 0; k <= 40; ++k) grid.push_back(std::pow(10.0, -3.0 + 0.15 * k));
    const size_t m = grid.size();
    for (size_t k = 0; k < m; ++k) grid.push_back(-grid[k]);
    grid.push_back(0.0);
    return grid;
}

inline std::vector<double> default_theta_grid() {
    std::vector<double> grid(16);
    for (int k = 0; k < 16; ++k) grid[static_cast<size_t>(k)] = kTwoPi * k / 16.0;
    return grid;
}

/**
 * Nonnegativity scan of the quadratic form q(lambda, theta) =
 * ||((A - <A>) + lambda e^{i theta} (B - <B>)) psi||^2, each value computed
 * as an explicit vector norm. Also checks, when dB > 0, that the exact
 * lambda-minimum at theta = pi/2 reproduces dA^2 - Im^2/dB^2.
 */
struct QuadraticFormReport {
    double worst_margin = 0.0;        // min over the grid (>= 0 up to rounding)
    double structure_residual = 0.0;  // |q(lambda*) - (dA^2 - Im^2/dB^2)|
    bool structure_checked = false;
};

inline QuadraticFormReport quadratic_form_check(const OperatorSpec& A, const OperatorSpec& B,
                                                const ResampleableState& state,
                                                const std::vector<double>& lambda_grid,
                                                const std::vector<double>& theta_grid,
                                                const RelationOptions& opts = {}) {
    detail::require_normalized(state.wf, opts.stats.norm_tol);
    detail::require_in_domain(A, state, opts.stats);
    detail::require_in_domain(B, state, opts.stats);

    const WaveFunction& psi = state.wf;
    const double ma = detail::mean_of(A, psi).value;
    const double mb = detail::mean_of(B, psi).value;
    const WaveFunction ua = detail::centered_apply(A, psi, ma);
    const WaveFunction ub = detail::centered_apply(B, psi, mb);
    const int n = psi.topology.n_points();

    auto form_value = [&](double lambda, double theta) {
        const cplx w = lambda * std::polar(1.0, theta);
        double acc = 0.0;
        for (int k = 0; k < n; ++k) {
            const size_t i = static_cast<size_t>(k);
            acc += psi.topology.weight(k) * std::norm(ua.amplitudes[i] + w * ub.amplitudes[i]);
        }
        return acc;
    };

    QuadraticFormReport out;
    out.worst_margin = std::numeric_limits<double>::infinity();
    for (double theta : theta_grid)
        for (double lambda : lambda_grid)
            out.worst_margin = std::min(out.worst_margin, form_value(lambda, theta));

    const double da2 = norm_squared(ua);
    const double db2 = norm_squared(ub);
    if (db2 > 1e-12 * std::max(1.0, da2)) {
        const double im = inner_product(ua, ub).imag();
        const double lambda_star = im / db2;
        const double predicted = da2 - im * im / db2;
        out.structure_residual = std::abs(form_value(lambda_star, 0.5 * std::numbers::pi) - predicted);
        out.structure_checked = true;
    }
    return out;
}

/// Collinearity residual for near-equality states: 0 when (A - <A>) psi and
/// (B - <B>) psi are proportional (the equality condition of the bound).
inline double schwarz_collinearity_residual(const OperatorSpec& A, const OperatorSpec& B,
                                            const ResampleableState& state,
                                            const StatOptions& opts = {}) {
    detail::require_normalized(state.wf, opts.norm_tol);
    detail::require_in_domain(A, state, opts);
    detail::require_in_domain(B, state, opts);
    const WaveFunction& psi = state.wf;
    const WaveFunction ua = detail::centered_apply(A, psi, detail::mean_of(A, psi).value);
    const WaveFunction ub = detail::centered_apply(B, psi, detail::mean_of(B, psi).value);
    const double na = norm(ua);
    const double nb = norm(ub);
    if (na == 0.0 || nb == 0.0) return 0.0;  // a zero vector is trivially collinear
    const cplx overlap = inner_product(ua, ub) / (na * nb);
    const double r2 = 2.0 * (1.0 - std::abs(overlap));
    return std::sqrt(std::max(0.0, r2));
}

}  // namespace uqr
