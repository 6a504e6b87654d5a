#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "test_helpers.hpp"
#include "uqr/relations.hpp"
#include "uqr/states.hpp"

using namespace uqr;
namespace tst = uqr::testing;

namespace {

RelationOptions fast_opts() {
    RelationOptions ro;
    ro.stats.domain.refinements = 2;
    return ro;
}

/// Packet proportional to e^{i phi} - 1: vanishes at both endpoint samples,
/// so multiplying by phi cannot break the boundary condition.
StateRecipe vanishing_ends_packet() {
    return StateRecipe::circle_wave_packet({cplx(0, 0.5), cplx(0, -0.5)}, 0, 0.0);
}

}  // namespace

TEST_SUITE("relations") {

TEST_CASE("eigenstate pair: zero-by-zero equality, never a false hbar/2") {
    const auto psi = StateRecipe::lz_eigenstate(1).resampleable(GridTopology::circle(8193));
    const auto rep = evaluate_modified(OperatorSpec::angle(), OperatorSpec::angular_momentum(), psi);
    CHECK(rep.lhs < 1e-6);                   // dphi * dLz ~ 0
    CHECK(rep.modified.applies);
    CHECK(rep.modified.value < 1e-6);        // bound collapses to ~0
    CHECK(rep.modified.satisfied);
    CHECK(std::abs(rep.modified.margin) < 1e-6);  // equality within tolerance
}

TEST_CASE("eigenstate pair: the commutator bounds are inapplicable, with evidence") {
    const auto psi = StateRecipe::lz_eigenstate(1).resampleable(GridTopology::circle(4097));
    const auto rep =
        evaluate_commutator_form(OperatorSpec::angle(), OperatorSpec::angular_momentum(), psi);
    CHECK(rep.modified.applies);
    REQUIRE(rep.commutator_form.has_value());
    REQUIRE(rep.standard.has_value());
    CHECK_FALSE(rep.commutator_form->applies);
    CHECK_FALSE(rep.standard->applies);
    REQUIRE(rep.standard->blocker.has_value());
    CHECK(rep.standard->blocker->reason == DomainReason::BoundaryConditionViolated);
    CHECK_FALSE(rep.stats.commutator_expectation.has_value());
    // The modified bound still holds: lhs ~ 0 >= ~0, NOT >= hbar/2.
    CHECK(rep.lhs < 0.25);
}

TEST_CASE("gaussian x-p: standard bound hbar/2, met with equality") {
    const auto psi = StateRecipe::gaussian(0, 0, 1).resampleable(GridTopology::line(-12, 12, 32769));
    const auto rep = evaluate_commutator_form(OperatorSpec::position(), OperatorSpec::momentum(),
                                              psi, fast_opts());
    CHECK(rep.lhs == doctest::Approx(0.5).epsilon(1e-6));
    REQUIRE(rep.standard.has_value());
    CHECK(rep.standard->applies);
    CHECK(rep.standard->value == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(rep.standard->satisfied);
    CHECK(rep.modified.value == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(std::abs(rep.modified.margin) < 1e-6);  // saturation
}

TEST_CASE("chirped gaussians saturate the covariance-augmented bound") {
    for (double c : {0.25, 0.5, 1.0}) {
        const auto psi =
            StateRecipe::gaussian(0, 0, 1, c).resampleable(GridTopology::line(-12, 12, 32769));
        const auto rep = evaluate_commutator_form(OperatorSpec::position(),
                                                  OperatorSpec::momentum(), psi, fast_opts());
        const double expected = 0.5 * std::sqrt(1.0 + c * c);
        CHECK(rep.lhs == doctest::Approx(expected).epsilon(1e-6));
        CHECK(rep.modified.value == doctest::Approx(expected).epsilon(1e-6));
        CHECK(std::abs(rep.lhs - rep.modified.value) < 1e-9);  // exact discrete saturation
        REQUIRE(rep.commutator_form.has_value());
        CHECK(rep.commutator_form->value == doctest::Approx(expected).epsilon(1e-6));
        // ordering: sqrt(cov^2 + k^2) >= |k|
        CHECK(rep.commutator_form->value >= rep.standard->value - 1e-12);
        CHECK(rep.modified.value >= rep.standard->value - 1e-6);
    }
}

TEST_CASE("commutator and modified bounds coincide on composite-domain circle states") {
    auto rng = tst::make_rng(71u);
    const auto topo = GridTopology::circle(2049);
    const double tol = 20.0 * topo.step() * topo.step() + 1e-10;
    const auto f = OperatorSpec::multiply_by([](double phi) { return std::cos(phi); }, "cos(phi)");
    const auto lz = OperatorSpec::angular_momentum();
    for (int t = 0; t < 10; ++t) {
        const auto st = tst::random_circle_packet(rng, 4).resampleable(topo);
        const auto rep = evaluate_commutator_form(f, lz, st);
        REQUIRE(rep.commutator_form.has_value());
        REQUIRE(rep.commutator_form->applies);
        CHECK(std::abs(rep.commutator_form->value - rep.modified.value) <= tol);
        CHECK(rep.modified.satisfied);
        CHECK(rep.commutator_form->satisfied);
    }
}

TEST_CASE("closed-form angle bound: eigenstates give zero") {
    for (int m : {-2, 0, 3}) {
        const auto psi = StateRecipe::lz_eigenstate(m).resampleable(GridTopology::circle(8193));
        CHECK(std::abs(phi_lz_bound(psi)) <= 1e-8);
        // |psi(2pi)|^2 = 1/(2 pi) exactly kills the boundary factor.
        CHECK(std::abs(phi_lz_boundary_im(psi)) <= 1e-12);
    }
}

TEST_CASE("closed-form angle bound: endpoint-vanishing packet reaches hbar/2") {
    const auto psi = vanishing_ends_packet().resampleable(GridTopology::circle(4097));
    const double h = psi.wf.topology.step();
    // psi(2pi) = 0, so the boundary factor is 1 and the bound >= hbar/2.
    CHECK(phi_lz_boundary_im(psi) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(phi_lz_bound(psi) >= 0.5 - 1e-12);
    // Quadrature route agrees with the endpoint formula.
    const double im = imag_cross(OperatorSpec::angle(), OperatorSpec::angular_momentum(), psi);
    CHECK(std::abs(im - 0.5) <= 20.0 * h * h);
}

TEST_CASE("closed-form angle bound tracks the quadrature bound across packets") {
    auto rng = tst::make_rng(73u);
    const auto topo = GridTopology::circle(4097);
    const double tol = 20.0 * topo.step() * topo.step() + 1e-10;
    for (int t = 0; t < 20; ++t) {
        const double alpha = (t % 3 == 0) ? 0.0 : 0.31 * t;
        const auto st = tst::random_circle_packet(rng, 4, alpha).resampleable(topo);
        const auto rep =
            evaluate_modified(OperatorSpec::angle(), OperatorSpec::angular_momentum(), st);
        CHECK(std::abs(phi_lz_bound(st) - rep.modified.value) <= tol);
    }
}

TEST_CASE("x-p boundary term: decaying state gives hbar/2, wrong topology throws") {
    const auto gauss = StateRecipe::gaussian(0, 0, 1).resampleable(GridTopology::line(-12, 12, 8193));
    const auto term = xp_boundary_term(gauss, 1.0, fast_opts());
    CHECK(term.value == doctest::Approx(0.5).epsilon(1e-10));
    CHECK_FALSE(term.truncation_suspect);

    const auto circle = StateRecipe::lz_eigenstate(1).resampleable(GridTopology::circle(257));
    CHECK_THROWS_AS(xp_boundary_term(circle, 1.0), StructuralError);
}

TEST_CASE("x-p boundary term: slow decay is visibly nonzero and flagged") {
    const auto psi = StateRecipe::slow_decay(0.25).resampleable(GridTopology::line(-50, 50, 8193));
    const auto term = xp_boundary_term(psi, 1.0, fast_opts());
    CHECK(term.truncation_suspect);
    CHECK(term.value < 0.45);  // the edge term eats a visible chunk of hbar/2
    // But it still matches the quadrature cross term on this box.
    const double im =
        imag_cross(OperatorSpec::position(), OperatorSpec::momentum(), psi, fast_opts().stats);
    CHECK(term.value == doctest::Approx(im).epsilon(1e-4));
}

TEST_CASE("quadratic form is nonnegative everywhere on the scan grid") {
    auto rng = tst::make_rng(79u);
    const auto topo = GridTopology::circle(1025);
    const auto lams = default_lambda_grid();
    const auto thetas = default_theta_grid();
    for (int t = 0; t < 5; ++t) {
        const auto st = tst::random_circle_packet(rng, 4).resampleable(topo);
        const auto rep = quadratic_form_check(OperatorSpec::angle(),
                                              OperatorSpec::angular_momentum(), st, lams, thetas);
        CHECK(rep.worst_margin >= -1e-12);
        CHECK(rep.structure_checked);
        CHECK(rep.structure_residual <= 1e-10);
    }
}

TEST_CASE("quadratic form: gaussian minimum collapses to zero (saturation)") {
    const auto st = StateRecipe::gaussian(0, 0, 1).resampleable(GridTopology::line(-12, 12, 8193));
    const auto rep = quadratic_form_check(OperatorSpec::position(), OperatorSpec::momentum(), st,
                                          default_lambda_grid(), default_theta_grid(), fast_opts());
    CHECK(rep.worst_margin >= -1e-12);
    CHECK(rep.worst_margin <= 1e-8);  // the grid contains the saturating (lambda, theta)
}

TEST_CASE("quadratic form: dB = 0 makes the form constant in lambda") {
    const auto st = StateRecipe::lz_eigenstate(1).resampleable(GridTopology::circle(8193));
    const double dphi2 = std::pow(std::numbers::pi, 2) / 3.0;
    const auto rep = quadratic_form_check(OperatorSpec::angle(), OperatorSpec::angular_momentum(),
                                          st, default_lambda_grid(), default_theta_grid());
    CHECK_FALSE(rep.structure_checked);  // dB ~ 0: no vertex structure to verify
    CHECK(rep.worst_margin == doctest::Approx(dphi2).epsilon(1e-3));
}

TEST_CASE("near-equality reports come with a collinearity certificate") {
    const auto sat = StateRecipe::gaussian(0, 0, 1, 0.5).resampleable(GridTopology::line(-12, 12, 8193));
    CHECK(schwarz_collinearity_residual(OperatorSpec::position(), OperatorSpec::momentum(), sat,
                                        fast_opts().stats) < 1e-5);

    auto rng = tst::make_rng(83u);
    const auto loose = tst::random_hermite_state(rng, GridTopology::line(-12, 12, 2049), 5);
    const double r = schwarz_collinearity_residual(OperatorSpec::position(),
                                                   OperatorSpec::momentum(), loose,
                                                   fast_opts().stats);
    CHECK(r > 1e-2);  // generic states are far from saturation
}

TEST_CASE("hbar propagates through every bound") {
    for (double hbar : {0.5, 2.0}) {
        const auto psi = StateRecipe::gaussian(0, 0, 1, 0.0, hbar)
                             .resampleable(GridTopology::line(-12, 12, 16385));
        const auto rep = evaluate_commutator_form(OperatorSpec::position(hbar),
                                                  OperatorSpec::momentum(hbar), psi, fast_opts());
        CHECK(rep.lhs == doctest::Approx(0.5 * hbar).epsilon(1e-6));
        CHECK(rep.stats.imag_cross == doctest::Approx(0.5 * hbar).epsilon(1e-6));
        REQUIRE(rep.standard.has_value());
        CHECK(rep.standard->value == doctest::Approx(0.5 * hbar).epsilon(1e-6));

        const auto circle = StateRecipe::lz_eigenstate(2).resampleable(GridTopology::circle(8193));
        CHECK(expectation(OperatorSpec::angular_momentum(hbar), circle) ==
              doctest::Approx(2.0 * hbar).epsilon(1e-6));
        CHECK(phi_lz_boundary_im(circle, hbar) == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("modified bound holds across random in-domain states (both topologies)") {
    auto rng = tst::make_rng(89u);
    const auto circle = GridTopology::circle(1025);
    const auto line = GridTopology::line(-12, 12, 1025);
    const double tol_c = tolerance_for_grid(circle, RelationOptions{});
    const double tol_l = tolerance_for_grid(line, RelationOptions{});
    for (int t = 0; t < 15; ++t) {
        const auto st = tst::random_circle_packet(rng, 4, (t % 2) * 0.7).resampleable(circle);
        const auto rep =
            evaluate_modified(OperatorSpec::angle(), OperatorSpec::angular_momentum(), st);
        CHECK(rep.modified.margin >= -tol_c);
        // the bound dominates each of its two ingredients
        CHECK(rep.modified.value >= std::abs(rep.stats.covariance) - 1e-12);
        CHECK(rep.modified.value >= std::abs(rep.stats.imag_cross) - 1e-12);
    }
    for (int t = 0; t < 15; ++t) {
        const auto st = tst::random_hermite_state(rng, line, 6);
        const auto rep = evaluate_modified(OperatorSpec::position(), OperatorSpec::momentum(), st,
                                           fast_opts());
        CHECK(rep.modified.margin >= -tol_l);
    }
}

}  // TEST_SUITE
