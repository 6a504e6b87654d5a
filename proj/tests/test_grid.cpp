#include <doctest.h>

#include <cmath>
#include <numbers>

#include "test_helpers.hpp"
#include "uqr/grid.hpp"
#include "uqr/states.hpp"

using namespace uqr;
namespace tst = uqr::testing;

TEST_SUITE("grid") {

TEST_CASE("topology invariants are enforced") {
    CHECK_THROWS_AS(GridTopology::line(1.0, 1.0, 64), StructuralError);
    CHECK_THROWS_AS(GridTopology::line(0.0, 1.0, 2), StructuralError);
    CHECK_THROWS_AS(GridTopology::circle(2), StructuralError);

    const auto circle = GridTopology::circle(101);
    CHECK(circle.step() == doctest::Approx(kTwoPi / 100.0));
    CHECK(circle.coordinate(0) == 0.0);
    CHECK(circle.coordinate(100) == doctest::Approx(kTwoPi));

    const auto line = GridTopology::line(-2.0, 2.0, 5);
    CHECK(line.step() == doctest::Approx(1.0));
    CHECK(line.coordinate(3) == doctest::Approx(1.0));
}

TEST_CASE("circle grids keep both endpoint samples distinct") {
    const auto topo = GridTopology::circle(257);
    const WaveFunction psi = StateRecipe::lz_eigenstate(1).realize(topo);
    // Same magnitude at both ends, but they are separate storage slots.
    CHECK(std::abs(psi.front()) == doctest::Approx(std::abs(psi.back())));
    CHECK(topo.coordinate(0) != topo.coordinate(topo.n_points() - 1));
}

TEST_CASE("inner product: eigenstate normalization and orthogonality") {
    const auto topo = GridTopology::circle(1025);
    const WaveFunction psi1 = StateRecipe::lz_eigenstate(1).realize(topo);
    const WaveFunction psi2 = StateRecipe::lz_eigenstate(2).realize(topo);

    CHECK(inner_product(psi1, psi1).real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(inner_product(psi1, psi2)) < 1e-12);
}

TEST_CASE("inner product: conjugate-linear in first slot, linear in second") {
    auto rng = tst::make_rng(7u);
    const auto topo = GridTopology::circle(129);
    const WaveFunction psi = tst::random_rough_state(rng, topo);
    const WaveFunction chi = tst::random_rough_state(rng, topo);
    const cplx c(0.7, -1.3);

    std::vector<cplx> scaled = psi.amplitudes;
    for (auto& v : scaled) v *= c;
    const WaveFunction cpsi(topo, scaled);

    CHECK(std::abs(inner_product(chi, cpsi) - c * inner_product(chi, psi)) < 1e-12);
    std::vector<cplx> chi_scaled = chi.amplitudes;
    for (auto& v : chi_scaled) v *= c;
    const WaveFunction cchi(topo, chi_scaled);
    CHECK(std::abs(inner_product(cchi, psi) - std::conj(c) * inner_product(chi, psi)) < 1e-12);
}

TEST_CASE("inner product: topology mismatch is a structural error") {
    const WaveFunction a = StateRecipe::lz_eigenstate(0).realize(GridTopology::circle(65));
    const WaveFunction b = StateRecipe::lz_eigenstate(0).realize(GridTopology::circle(129));
    CHECK_THROWS_AS(inner_product(a, b), StructuralError);
}

TEST_CASE("conjugate symmetry holds for random state pairs") {
    auto rng = tst::make_rng(11u);
    const auto topo = GridTopology::line(-3.0, 3.0, 201);
    for (int trial = 0; trial < 25; ++trial) {
        const WaveFunction psi = tst::random_rough_state(rng, topo);
        const WaveFunction chi = tst::random_rough_state(rng, topo);
        const cplx lhs = inner_product(chi, psi);
        const cplx rhs = std::conj(inner_product(psi, chi));
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
    }
}

TEST_CASE("Cauchy-Schwarz holds for random state pairs") {
    auto rng = tst::make_rng(13u);
    const auto topo = GridTopology::circle(301);
    for (int trial = 0; trial < 50; ++trial) {
        const WaveFunction psi = tst::random_rough_state(rng, topo);
        const WaveFunction chi = tst::random_rough_state(rng, topo);
        CHECK(std::abs(inner_product(chi, psi)) <= norm(chi) * norm(psi) + 1e-12);
    }
}

TEST_CASE("norm: normalized Gaussian, zero state, cusp profile") {
    const auto box = GridTopology::line(-12.0, 12.0, 4097);
    // Raw (un-renormalized) analytic Gaussian: continuum norm is exactly 1
    // and the quadrature error for this decaying integrand is tiny.
    {
        const double sigma = 1.0;
        std::vector<cplx> a(static_cast<size_t>(box.n_points()));
        const double amp = std::pow(std::numbers::pi * sigma * sigma, -0.25);
        for (int k = 0; k < box.n_points(); ++k) {
            const double x = box.coordinate(k);
            a[static_cast<size_t>(k)] = amp * std::exp(-x * x / (2.0 * sigma * sigma));
        }
        CHECK(norm(WaveFunction(box, a)) == doctest::Approx(1.0).epsilon(1e-9));
    }
    {
        std::vector<cplx> zeros(static_cast<size_t>(box.n_points()), cplx(0.0, 0.0));
        CHECK(norm(WaveFunction(box, zeros)) == 0.0);
    }
    {
        // sqrt(2|x|) e^{-|x|} is normalized in the continuum; the cusp cell
        // contributes an O(h^2) quadrature error, nothing worse.
        const auto wide = GridTopology::line(-20.0, 20.0, 8193);
        const double h = wide.step();
        std::vector<cplx> a(static_cast<size_t>(wide.n_points()));
        const double center = wide.coordinate((wide.n_points() - 1) / 2) + 0.5 * h;
        for (int k = 0; k < wide.n_points(); ++k) {
            const double r = std::abs(wide.coordinate(k) - center);
            a[static_cast<size_t>(k)] = std::sqrt(2.0 * r) * std::exp(-r);
        }
        CHECK(norm(WaveFunction(wide, a)) == doctest::Approx(1.0).epsilon(2e-5));
    }
}

TEST_CASE("normalize: unit result, idempotence, zero state rejected") {
    auto rng = tst::make_rng(17u);
    const auto topo = GridTopology::line(-5.0, 5.0, 173);
    const WaveFunction raw = tst::random_rough_state(rng, topo);
    const WaveFunction unit = normalize(raw);
    CHECK(std::abs(norm(unit) - 1.0) <= kNormTol);

    const WaveFunction again = normalize(unit);
    for (size_t i = 0; i < unit.amplitudes.size(); ++i)
        CHECK(std::abs(again.amplitudes[i] - unit.amplitudes[i]) < 1e-12);

    std::vector<cplx> zeros(static_cast<size_t>(topo.n_points()), cplx(0.0, 0.0));
    CHECK_THROWS_AS(normalize(WaveFunction(topo, zeros)), DegenerateStateError);
}

TEST_CASE("trapezoid quadrature is second order on a non-periodic integrand") {
    // norm^2 of exp(-x/2) on [0, 30] has the closed form 1 - exp(-30);
    // halving h must cut the error by ~4 (assert >= 3.5) at every level.
    const double exact = 1.0 - std::exp(-30.0);
    double prev_err = -1.0;
    for (int n : {65, 129, 257, 513, 1025}) {
        const auto topo = GridTopology::line(0.0, 30.0, n);
        std::vector<cplx> a(static_cast<size_t>(n));
        for (int k = 0; k < n; ++k)
            a[static_cast<size_t>(k)] = std::exp(-0.5 * topo.coordinate(k));
        const double err = std::abs(norm_squared(WaveFunction(topo, a)) - exact);
        if (prev_err > 0.0) CHECK(prev_err / err >= 3.5);
        prev_err = err;
    }
}

TEST_CASE("refine: exact resampling for recipes, norm preserved") {
    const auto recipe = StateRecipe::lz_eigenstate(3);
    const auto base = recipe.resampleable(GridTopology::circle(1025));
    const auto fine = refine(base, 2);
    CHECK(fine.wf.topology.n_points() == 2049);

    const WaveFunction direct = recipe.realize(GridTopology::circle(2049));
    for (int k = 0; k < 2049; ++k)
        CHECK(std::abs(fine.wf.amplitudes[static_cast<size_t>(k)] -
                       direct.amplitudes[static_cast<size_t>(k)]) < 1e-14);
    CHECK(norm(fine.wf) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK_THROWS_AS(refine(base, 1), StructuralError);
}

TEST_CASE("interpolating resampler reproduces smooth states between nodes") {
    const auto coarse = GridTopology::line(-6.0, 6.0, 257);
    const auto fine_topo = coarse.refined(4);
    const auto gauss = StateRecipe::gaussian(0.0, 1.5, 1.0);
    const ResampleableState interp = make_resampleable(gauss.realize(coarse));
    const WaveFunction fine = interp.at(fine_topo);
    const WaveFunction exact = normalize(WaveFunction(
        fine_topo, [&] {
            std::vector<cplx> a(static_cast<size_t>(fine_topo.n_points()));
            const WaveFunction ref = gauss.realize(fine_topo);
            a = ref.amplitudes;
            return a;
        }()));
    double worst = 0.0;
    for (int k = 0; k < fine_topo.n_points(); ++k)
        worst = std::max(worst, std::abs(fine.amplitudes[static_cast<size_t>(k)] -
                                         exact.amplitudes[static_cast<size_t>(k)]));
    CHECK(worst < 5e-5);  // local cubic interpolation is ~O(h^3) on smooth profiles
}

}  // TEST_SUITE
