#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "test_helpers.hpp"
#include "uqr/classical.hpp"
#include "uqr/quantum_stats.hpp"
#include "uqr/states.hpp"

using namespace uqr;
namespace tst = uqr::testing;

TEST_SUITE("classical") {

TEST_CASE("moments: constants, identical columns, a worked two-point set") {
    // constant a
    const SampleSet constant({{3.0, 1.0}, {3.0, 2.0}, {3.0, 5.0}});
    const auto mc = classical_moments(constant);
    CHECK(mc.delta_a == 0.0);
    CHECK(mc.sigma_ab == 0.0);

    // b = a: sigma_ab = (da)^2
    const SampleSet dup({{1.0, 1.0}, {2.0, 2.0}, {5.0, 5.0}, {-1.0, -1.0}});
    const auto md = classical_moments(dup);
    CHECK(md.sigma_ab == doctest::Approx(md.delta_a * md.delta_a).epsilon(1e-14));

    // hand-computed: uniform weights on {(0,0),(1,2)}
    const SampleSet two({{0.0, 0.0}, {1.0, 2.0}});
    const auto mt = classical_moments(two);
    CHECK(mt.mean_a == doctest::Approx(0.5));
    CHECK(mt.mean_b == doctest::Approx(1.0));
    CHECK(mt.delta_a == doctest::Approx(0.5));
    CHECK(mt.delta_b == doctest::Approx(1.0));
    CHECK(mt.sigma_ab == doctest::Approx(0.5));
}

TEST_CASE("relation: exact linear dependence is equality with recovered lambda") {
    auto rng = tst::make_rng(97u);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    std::vector<std::pair<double, double>> rows;
    for (int i = 0; i < 200; ++i) {
        const double a = u(rng);
        rows.emplace_back(a, 2.0 * a + 3.0);
    }
    const auto rep = classical_relation(SampleSet(rows));
    CHECK(rep.satisfied);
    CHECK(rep.equality);
    REQUIRE(rep.lambda.has_value());
    CHECK(*rep.lambda == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(rep.lambda_residual <= 1e-12 * std::max(1.0, rep.lhs));
}

TEST_CASE("relation: independent samples give a strict inequality") {
    auto rng = tst::make_rng(101u);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::pair<double, double>> rows;
    for (int i = 0; i < 10000; ++i) rows.emplace_back(u(rng), u(rng));
    const auto rep = classical_relation(SampleSet(rows));
    CHECK(rep.satisfied);
    CHECK_FALSE(rep.equality);
    CHECK(rep.lhs - rep.rhs > 0.05);  // margin ~ 1/12 for independent uniforms
}

TEST_CASE("relation: a point mass is the degenerate 0 >= 0 equality") {
    // All weight on one observation (up to the tolerance of the sum check).
    const SampleSet s({{2.0, 7.0}, {100.0, -3.0}}, std::vector<double>{1.0, 0.0});
    const auto rep = classical_relation(s);
    CHECK(rep.lhs == 0.0);
    CHECK(rep.rhs == 0.0);
    CHECK(rep.satisfied);
    CHECK(rep.equality);
}

TEST_CASE("relation holds for every random sample set") {
    auto rng = tst::make_rng(103u);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::normal_distribution<double> g(0.0, 2.0);
    for (int t = 0; t < 100; ++t) {
        std::vector<std::pair<double, double>> rows;
        const int n = 2 + static_cast<int>(u(rng) * 40 + 40);
        for (int i = 0; i < n; ++i) {
            const double a = g(rng);
            const double b = u(rng) * a + g(rng) * u(rng);
            rows.emplace_back(a, b);
        }
        const auto rep = classical_relation(SampleSet(rows));
        const double scale = std::max({rep.lhs, rep.rhs, 1.0});
        CHECK(rep.lhs >= rep.rhs - 1e-12 * scale);
        // symmetry: swapping the columns leaves sigma_ab unchanged
        std::vector<std::pair<double, double>> swapped;
        for (auto& [a, b] : rows) swapped.emplace_back(b, a);
        CHECK(classical_moments(SampleSet(swapped)).sigma_ab ==
              doctest::Approx(classical_moments(SampleSet(rows)).sigma_ab).epsilon(1e-14));
    }
}

TEST_CASE("quadratic discriminant: theorem, one-root case, strict case") {
    auto rng = tst::make_rng(107u);
    std::normal_distribution<double> g(0.0, 1.0);
    const auto lams = std::vector<double>{-10, -3, -1, -0.5, 0, 0.5, 1, 3, 10};

    std::vector<std::pair<double, double>> rows;
    for (int i = 0; i < 500; ++i) {
        const double a = g(rng);
        rows.emplace_back(a, 0.3 * a + 0.1 * g(rng));
    }
    const auto rep = quadratic_discriminant_check(SampleSet(rows), lams);
    CHECK(rep.worst_margin >= -1e-12);
    CHECK(rep.discriminant <= 1e-12);

    std::vector<std::pair<double, double>> linear;
    for (int i = 0; i < 50; ++i) {
        const double a = g(rng);
        linear.emplace_back(a, -a);
    }
    const auto rl = quadratic_discriminant_check(SampleSet(linear), lams);
    CHECK(std::abs(rl.discriminant) <= 1e-12);

    std::vector<std::pair<double, double>> indep;
    for (int i = 0; i < 2000; ++i) indep.emplace_back(g(rng), g(rng));
    CHECK(quadratic_discriminant_check(SampleSet(indep), lams).discriminant < -0.1);
}

TEST_CASE("quantum-classical correspondence for commuting multiplication pairs") {
    // For A = f(x), B = g(x) the quantum statistics must equal the classical
    // moments of |psi|^2 with a = f, b = g, and the cross term must vanish.
    const auto topo = GridTopology::line(-10, 10, 2049);
    const auto st = StateRecipe::gaussian(0.3, 0, 1.4).resampleable(topo);
    auto f = [](double x) { return std::sin(x); };
    auto g = [](double x) { return x * x; };
    const auto A = OperatorSpec::multiply_by(f, "sin(x)");
    const auto B = OperatorSpec::multiply_by(g, "x^2");
    const auto q = compute_stats(A, B, st, StatOptions{}, false);

    std::vector<std::pair<double, double>> rows;
    std::vector<double> weights;
    for (int k = 0; k < topo.n_points(); ++k) {
        rows.emplace_back(f(topo.coordinate(k)), g(topo.coordinate(k)));
        weights.push_back(topo.weight(k) * std::norm(st.wf.amplitudes[static_cast<size_t>(k)]));
    }
    double wsum = 0;
    for (double w : weights) wsum += w;
    for (double& w : weights) w /= wsum;  // remove the O(norm_tol) discretization residue
    const auto c = classical_moments(SampleSet(rows, weights));

    CHECK(q.mean_a == doctest::Approx(c.mean_a).epsilon(1e-10));
    CHECK(q.mean_b == doctest::Approx(c.mean_b).epsilon(1e-10));
    CHECK(q.delta_a == doctest::Approx(c.delta_a).epsilon(1e-10));
    CHECK(q.delta_b == doctest::Approx(c.delta_b).epsilon(1e-10));
    CHECK(q.covariance == doctest::Approx(c.sigma_ab).epsilon(1e-10));
    CHECK(std::abs(q.imag_cross) < 1e-14);
}

TEST_CASE("csv ingestion: plain, weighted, header, malformed rows") {
    {
        std::istringstream in("a,b\n0,0\n1,2\n");
        const auto s = load_samples_csv(in);
        CHECK(s.pairs.size() == 2);
        CHECK_FALSE(s.weights.has_value());
    }
    {
        std::istringstream in("1 4 0.25\n2 5 0.5\n3,6,0.25\n");
        const auto s = load_samples_csv(in);
        REQUIRE(s.weights.has_value());
        CHECK(s.weight(1) == doctest::Approx(0.5));
    }
    {
        std::istringstream in("0,0\n1,oops\n2,4\nbad,7\n");
        try {
            load_samples_csv(in);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            const std::string msg = e.what();
            CHECK(msg.find("2") != std::string::npos);
            CHECK(msg.find("4") != std::string::npos);
        }
    }
    {
        std::istringstream in("1,2\n");
        CHECK_THROWS_AS(load_samples_csv(in), ParseError);
    }
}

TEST_CASE("sample set invariants") {
    CHECK_THROWS_AS(SampleSet({{1.0, 2.0}}), StructuralError);
    CHECK_THROWS_AS(SampleSet({{1.0, 2.0}, {3.0, 4.0}}, std::vector<double>{0.5}), StructuralError);
    CHECK_THROWS_AS(SampleSet({{1.0, 2.0}, {3.0, 4.0}}, std::vector<double>{0.9, 0.3}),
                    StructuralError);
    CHECK_THROWS_AS(SampleSet({{1.0, 2.0}, {3.0, 4.0}}, std::vector<double>{-0.1, 1.1}),
                    StructuralError);
}

}  // TEST_SUITE
