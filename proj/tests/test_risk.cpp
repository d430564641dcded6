#include <doctest.h>

#include "test_support.hpp"
#include "truthboost/analytic.hpp"
#include "truthboost/boosting.hpp"
#include "truthboost/risk.hpp"

#include <cmath>
#include <string>

using namespace truthboost;
namespace t = truthboost::testing;

namespace {

std::vector<double> random_beta(std::mt19937_64 &rng, std::size_t p, double radius) {
    std::uniform_real_distribution<double> u(-radius, radius);
    std::vector<double> beta(p);
    for (auto &b : beta)
        b = u(rng);
    return beta;
}

}  // namespace

TEST_CASE("risk at zero is one") {
    std::mt19937_64 rng(1);
    for (std::size_t p = 1; p <= 5; ++p) {
        const std::vector<double> zero(p, 0.0);
        CHECK(risk_from_tree(t::random_tree(rng, p, 0, 30), zero) == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("single level risk at the boosting weight") {
    const auto tree = OutcomeTree::from_leaves(1, std::vector<std::uint64_t>{80, 920});
    const auto beta = analytic_betas(tree);
    CHECK(risk_from_tree(tree, beta) == doctest::Approx(0.54258639865002145113).epsilon(1e-15));
    CHECK(std::abs(risk_gradient(tree, beta)[0]) <= 1e-15);
}

TEST_CASE("tree risk equals the per-example sum") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t p = 1 + trial % 5;
        const auto tree = t::random_tree(rng, p, 0, 40);
        const auto m = t::outcomes_from_leaves(p, tree.leaves());
        const auto beta = random_beta(rng, p, 3.0);
        CHECK(risk_from_tree(tree, beta) == doctest::Approx(risk_bruteforce(m, beta)).epsilon(1e-12));
    }
}

TEST_CASE("depth-3 risk equals the labeled-table form") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const auto tree = t::random_tree(rng, 3, 0, 200);
        const auto beta = random_beta(rng, 3, 2.0);
        CHECK(risk_from_tree(tree, beta) == doctest::Approx(t::risk_p3_by_table(tree, beta)).epsilon(1e-12));
    }
}

TEST_CASE("reference tree: risk at the boosting weights") {
    const auto tree = t::reference_tree();
    CHECK(risk_from_tree(tree, t::kRefBetaStar) == doctest::Approx(t::kRefRiskStar).epsilon(1e-14));
}

TEST_CASE("gradient and Hessian against finite differences") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t p = 1 + trial % 5;
        const auto tree = t::random_tree(rng, p, 1, 100);
        const auto beta = random_beta(rng, p, 2.0);
        const auto f = [&](std::span<const double> b) { return risk_from_tree(tree, b); };
        const auto fd = t::finite_difference_gradient(f, beta, 1e-6);
        const auto g = risk_gradient(tree, beta);
        for (std::size_t k = 0; k < p; ++k)
            CHECK(std::abs(g[k] - fd[k]) <= 1e-6 * std::max(1.0, std::abs(g[k])));

        const auto h = risk_hessian(tree, beta);
        for (std::size_t k = 0; k < p; ++k) {
            const auto row = t::finite_difference_gradient(
                [&](std::span<const double> b) { return risk_gradient(tree, b)[k]; }, beta, 1e-6);
            for (std::size_t l = 0; l < p; ++l) {
                CHECK(std::abs(h[k * p + l] - row[l]) <= 1e-6 * std::max(1.0, std::abs(h[k * p + l])));
                CHECK(h[k * p + l] == h[l * p + k]);
            }
        }
    }
}

TEST_CASE("X coordinates") {
    const std::array<double, 3> beta = {0.3, -1.1, 2.0};
    const auto x = to_x_coordinates(beta);
    CHECK(x.x0 == doctest::Approx(1.2));
    CHECK(x.x1 == doctest::Approx(0.6));
    CHECK(x.x2 == doctest::Approx(3.4));
    CHECK(x.x3 == doctest::Approx(-2.8));
    CHECK(x.x0 == doctest::Approx(x.x1 + x.x2 + x.x3));
    CHECK_THROWS_AS(to_x_coordinates(std::vector<double>{1.0, 2.0}), validation_error);
}

TEST_CASE("Euler residuals") {
    SUBCASE("balanced tree at zero") {
        const std::array<std::uint64_t, 8> equal = {3, 3, 3, 3, 3, 3, 3, 3};
        const auto r = euler_residual_p3(OutcomeTree::from_leaves(3, equal), std::vector<double>{0, 0, 0});
        for (double v : r)
            CHECK(std::abs(v) <= 1e-12);
    }
    SUBCASE("reference tree at the boosting weights") {
        const auto r = euler_residual_p3(t::reference_tree(), t::kRefBetaStar);
        for (std::size_t i = 0; i < 3; ++i)
            CHECK(r[i] == doctest::Approx(t::kRefEulerAtStar[i]).epsilon(1e-12));
    }
    SUBCASE("equal to n times the gradient mapped to X coordinates") {
        std::mt19937_64 rng(5);
        for (int trial = 0; trial < 50; ++trial) {
            const auto tree = t::random_tree(rng, 3, 0, 100);
            const auto beta = random_beta(rng, 3, 1.5);
            const auto g = risk_gradient(tree, beta);
            const double n = static_cast<double>(tree.n());
            const std::array<double, 3> expected = {0.5 * n * (g[1] + g[2]), 0.5 * n * (g[0] + g[2]),
                                                    0.5 * n * (g[0] + g[1])};
            const auto r = euler_residual_p3(tree, beta);
            for (std::size_t i = 0; i < 3; ++i)
                CHECK(r[i] == doctest::Approx(expected[i]).epsilon(1e-10).scale(n));
        }
    }
}

TEST_CASE("reference tree: Newton minimum and gap") {
    const auto tree = t::reference_tree();
    const auto m = minimize_risk(tree);
    REQUIRE(m.report.converged);
    CHECK(m.report.iterations <= 100);
    CHECK(m.report.gradient_norm <= 1e-12);
    for (std::size_t k = 0; k < 3; ++k)
        CHECK(m.beta[k] == doctest::Approx(t::kRefBetaMin[k]).epsilon(1e-10));
    CHECK(m.report.risk_value == doctest::Approx(t::kRefRiskMin).epsilon(1e-14));
    const double gap = risk_from_tree(tree, t::kRefBetaStar) - m.report.risk_value;
    CHECK(gap == doctest::Approx(t::kRefGap).epsilon(1e-12));
    REQUIRE(m.report.euler_residual.has_value());
    for (double v : *m.report.euler_residual)
        CHECK(std::abs(v) <= 1e-9);
}

TEST_CASE("symmetric and single-level minima") {
    const std::array<std::uint64_t, 8> equal = {5, 5, 5, 5, 5, 5, 5, 5};
    const auto m = minimize_risk(OutcomeTree::from_leaves(3, equal));
    CHECK(m.report.converged);
    for (double b : m.beta)
        CHECK(std::abs(b) <= 1e-12);

    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 20; ++trial) {
        const auto tree = t::random_tree(rng, 1, 1, 2000);
        const auto single = minimize_risk(tree);
        CHECK(single.report.converged);
        CHECK(std::abs(single.beta[0] - analytic_betas(tree)[0]) <= 1e-10);
    }
}

TEST_CASE("the minimum is below every random point and midpoints are below chords") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t p = 2 + trial % 4;
        const auto tree = t::random_tree(rng, p, 1, 200);
        const auto m = minimize_risk(tree);
        REQUIRE(m.report.converged);
        for (int i = 0; i < 100; ++i) {
            const auto beta = random_beta(rng, p, 5.0 / std::sqrt(static_cast<double>(p)));
            CHECK(risk_from_tree(tree, beta) >= m.report.risk_value - 1e-15);
            const auto other = random_beta(rng, p, 3.0);
            std::vector<double> mid(p);
            for (std::size_t k = 0; k < p; ++k)
                mid[k] = 0.5 * (beta[k] + other[k]);
            CHECK(risk_from_tree(tree, mid) <=
                  0.5 * (risk_from_tree(tree, beta) + risk_from_tree(tree, other)) + 1e-12);
        }
    }
}

TEST_CASE("empty leaf breaks coercivity") {
    const std::array<std::uint64_t, 8> leaves = {0, 16, 18, 42, 9, 44, 100, 767};
    try {
        minimize_risk(OutcomeTree::from_leaves(3, leaves));
        FAIL("expected numerical_error");
    } catch (const numerical_error &e) {
        CHECK(std::string(e.what()).find("coercivity") != std::string::npos);
    }
}

TEST_CASE("iteration cap is reported, not thrown") {
    NewtonOptions options;
    options.max_iterations = 1;
    const auto m = minimize_risk(t::reference_tree(), options);
    CHECK_FALSE(m.report.converged);
    CHECK(m.report.iterations == 1);
    CHECK(m.report.gradient_norm > 1e-12);

    options.max_iterations = 0;
    const auto none = minimize_risk(t::reference_tree(), options);
    CHECK_FALSE(none.report.converged);
    CHECK(none.beta == std::vector<double>{0.0, 0.0, 0.0});
}

TEST_CASE("evaluate_risk") {
    const auto r = evaluate_risk(t::reference_tree(), t::kRefBetaStar);
    CHECK(r.risk_value == doctest::Approx(t::kRefRiskStar).epsilon(1e-14));
    CHECK(r.euler_residual.has_value());
    CHECK(r.gradient.size() == 3);
    CHECK_FALSE(evaluate_risk(t::reference_tree().truncated(2), std::vector<double>{1, 1}).euler_residual.has_value());
    CHECK_THROWS_AS(evaluate_risk(t::reference_tree(), std::vector<double>{1, 1}), validation_error);
}

TEST_CASE("packet reduction: one triple votes like its weighted sum") {
    const auto data = generate_gaussian(GaussianSpec::with_defaults(600, 2, 31));
    const auto model = train_adaboost(data, 3);
    REQUIRE(model.steps.size() == 3);
    const auto stumps = model.classifiers();
    const auto betas = model.betas();
    const auto reduced = packet_reduce(data, stumps, PacketMode::analytic);
    REQUIRE(reduced.classifiers.size() == 1);
    CHECK(reduced.warnings.empty());
    for (std::size_t i = 0; i < data.size(); ++i) {
        double vote = 0.0;
        for (std::size_t k = 0; k < 3; ++k)
            vote += betas[k] * stump_predict(stumps[k], data.row(i));
        CHECK(reduced.classifiers[0].predict(data.row(i)) == (vote >= 0.0 ? 1 : -1));
    }
}

TEST_CASE("packet reduction: grouping, remainders and fallback") {
    const auto data = generate_gaussian(GaussianSpec::with_defaults(800, 3, 12));
    const auto model = train_adaboost(data, 8);
    REQUIRE(model.steps.size() == 8);
    const auto stumps = model.classifiers();

    const auto reduced = packet_reduce(data, std::span(stumps).first(6), PacketMode::minimum);
    CHECK(reduced.classifiers.size() == 2);
    CHECK(reduced.recombined_betas.size() == 2);

    const auto with_rest = packet_reduce(data, stumps, PacketMode::analytic);
    REQUIRE(with_rest.classifiers.size() == 4);
    // the trailing two pass through one by one with unit weight
    CHECK(with_rest.classifiers[2].members == std::vector<DecisionStump>{stumps[6]});
    CHECK(with_rest.classifiers[3].members == std::vector<DecisionStump>{stumps[7]});
    CHECK(with_rest.classifiers[3].betas == std::vector<double>{1.0});

    // a triple repeating one stump leaves most leaves empty: minimum mode falls back
    const std::vector<DecisionStump> same = {stumps[0], stumps[0], stumps[1]};
    try {
        const auto fallback = packet_reduce(data, same, PacketMode::minimum);
        CHECK(fallback.modes_used[0] == PacketMode::analytic);
        CHECK_FALSE(fallback.warnings.empty());
    } catch (const numerical_error &) {
        // analytic weights of a repeated stump are infinite as well; either outcome is an explicit signal
    }
    CHECK_THROWS_AS(packet_reduce(data, std::span<const DecisionStump>{}, PacketMode::analytic), validation_error);
}

TEST_CASE("packet mode names") {
    CHECK(to_string(PacketMode::analytic) == "analytic");
    CHECK(packet_mode_from_string("minimum") == PacketMode::minimum);
    CHECK_THROWS_AS(packet_mode_from_string("exact"), validation_error);
}
