#include <doctest.h>

#include "test_support.hpp"
#include "truthboost/analytic.hpp"
#include "truthboost/boosting.hpp"
#include "truthboost/compare.hpp"
#include "truthboost/risk.hpp"

#include <cmath>

using namespace truthboost;

TEST_CASE("perfect first stump stops with a status") {
    const LabeledDataset data(1, {-2.0, -1.0, 1.0, 2.0}, {-1, -1, 1, 1});
    const auto model = train_adaboost(data, 3);
    CHECK(model.status == TrainStatus::perfect_fit);
    CHECK(model.stopped_at_step == 1);
    CHECK(model.steps.empty());
    CHECK(model.status_message() == "perfect-fit at step 1");
}

TEST_CASE("anti-perfect weak learner stops symmetrically") {
    const LabeledDataset data(1, {-2.0, -1.0, 1.0, 2.0}, {-1, -1, 1, 1});
    TrainOptions options;
    options.learner = [](const LabeledDataset &, const ExampleWeights &) { return DecisionStump{0, 0.0, -1}; };
    const auto model = train_adaboost(data, 2, options);
    CHECK(model.status == TrainStatus::anti_perfect);
    CHECK(model.stopped_at_step == 1);
}

TEST_CASE("perfect fit after some steps keeps the completed ones") {
    // the third call returns a perfect stump
    const LabeledDataset data(1, {-2.0, -1.0, 1.0, 2.0}, {-1, 1, 1, 1});
    int calls = 0;
    TrainOptions options;
    options.learner = [&calls](const LabeledDataset &, const ExampleWeights &) {
        ++calls;
        return calls < 3 ? DecisionStump{0, 1.5, 1} : DecisionStump{0, -1.5, 1};
    };
    const auto model = train_adaboost(data, 5, options);
    CHECK(model.status == TrainStatus::perfect_fit);
    CHECK(model.stopped_at_step == 3);
    CHECK(model.steps.size() == 2);
}

TEST_CASE("seeded Gaussian run: iterative betas equal analytic betas") {
    const auto data = generate_gaussian(GaussianSpec::with_defaults(1000, 2, 42));
    const auto model = train_adaboost(data, 3);
    REQUIRE(model.status == TrainStatus::complete);
    REQUIRE(model.steps.size() == 3);
    const auto tree = build_tree(outcome_matrix(data, model.classifiers()));
    CHECK(mean_absolute_error(model.betas(), analytic_betas(tree)) <= 1e-12);
}

TEST_CASE("beta sign follows epsilon, inclusion follows epsilon < 1/2") {
    const auto data = generate_gaussian(GaussianSpec::with_defaults(300, 2, 5));
    // every other step uses the flipped best stump, forcing epsilon > 1/2
    int calls = 0;
    TrainOptions options;
    options.learner = [&calls](const LabeledDataset &d, const ExampleWeights &w) {
        auto s = fit_stump(d, w);
        if (++calls % 2 == 0)
            s.polarity = -s.polarity;
        return s;
    };
    const auto model = train_adaboost(data, 6, options);
    REQUIRE(model.steps.size() == 6);
    int excluded = 0;
    for (const auto &s : model.steps) {
        CHECK(s.beta == doctest::Approx(0.5 * std::log((1 - s.epsilon) / s.epsilon)).epsilon(1e-15));
        if (s.epsilon < 0.5) {
            CHECK(s.beta > 0.0);
            CHECK(s.included);
        } else if (s.epsilon > 0.5) {
            CHECK(s.beta < 0.0);
            CHECK_FALSE(s.included);
            ++excluded;
        }
    }
    CHECK(excluded >= 1);

    // excluded steps still reweight the examples, which the analytic recursion reproduces
    const auto tree = build_tree(outcome_matrix(data, model.classifiers()));
    CHECK(mean_absolute_error(model.betas(), analytic_betas(tree)) <= 1e-12);
}

TEST_CASE("decision_function and predict") {
    const double x[] = {1.0};
    SUBCASE("single step") {
        BoostModel m;
        m.steps = {{{0, 0.0, 1}, 0.5, 0.25, true}};
        CHECK(decision_function(m, x) == 0.5);
        CHECK(predict(m, x) == 1);
    }
    SUBCASE("tie maps to +1") {
        BoostModel m;
        m.steps = {{{0, 0.0, 1}, 1.0, 0.1, true}, {{0, 0.0, -1}, 1.0, 0.1, true}};
        CHECK(decision_function(m, x) == 0.0);
        CHECK(predict(m, x) == 1);
    }
    SUBCASE("excluded steps do not vote") {
        BoostModel m;
        m.steps = {{{0, 0.0, 1}, 1.0, 0.1, true}, {{0, 0.0, 1}, -0.2, 0.6, false}, {{0, 0.0, -1}, 0.3, 0.3, true}};
        CHECK(decision_function(m, x) == doctest::Approx(0.7).epsilon(1e-15));
    }
}

TEST_CASE("weights stay positive and each step balances its own classifier") {
    const auto data = generate_gaussian(GaussianSpec::with_defaults(500, 3, 17));
    TrainOptions options;
    options.record_weights = true;
    const auto model = train_adaboost(data, 6, options);
    REQUIRE(model.steps.size() == 6);
    REQUIRE(model.weight_history.size() == 6);
    for (const auto &w : model.weight_history)
        for (double v : w)
            CHECK(v > 0.0);

    for (std::size_t k = 0; k + 1 < model.steps.size(); ++k) {
        const ExampleWeights after(model.weight_history[k + 1]);
        CHECK(std::abs(weighted_error(model.steps[k].stump, data, after) - 0.5) <= 1e-12);
    }
}

TEST_CASE("per-step risk drops from a_k + b_k to 2 sqrt(a_k b_k)") {
    const auto data = generate_gaussian(GaussianSpec::with_defaults(1000, 2, 99));
    const auto model = train_adaboost(data, 4);
    REQUIRE(model.steps.size() == 4);
    const auto tree = build_tree(outcome_matrix(data, model.classifiers()));
    const auto state = analytic_state(tree);
    const double n = static_cast<double>(tree.n());
    const auto betas = model.betas();
    for (std::size_t k = 1; k <= 4; ++k) {
        const std::vector<double> prefix(betas.begin(), betas.begin() + static_cast<std::ptrdiff_t>(k));
        const double after = risk_from_tree(tree.truncated(k), prefix);
        const double a = state.a[k - 1] / n, b = state.b[k - 1] / n;
        CHECK(after == doctest::Approx(2 * std::sqrt(a * b)).epsilon(1e-12));
        CHECK(after <= a + b + 1e-15);
        if (k > 1) {
            const std::vector<double> before_beta(betas.begin(), betas.begin() + static_cast<std::ptrdiff_t>(k - 1));
            CHECK(risk_from_tree(tree.truncated(k - 1), before_beta) == doctest::Approx(a + b).epsilon(1e-12));
        }
    }
}

TEST_CASE("train_adaboost validates p") {
    const LabeledDataset data(1, {-1.0, 1.0}, {-1, 1});
    CHECK_THROWS_AS(train_adaboost(data, 0), validation_error);
}
