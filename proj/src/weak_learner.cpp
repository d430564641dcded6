#include "truthboost/weak_learner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace truthboost {

int DecisionStump::predict(std::span<const double> x) const {
    return x[feature_index] > threshold ? polarity : -polarity;
}

int stump_predict(const DecisionStump &stump, std::span<const double> x) {
    if (x.size() <= stump.feature_index)
        throw validation_error("stump_predict: input has dimension " + std::to_string(x.size()) + ", stump reads feature " +
                               std::to_string(stump.feature_index));
    return stump.predict(x);
}

ExampleWeights::ExampleWeights(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty())
        throw validation_error("example weights: empty");
    for (double w : weights_)
        if (!(w > 0.0) || !std::isfinite(w))
            throw validation_error("example weights: every weight must be positive and finite");
}

ExampleWeights ExampleWeights::uniform(std::size_t n) {
    return ExampleWeights(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

DecisionStump fit_stump(const LabeledDataset &dataset, const ExampleWeights &weights) {
    const std::size_t n = dataset.size();
    const std::size_t d = dataset.dimension();
    if (weights.size() != n)
        throw validation_error("fit_stump: weight count does not match example count");

    double total_pos = 0.0;
    double total_neg = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        (dataset.label(i) > 0 ? total_pos : total_neg) += weights[i];
    const double tolerance = 1e-12 * (total_pos + total_neg);

    DecisionStump best;
    double best_error = 0.0;
    bool found = false;
    bool any_split = false;

    auto consider = [&](std::size_t feature, double threshold, double error_plus, double error_minus) {
        for (auto [polarity, error] : {std::pair{1, error_plus}, std::pair{-1, error_minus}}) {
            if (!found || error < best_error - tolerance) {
                best = {feature, threshold, polarity};
                best_error = error;
                found = true;
            }
        }
    };

    std::vector<std::size_t> order(n);
    for (std::size_t f = 0; f < d; ++f) {
        auto value = [&](std::size_t i) { return dataset.row(i)[f]; };
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return value(a) < value(b); });

        // Everything is on the "> threshold" side: polarity +1 errs on negatives, -1 on positives.
        consider(f, value(order.front()) - 1.0, total_neg, total_pos);

        double pos_below = 0.0;
        double neg_below = 0.0;
        std::size_t at = 0;
        while (at < n) {
            const double v = value(order[at]);
            while (at < n && value(order[at]) == v) {
                const std::size_t i = order[at];
                (dataset.label(i) > 0 ? pos_below : neg_below) += weights[i];
                ++at;
            }
            if (at == n)
                break;
            any_split = true;
            const double threshold = std::midpoint(v, value(order[at]));
            consider(f, threshold, (total_neg - neg_below) + pos_below, (total_pos - pos_below) + neg_below);
        }
    }
    if (!any_split)
        throw validation_error("fit_stump: no split available (every feature is constant)");
    return best;
}

}  // namespace truthboost
