#pragma once

#include "truthboost/dataset.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace truthboost {

/// Depth-1 threshold rule: predicts `polarity` when x[feature_index] > threshold, `-polarity` otherwise.
struct DecisionStump {
    std::size_t feature_index = 0;
    double threshold = 0.0;
    int polarity = 1;

    int predict(std::span<const double> x) const;
    std::size_t min_dimension() const noexcept { return feature_index + 1; }

    friend bool operator==(const DecisionStump &, const DecisionStump &) = default;
};

/// Per-example weights; all strictly positive, not necessarily normalized.
class ExampleWeights {
public:
    explicit ExampleWeights(std::vector<double> weights);
    static ExampleWeights uniform(std::size_t n);

    std::size_t size() const noexcept { return weights_.size(); }
    double operator[](std::size_t i) const { return weights_[i]; }
    std::span<const double> values() const noexcept { return weights_; }

private:
    std::vector<double> weights_;
};

/// Same as DecisionStump::predict, with a dimension check.
int stump_predict(const DecisionStump &stump, std::span<const double> x);

/// Exhaustive weighted-error minimization over (feature, threshold, polarity).
///
/// Candidate thresholds per feature are one value below the minimum plus the midpoints between consecutive
/// distinct sorted values. Ties (within 1e-12 of the total weight) resolve to the lowest feature, then the
/// lowest threshold, then polarity +1.
DecisionStump fit_stump(const LabeledDataset &dataset, const ExampleWeights &weights);

/// Normalized weighted mass of the examples the classifier gets wrong.
template <Classifier C>
double weighted_error(const C &classifier, const LabeledDataset &dataset, const ExampleWeights &weights) {
    if (weights.size() != dataset.size())
        throw validation_error("weighted_error: weight count does not match example count");
    if (classifier.min_dimension() > dataset.dimension())
        throw validation_error("weighted_error: classifier dimension exceeds dataset dimension");
    double wrong = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        total += weights[i];
        if (classifier.predict(dataset.row(i)) != dataset.label(i))
            wrong += weights[i];
    }
    return wrong / total;
}

}  // namespace truthboost
