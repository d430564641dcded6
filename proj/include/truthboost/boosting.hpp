#pragma once

#include "truthboost/dataset.hpp"
#include "truthboost/weak_learner.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace truthboost {

struct BoostStep {
    DecisionStump stump;
    double beta = 0.0;     // 1/2 ln((1 - epsilon) / epsilon)
    double epsilon = 0.0;  // normalized weighted error at fit time
    bool included = false; // epsilon < 1/2; excluded steps still reweight the examples

    friend bool operator==(const BoostStep &, const BoostStep &) = default;
};

enum class TrainStatus {
    complete,
    perfect_fit,  // epsilon_k == 0
    anti_perfect, // epsilon_k == 1
};

std::string to_string(TrainStatus status);
TrainStatus train_status_from_string(const std::string &text);

struct BoostModel {
    std::vector<BoostStep> steps;
    TrainStatus status = TrainStatus::complete;
    std::size_t stopped_at_step = 0;  // 1-based step that hit epsilon 0 or 1; 0 when complete
    std::size_t requested_steps = 0;
    /// weight_history[k] holds the example weights used to fit step k+1 (filled on request).
    std::vector<std::vector<double>> weight_history;

    std::vector<DecisionStump> classifiers() const;
    std::vector<double> betas() const;
    std::vector<double> epsilons() const;
    std::vector<bool> included() const;

    /// Human-readable status, e.g. "perfect-fit at step 1".
    std::string status_message() const;
};

using WeakLearner = std::function<DecisionStump(const LabeledDataset &, const ExampleWeights &)>;

struct TrainOptions {
    bool record_weights = false;
    /// Defaults to fit_stump.
    WeakLearner learner;
};

/// Runs p rounds of the reweighting loop: fit, measure epsilon, set beta, multiply the weight of every
/// misclassified example by exp(2 beta). Weights start at 1/n and are never renormalized.
BoostModel train_adaboost(const LabeledDataset &dataset, std::size_t p, const TrainOptions &options = {});

/// Sum of beta_k G_k(x) over the included steps.
double decision_function(const BoostModel &model, std::span<const double> x);

/// Sign of decision_function, with 0 mapped to +1.
int predict(const BoostModel &model, std::span<const double> x);

}  // namespace truthboost
