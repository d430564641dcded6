#include "truthboost/boosting.hpp"

#include <cmath>

namespace truthboost {

std::string to_string(TrainStatus status) {
    switch (status) {
    case TrainStatus::complete:
        return "complete";
    case TrainStatus::perfect_fit:
        return "perfect-fit";
    case TrainStatus::anti_perfect:
        return "anti-perfect";
    }
    return "unknown";
}

TrainStatus train_status_from_string(const std::string &text) {
    if (text == "complete")
        return TrainStatus::complete;
    if (text == "perfect-fit")
        return TrainStatus::perfect_fit;
    if (text == "anti-perfect")
        return TrainStatus::anti_perfect;
    throw validation_error("unknown training status '" + text + "'");
}

std::vector<DecisionStump> BoostModel::classifiers() const {
    std::vector<DecisionStump> out;
    out.reserve(steps.size());
    for (const auto &s : steps)
        out.push_back(s.stump);
    return out;
}

std::vector<double> BoostModel::betas() const {
    std::vector<double> out;
    out.reserve(steps.size());
    for (const auto &s : steps)
        out.push_back(s.beta);
    return out;
}

std::vector<double> BoostModel::epsilons() const {
    std::vector<double> out;
    out.reserve(steps.size());
    for (const auto &s : steps)
        out.push_back(s.epsilon);
    return out;
}

std::vector<bool> BoostModel::included() const {
    std::vector<bool> out;
    out.reserve(steps.size());
    for (const auto &s : steps)
        out.push_back(s.included);
    return out;
}

std::string BoostModel::status_message() const {
    if (status == TrainStatus::complete)
        return "complete";
    return to_string(status) + " at step " + std::to_string(stopped_at_step);
}

BoostModel train_adaboost(const LabeledDataset &dataset, std::size_t p, const TrainOptions &options) {
    if (p == 0)
        throw validation_error("train_adaboost: p must be at least 1");
    const WeakLearner &learner = options.learner ? options.learner : WeakLearner(fit_stump);
    const std::size_t n = dataset.size();

    BoostModel model;
    model.requested_steps = p;
    std::vector<double> weights(n, 1.0 / static_cast<double>(n));
    std::vector<bool> wrong(n);

    for (std::size_t k = 1; k <= p; ++k) {
        if (options.record_weights)
            model.weight_history.push_back(weights);
        const ExampleWeights current(weights);
        const DecisionStump stump = learner(dataset, current);
        if (stump.min_dimension() > dataset.dimension())
            throw validation_error("train_adaboost: weak learner returned a stump outside the data dimension");

        double wrong_mass = 0.0;
        double total_mass = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            wrong[i] = stump.predict(dataset.row(i)) != dataset.label(i);
            total_mass += weights[i];
            if (wrong[i])
                wrong_mass += weights[i];
        }
        const double epsilon = wrong_mass / total_mass;
        if (epsilon == 0.0 || epsilon == 1.0) {
            model.status = epsilon == 0.0 ? TrainStatus::perfect_fit : TrainStatus::anti_perfect;
            model.stopped_at_step = k;
            if (options.record_weights)
                model.weight_history.pop_back();
            return model;
        }

        const double beta = 0.5 * std::log((1.0 - epsilon) / epsilon);
        const double factor = std::exp(2.0 * beta);
        for (std::size_t i = 0; i < n; ++i)
            if (wrong[i])
                weights[i] *= factor;

        model.steps.push_back({stump, beta, epsilon, epsilon < 0.5});
    }
    return model;
}

double decision_function(const BoostModel &model, std::span<const double> x) {
    double sum = 0.0;
    for (const auto &s : model.steps)
        if (s.included)
            sum += s.beta * stump_predict(s.stump, x);
    return sum;
}

int predict(const BoostModel &model, std::span<const double> x) {
    return decision_function(model, x) >= 0.0 ? 1 : -1;
}

}  // namespace truthboost
