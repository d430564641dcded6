#include "truthboost/risk.hpp"

#include "truthboost/analytic.hpp"
#include "summation.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace truthboost {

namespace {

void check_beta(const OutcomeTree &tree, std::span<const double> beta) {
    if (beta.size() != tree.depth())
        throw validation_error("risk: beta has dimension " + std::to_string(beta.size()) + ", tree depth is " +
                               std::to_string(tree.depth()));
    for (double b : beta)
        if (!std::isfinite(b))
            throw validation_error("risk: beta must be finite");
}

// -genealogy(j) . beta for every leaf, in leaf order.
std::vector<double> leaf_exponents(std::size_t depth, std::span<const double> beta) {
    std::vector<double> s{0.0};
    for (std::size_t k = 0; k < depth; ++k) {
        std::vector<double> next(2 * s.size());
        for (std::size_t q = 0; q < s.size(); ++q) {
            next[2 * q] = s[q] + beta[k];
            next[2 * q + 1] = s[q] - beta[k];
        }
        s = std::move(next);
    }
    return s;
}

// Sign of classifier k (0-based) on leaf offset q of a depth-p tree.
int leaf_sign(std::size_t depth, std::size_t q, std::size_t k) {
    return ((q >> (depth - 1 - k)) & 1u) != 0 ? 1 : -1;
}

// c_j exp(-genealogy(j) . beta) per leaf.
std::vector<double> leaf_masses(const OutcomeTree &tree, std::span<const double> beta) {
    const auto leaves = tree.leaves();
    auto s = leaf_exponents(tree.depth(), beta);
    for (std::size_t q = 0; q < s.size(); ++q)
        s[q] = leaves[q] ? static_cast<double>(leaves[q]) * std::exp(s[q]) : 0.0;
    return s;
}

double max_norm(std::span<const double> v) {
    double m = 0.0;
    for (double x : v)
        m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

XCoordinates to_x_coordinates(std::span<const double> beta) {
    if (beta.size() != 3)
        throw validation_error("X-coordinates are defined for three weights only");
    XCoordinates x;
    x.x1 = -beta[0] + beta[1] + beta[2];
    x.x2 = beta[0] - beta[1] + beta[2];
    x.x3 = beta[0] + beta[1] - beta[2];
    x.x0 = beta[0] + beta[1] + beta[2];
    return x;
}

double risk_from_tree(const OutcomeTree &tree, std::span<const double> beta) {
    check_beta(tree, beta);
    const auto masses = leaf_masses(tree, beta);
    return detail::pairwise_sum(masses) / static_cast<double>(tree.n());
}

double risk_bruteforce(const OutcomeMatrix &outcomes, std::span<const double> beta) {
    if (beta.size() != outcomes.cols())
        throw validation_error("risk_bruteforce: beta dimension does not match the classifier count");
    double total = 0.0;
    for (std::size_t i = 0; i < outcomes.rows(); ++i) {
        double margin = 0.0;
        for (std::size_t k = 0; k < outcomes.cols(); ++k)
            margin += beta[k] * outcomes.at(i, k);
        total += std::exp(-margin);
    }
    return total / static_cast<double>(outcomes.rows());
}

std::vector<double> risk_gradient(const OutcomeTree &tree, std::span<const double> beta) {
    check_beta(tree, beta);
    const std::size_t p = tree.depth();
    const auto masses = leaf_masses(tree, beta);
    const double inv_n = 1.0 / static_cast<double>(tree.n());
    std::vector<double> gradient(p);
    std::vector<double> terms(masses.size());
    for (std::size_t k = 0; k < p; ++k) {
        for (std::size_t q = 0; q < masses.size(); ++q)
            terms[q] = -leaf_sign(p, q, k) * masses[q];
        gradient[k] = detail::pairwise_sum(terms) * inv_n;
    }
    return gradient;
}

std::vector<double> risk_hessian(const OutcomeTree &tree, std::span<const double> beta) {
    check_beta(tree, beta);
    const std::size_t p = tree.depth();
    const auto masses = leaf_masses(tree, beta);
    const double inv_n = 1.0 / static_cast<double>(tree.n());
    std::vector<double> hessian(p * p);
    std::vector<double> terms(masses.size());
    for (std::size_t k = 0; k < p; ++k)
        for (std::size_t l = k; l < p; ++l) {
            for (std::size_t q = 0; q < masses.size(); ++q)
                terms[q] = leaf_sign(p, q, k) * leaf_sign(p, q, l) * masses[q];
            hessian[k * p + l] = hessian[l * p + k] = detail::pairwise_sum(terms) * inv_n;
        }
    return hessian;
}

std::array<double, 3> euler_residual_p3(const OutcomeTree &tree, std::span<const double> beta) {
    if (tree.depth() != 3)
        throw validation_error("euler_residual_p3: tree depth must be 3, got " + std::to_string(tree.depth()));
    check_beta(tree, beta);
    const auto x = to_x_coordinates(beta);
    auto c = [&](std::size_t j) { return static_cast<double>(tree.count(j)); };
    const double shared = -c(15) * std::exp(-x.x0) + c(8) * std::exp(x.x0);
    return {
        -c(11) * std::exp(-x.x1) + c(12) * std::exp(x.x1) + shared,
        -c(13) * std::exp(-x.x2) + c(10) * std::exp(x.x2) + shared,
        -c(14) * std::exp(-x.x3) + c(9) * std::exp(x.x3) + shared,
    };
}

RiskReport evaluate_risk(const OutcomeTree &tree, std::span<const double> beta) {
    RiskReport report;
    report.risk_value = risk_from_tree(tree, beta);
    report.gradient = risk_gradient(tree, beta);
    report.gradient_norm = max_norm(report.gradient);
    if (tree.depth() == 3)
        report.euler_residual = euler_residual_p3(tree, beta);
    return report;
}

Minimum minimize_risk(const OutcomeTree &tree, std::span<const double> init, const NewtonOptions &options) {
    check_beta(tree, init);
    const auto leaves = tree.leaves();
    for (std::size_t q = 0; q < leaves.size(); ++q)
        if (leaves[q] == 0)
            throw numerical_error("coercivity: leaf c_" + std::to_string(leaves.size() + q) +
                                  " is empty, the risk may have no minimizer (possibly unbounded below direction exists)");

    const std::size_t p = tree.depth();
    WeightVector beta(init.begin(), init.end());
    double risk = risk_from_tree(tree, beta);
    std::vector<double> gradient = risk_gradient(tree, beta);
    std::size_t iterations = 0;
    bool converged = max_norm(gradient) <= options.tolerance;

    while (!converged && iterations < options.max_iterations) {
        const auto hessian = risk_hessian(tree, beta);
        const Eigen::Map<const Eigen::MatrixXd> h(hessian.data(), static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
        const Eigen::Map<const Eigen::VectorXd> g(gradient.data(), static_cast<Eigen::Index>(p));
        const Eigen::VectorXd step = h.ldlt().solve(-g);
        if (!step.allFinite())
            break;
        const double decrement = -g.dot(step);

        WeightVector trial(p);
        auto trial_at = [&](double t) {
            for (std::size_t k = 0; k < p; ++k)
                trial[k] = beta[k] + t * step(static_cast<Eigen::Index>(k));
        };

        bool accepted = false;
        // Near the optimum the predicted decrease is below the rounding noise of the risk itself;
        // the full Newton step is then taken as is.
        if (decrement <= 1e-12 * risk) {
            trial_at(1.0);
            accepted = true;
        } else {
            double t = 1.0;
            for (std::size_t halving = 0; halving <= options.max_halvings; ++halving, t *= 0.5) {
                trial_at(t);
                if (risk_from_tree(tree, trial) <= risk - options.armijo_slope * t * decrement) {
                    accepted = true;
                    break;
                }
            }
            if (!accepted) {
                trial_at(1.0);
                accepted = max_norm(risk_gradient(tree, trial)) < max_norm(gradient);
            }
        }
        if (!accepted)
            break;

        beta = trial;
        ++iterations;
        risk = risk_from_tree(tree, beta);
        gradient = risk_gradient(tree, beta);
        converged = max_norm(gradient) <= options.tolerance;
    }

    Minimum result;
    result.report = evaluate_risk(tree, beta);
    result.report.converged = converged;
    result.report.iterations = iterations;
    result.beta = std::move(beta);
    return result;
}

Minimum minimize_risk(const OutcomeTree &tree, const NewtonOptions &options) {
    const WeightVector zero(tree.depth(), 0.0);
    return minimize_risk(tree, zero, options);
}

std::string to_string(PacketMode mode) {
    return mode == PacketMode::analytic ? "analytic" : "minimum";
}

PacketMode packet_mode_from_string(const std::string &text) {
    if (text == "analytic")
        return PacketMode::analytic;
    if (text == "minimum")
        return PacketMode::minimum;
    throw validation_error("unknown packet mode '" + text + "' (expected analytic or minimum)");
}

int PacketClassifier::predict(std::span<const double> x) const {
    double sum = 0.0;
    for (std::size_t k = 0; k < members.size(); ++k)
        sum += betas[k] * members[k].predict(x);
    return sum >= 0.0 ? 1 : -1;
}

std::size_t PacketClassifier::min_dimension() const noexcept {
    std::size_t d = 0;
    for (const auto &m : members)
        d = std::max(d, m.min_dimension());
    return d;
}

PacketReduction packet_reduce(const LabeledDataset &dataset, std::span<const DecisionStump> classifiers, PacketMode mode) {
    if (classifiers.empty())
        throw validation_error("packet_reduce: no classifiers");

    PacketReduction out;
    std::size_t start = 0;
    for (; start + 3 <= classifiers.size(); start += 3) {
        const auto triple = classifiers.subspan(start, 3);
        const auto tree = build_tree(outcome_matrix(dataset, triple));
        const std::string label = "packet " + std::to_string(start / 3 + 1);

        PacketClassifier packet{{triple.begin(), triple.end()}, {}};
        PacketMode used = mode;
        if (mode == PacketMode::minimum) {
            try {
                auto minimum = minimize_risk(tree);
                if (minimum.report.converged)
                    packet.betas = std::move(minimum.beta);
                else
                    out.warnings.push_back(label + ": Newton solve did not converge, using analytic weights");
            } catch (const numerical_error &e) {
                out.warnings.push_back(label + ": " + e.what() + "; using analytic weights");
            }
            if (packet.betas.empty())
                used = PacketMode::analytic;
        }
        if (packet.betas.empty())
            packet.betas = analytic_betas(tree);
        out.classifiers.push_back(std::move(packet));
        out.modes_used.push_back(used);
    }
    for (; start < classifiers.size(); ++start) {
        out.classifiers.push_back({{classifiers[start]}, {1.0}});
        out.modes_used.push_back(mode);
    }

    try {
        const auto reduced_outcomes = outcome_matrix(dataset, out.classifiers);
        out.recombined_betas = analytic_betas(build_tree(reduced_outcomes));
        std::size_t correct = 0;
        for (std::size_t i = 0; i < reduced_outcomes.rows(); ++i) {
            double margin = 0.0;
            for (std::size_t k = 0; k < reduced_outcomes.cols(); ++k)
                if (out.recombined_betas[k] > 0.0)
                    margin += out.recombined_betas[k] * reduced_outcomes.at(i, k);
            // margin = y * sum(beta G); a zero sum predicts +1, which is right iff y = +1
            const int vote = margin > 0.0 ? 1 : margin < 0.0 ? -1 : (dataset.label(i) > 0 ? 1 : -1);
            correct += vote > 0 ? 1 : 0;
        }
        out.recombined_training_accuracy = static_cast<double>(correct) / static_cast<double>(dataset.size());
    } catch (const numerical_error &e) {
        out.warnings.push_back(std::string("recombination: ") + e.what());
    }
    return out;
}

}  // namespace truthboost
