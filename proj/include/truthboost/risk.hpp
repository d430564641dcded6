#pragma once

#include "truthboost/dataset.hpp"
#include "truthboost/outcome_tree.hpp"
#include "truthboost/weak_learner.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace truthboost {

/// Classifier weights beta_1..beta_p.
using WeightVector = std::vector<double>;

/// p = 3 change of variables in which the risk separates into four cosh-like terms.
struct XCoordinates {
    double x0 = 0.0;  // beta_1 + beta_2 + beta_3
    double x1 = 0.0;  // -beta_1 + beta_2 + beta_3
    double x2 = 0.0;  // beta_1 - beta_2 + beta_3
    double x3 = 0.0;  // beta_1 + beta_2 - beta_3
};

XCoordinates to_x_coordinates(std::span<const double> beta);

/// (1/n) sum over leaves of c_j exp(-genealogy(j) . beta).
double risk_from_tree(const OutcomeTree &tree, std::span<const double> beta);

/// (1/n) sum over examples of exp(-sum_k beta_k o_ik). Independent of the tree path.
double risk_bruteforce(const OutcomeMatrix &outcomes, std::span<const double> beta);

std::vector<double> risk_gradient(const OutcomeTree &tree, std::span<const double> beta);

/// Row-major p x p Hessian of risk_from_tree.
std::vector<double> risk_hessian(const OutcomeTree &tree, std::span<const double> beta);

/// Left-hand sides of the three stationarity equations in X-coordinates (unnormalized, i.e. n * dR/dX).
std::array<double, 3> euler_residual_p3(const OutcomeTree &tree, std::span<const double> beta);

struct RiskReport {
    double risk_value = 0.0;
    std::vector<double> gradient;
    double gradient_norm = 0.0;  // max-norm
    std::optional<std::array<double, 3>> euler_residual;
    bool converged = false;
    std::size_t iterations = 0;
};

struct NewtonOptions {
    double tolerance = 1e-12;       // on the gradient max-norm
    std::size_t max_iterations = 100;
    std::size_t max_halvings = 60;
    double armijo_slope = 1e-4;
};

struct Minimum {
    WeightVector beta;
    RiskReport report;
};

/// Damped Newton with Armijo backtracking on the (strictly convex) risk.
///
/// Requires every leaf count to be positive; otherwise the infimum may not be attained and a
/// numerical_error ("coercivity ...") is thrown. Running out of iterations is reported through
/// report.converged, not thrown.
Minimum minimize_risk(const OutcomeTree &tree, std::span<const double> init, const NewtonOptions &options = {});

/// minimize_risk starting from beta = 0.
Minimum minimize_risk(const OutcomeTree &tree, const NewtonOptions &options = {});

/// Evaluation report (risk, gradient, Euler residual for p = 3) at a given point.
RiskReport evaluate_risk(const OutcomeTree &tree, std::span<const double> beta);

enum class PacketMode {
    analytic,  // the boosting weights of the triple
    minimum,   // the exact risk minimizer of the triple
};

std::string to_string(PacketMode mode);
PacketMode packet_mode_from_string(const std::string &text);

/// sign(sum beta_k G_k(x)) over its members, with sign(0) = +1.
struct PacketClassifier {
    std::vector<DecisionStump> members;
    std::vector<double> betas;

    int predict(std::span<const double> x) const;
    std::size_t min_dimension() const noexcept;
};

struct PacketReduction {
    std::vector<PacketClassifier> classifiers;
    std::vector<PacketMode> modes_used;  // per reduced classifier; remainders report the requested mode
    std::vector<std::string> warnings;
    /// Boosting weights of the reduced classifiers, from their own outcome tree.
    std::vector<double> recombined_betas;
    /// Training accuracy of sign(sum recombined_betas G) over the positive-weight reduced classifiers;
    /// empty when the recombination tree is degenerate.
    std::optional<double> recombined_training_accuracy;
};

/// Replaces each consecutive triple of classifiers by one weighted vote; a trailing group of one or two
/// passes through unchanged. In minimum mode a packet whose tree has an empty leaf (or whose Newton solve
/// does not converge) falls back to analytic weights and records a warning.
PacketReduction packet_reduce(const LabeledDataset &dataset, std::span<const DecisionStump> classifiers, PacketMode mode);

}  // namespace truthboost
