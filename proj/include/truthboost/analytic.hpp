#pragma once

#include "truthboost/outcome_tree.hpp"

#include <array>
#include <cstddef>
#include <vector>

namespace truthboost {

inline constexpr double kLogSpaceThreshold = 30.0;

/// Everything the level recursion produces, kept for reports and identity checks.
struct AnalyticState {
    std::vector<double> betas;  // beta_k = 1/2 ln(b_k / a_k)
    std::vector<double> taus;   // exp(beta_k)
    std::vector<double> a;      // reweighted mass misclassified by G_k
    std::vector<double> b;      // reweighted mass classified correctly by G_k
    /// tilde[j] = c_j * exp(-genealogy(parent(j)) . beta^(k-1)) for j >= 2; tilde[0] and tilde[1] unused.
    std::vector<double> tilde;
    /// Set once some |beta_k| exceeded the log-space threshold and later levels were summed via log-sum-exp.
    bool log_space = false;
};

/// AdaBoost's weights from the configuration counts alone.
///
/// Level k splits every node j of level k-1 into 2j and 2j+1. With the multiplier m_j accumulated from
/// tau_1..tau_{k-1} along the genealogy of j (times tau for a -1 step, divided by tau for a +1 step),
/// a_k = sum c_{2j} m_j and b_k = sum c_{2j+1} m_j, and beta_k minimizes a_k e^beta + b_k e^-beta.
///
/// Once some |beta_k| exceeds log_space_threshold, later levels are accumulated as log-weights and
/// combined with log-sum-exp. Throws numerical_error ("infinite weight at step k") when a_k or b_k is zero.
AnalyticState analytic_state(const OutcomeTree &tree, double log_space_threshold = kLogSpaceThreshold);

/// analytic_state(tree).betas
std::vector<double> analytic_betas(const OutcomeTree &tree);

/// The three explicit p = 3 formulas, evaluated literally with tau_1 = sqrt(c_3 / c_2) and tau_2.
std::array<double, 3> closed_form_p3(const OutcomeTree &tree);

}  // namespace truthboost
