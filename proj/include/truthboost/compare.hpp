#pragma once

#include "truthboost/analytic.hpp"
#include "truthboost/boosting.hpp"
#include "truthboost/dataset.hpp"
#include "truthboost/outcome_tree.hpp"
#include "truthboost/risk.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace truthboost {

inline constexpr const char *kToolVersion = "0.1.0";

/// Boosting weights versus the exact risk minimizer on one tree.
struct RiskComparison {
    std::vector<double> beta_analytic;
    std::vector<double> beta_min;
    double risk_at_analytic = 0.0;
    double risk_at_min = 0.0;
    double gap = 0.0;  // risk_at_analytic - risk_at_min
    std::optional<std::array<double, 3>> euler_residual_at_analytic;
    std::optional<std::array<double, 3>> euler_residual_at_min;
    double gradient_norm_at_min = 0.0;
    bool converged = false;
    std::size_t iterations = 0;

    friend bool operator==(const RiskComparison &, const RiskComparison &) = default;
};

/// Throws numerical_error when the analytic weights are infinite or the risk has no minimizer.
RiskComparison compare_risk(const OutcomeTree &tree, const NewtonOptions &options = {});

struct PhaseTimings {
    std::int64_t train_ns = 0;
    std::int64_t table_ns = 0;
    std::int64_t analytic_ns = 0;
    std::int64_t minimize_ns = 0;

    friend bool operator==(const PhaseTimings &, const PhaseTimings &) = default;
};

struct CompareReport {
    std::string tool_version = kToolVersion;
    std::string generator;            // empty when the dataset did not come from generate_gaussian
    std::optional<std::uint64_t> seed;
    std::string input_digest;         // e.g. "sha256:..." of the dataset file, when known
    std::size_t n = 0;
    std::size_t d = 0;
    std::size_t p = 0;
    std::vector<double> betas_iterative;
    std::vector<double> betas_analytic;
    std::vector<double> betas_min;
    double mae_iter_vs_analytic = 0.0;
    double risk_at_iterative = 0.0;
    RiskComparison risk;
    std::vector<std::uint64_t> counts;  // flat tree, slot 0 unused
    PhaseTimings timings;
    /// analytic_ns / train_ns; informational only.
    double analytic_to_train_time_ratio = 0.0;

    friend bool operator==(const CompareReport &, const CompareReport &) = default;
};

struct CompareInputs {
    std::string generator;
    std::optional<std::uint64_t> seed;
    std::string input_digest;
    NewtonOptions newton;
};

/// train_adaboost -> outcome matrix -> build_tree -> analytic_betas -> minimize_risk.
///
/// Throws numerical_error if training stops early (perfect or anti-perfect weak learner) or if a later
/// stage hits infinite weights / a missing minimizer.
CompareReport run_compare(const LabeledDataset &dataset, std::size_t p, const CompareInputs &inputs = {});

double mean_absolute_error(std::span<const double> a, std::span<const double> b);

}  // namespace truthboost
