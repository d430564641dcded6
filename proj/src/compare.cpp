#include "truthboost/compare.hpp"

#include <chrono>
#include <cmath>

namespace truthboost {

double mean_absolute_error(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.empty())
        throw validation_error("mean_absolute_error: vectors must be non-empty and of equal length");
    double sum = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        sum += std::abs(a[k] - b[k]);
    return sum / static_cast<double>(a.size());
}

RiskComparison compare_risk(const OutcomeTree &tree, const NewtonOptions &options) {
    RiskComparison out;
    out.beta_analytic = analytic_betas(tree);
    auto minimum = minimize_risk(tree, options);
    out.beta_min = minimum.beta;
    out.risk_at_analytic = risk_from_tree(tree, out.beta_analytic);
    out.risk_at_min = minimum.report.risk_value;
    out.gap = out.risk_at_analytic - out.risk_at_min;
    if (tree.depth() == 3) {
        out.euler_residual_at_analytic = euler_residual_p3(tree, out.beta_analytic);
        out.euler_residual_at_min = minimum.report.euler_residual;
    }
    out.gradient_norm_at_min = minimum.report.gradient_norm;
    out.converged = minimum.report.converged;
    out.iterations = minimum.report.iterations;
    return out;
}

CompareReport run_compare(const LabeledDataset &dataset, std::size_t p, const CompareInputs &inputs) {
    using clock = std::chrono::steady_clock;
    auto elapsed = [](clock::time_point since) {
        return std::chrono::duration_cast<std::chrono::nanoseconds>(clock::now() - since).count();
    };

    CompareReport report;
    report.generator = inputs.generator;
    report.seed = inputs.seed;
    report.input_digest = inputs.input_digest;
    report.n = dataset.size();
    report.d = dataset.dimension();
    report.p = p;

    auto start = clock::now();
    const auto model = train_adaboost(dataset, p);
    report.timings.train_ns = elapsed(start);
    if (model.status != TrainStatus::complete)
        throw numerical_error("infinite weight: training stopped, " + model.status_message());
    report.betas_iterative = model.betas();

    start = clock::now();
    const auto tree = build_tree(outcome_matrix(dataset, model.classifiers()));
    report.timings.table_ns = elapsed(start);
    report.counts = tree.counts();

    start = clock::now();
    report.betas_analytic = analytic_betas(tree);
    report.timings.analytic_ns = elapsed(start);
    report.mae_iter_vs_analytic = mean_absolute_error(report.betas_iterative, report.betas_analytic);
    report.risk_at_iterative = risk_from_tree(tree, report.betas_iterative);

    start = clock::now();
    report.risk = compare_risk(tree, inputs.newton);
    report.timings.minimize_ns = elapsed(start);
    report.betas_min = report.risk.beta_min;
    if (!report.risk.converged)
        throw numerical_error("non-convergence: Newton solve stopped after " + std::to_string(report.risk.iterations) +
                              " iterations with gradient max-norm " + std::to_string(report.risk.gradient_norm_at_min));

    report.analytic_to_train_time_ratio =
        report.timings.train_ns > 0 ? static_cast<double>(report.timings.analytic_ns) / static_cast<double>(report.timings.train_ns) : 0.0;
    return report;
}

}  // namespace truthboost
