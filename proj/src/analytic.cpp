#include "truthboost/analytic.hpp"

#include "summation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace truthboost {

namespace {

[[noreturn]] void infinite_weight(std::size_t k, double a, double b) {
    throw numerical_error("infinite weight at step " + std::to_string(k) + ": " +
                          (a == 0.0 ? "no reweighted mass is misclassified (a_k = 0)"
                                    : "no reweighted mass is classified correctly (b_k = 0)") +
                          (a == 0.0 && b == 0.0 ? " and b_k = 0" : ""));
}

double log_sum_exp(std::span<const double> logs) {
    double peak = -std::numeric_limits<double>::infinity();
    for (double v : logs)
        peak = std::max(peak, v);
    if (!std::isfinite(peak))
        return peak;
    std::vector<double> shifted;
    shifted.reserve(logs.size());
    for (double v : logs)
        shifted.push_back(std::exp(v - peak));
    return peak + std::log(detail::pairwise_sum(shifted));
}

}  // namespace

AnalyticState analytic_state(const OutcomeTree &tree, double log_space_threshold) {
    const std::size_t p = tree.depth();
    const auto &c = tree.counts();
    // Masses are summed as fractions c_j / n so that scaling every count leaves the result bit-identical.
    const double n = static_cast<double>(tree.n());
    const double log_n = std::log(n);
    auto fraction = [&](std::size_t j) { return static_cast<double>(c[j]) / n; };

    AnalyticState state;
    state.tilde.assign(c.size(), 0.0);
    // Multipliers of the current parent level, both as products of taus and as exponents.
    std::vector<double> multiplier{1.0};
    std::vector<double> exponent{0.0};

    for (std::size_t k = 1; k <= p; ++k) {
        const std::size_t first_parent = std::size_t{1} << (k - 1);
        const std::size_t parents = first_parent;
        std::vector<double> left(parents), right(parents);

        double a = 0.0;
        double b = 0.0;
        double beta = 0.0;
        if (!state.log_space) {
            for (std::size_t q = 0; q < parents; ++q) {
                const std::size_t j = first_parent + q;
                left[q] = fraction(2 * j) * multiplier[q];
                right[q] = fraction(2 * j + 1) * multiplier[q];
                state.tilde[2 * j] = static_cast<double>(c[2 * j]) * multiplier[q];
                state.tilde[2 * j + 1] = static_cast<double>(c[2 * j + 1]) * multiplier[q];
            }
            a = detail::pairwise_sum(left);
            b = detail::pairwise_sum(right);
            if (a == 0.0 || b == 0.0)
                infinite_weight(k, a, b);
            beta = 0.5 * std::log(b / a);
        } else {
            constexpr double kEmpty = -std::numeric_limits<double>::infinity();
            for (std::size_t q = 0; q < parents; ++q) {
                const std::size_t j = first_parent + q;
                left[q] = c[2 * j] ? std::log(static_cast<double>(c[2 * j])) - log_n + exponent[q] : kEmpty;
                right[q] = c[2 * j + 1] ? std::log(static_cast<double>(c[2 * j + 1])) - log_n + exponent[q] : kEmpty;
                state.tilde[2 * j] = c[2 * j] ? std::exp(left[q] + log_n) : 0.0;
                state.tilde[2 * j + 1] = c[2 * j + 1] ? std::exp(right[q] + log_n) : 0.0;
            }
            const double log_a = log_sum_exp(left);
            const double log_b = log_sum_exp(right);
            a = std::exp(log_a);
            b = std::exp(log_b);
            if (std::isinf(log_a) || std::isinf(log_b))
                infinite_weight(k, std::isinf(log_a) ? 0.0 : a, std::isinf(log_b) ? 0.0 : b);
            beta = 0.5 * (log_b - log_a);
        }

        const double tau = std::exp(beta);
        state.betas.push_back(beta);
        state.taus.push_back(tau);
        state.a.push_back(a * n);
        state.b.push_back(b * n);
        if (std::abs(beta) > log_space_threshold)
            state.log_space = true;

        if (k < p) {
            std::vector<double> next_multiplier(2 * parents), next_exponent(2 * parents);
            for (std::size_t q = 0; q < parents; ++q) {
                // child 2j took outcome -1 (weight grows by tau), child 2j+1 took outcome +1
                next_multiplier[2 * q] = multiplier[q] * tau;
                next_multiplier[2 * q + 1] = multiplier[q] / tau;
                next_exponent[2 * q] = exponent[q] + beta;
                next_exponent[2 * q + 1] = exponent[q] - beta;
            }
            multiplier = std::move(next_multiplier);
            exponent = std::move(next_exponent);
        }
    }
    return state;
}

std::vector<double> analytic_betas(const OutcomeTree &tree) {
    return analytic_state(tree, kLogSpaceThreshold).betas;
}

std::array<double, 3> closed_form_p3(const OutcomeTree &tree) {
    if (tree.depth() != 3)
        throw validation_error("closed_form_p3: tree depth must be 3, got " + std::to_string(tree.depth()));
    std::array<double, 16> c{};
    for (std::size_t j = 1; j < 16; ++j)
        c[j] = static_cast<double>(tree.count(j));

    if (c[2] == 0.0 || c[3] == 0.0)
        infinite_weight(1, c[2], c[3]);
    const double tau1 = std::sqrt(c[3] / c[2]);
    const double beta1 = std::log(tau1);

    const double num2 = c[5] * tau1 + c[7] / tau1;
    const double den2 = c[4] * tau1 + c[6] / tau1;
    if (num2 == 0.0 || den2 == 0.0)
        infinite_weight(2, den2, num2);
    const double tau2 = std::sqrt(num2 / den2);
    const double beta2 = std::log(tau2);

    const double num3 = c[9] * tau1 * tau2 + c[11] * tau1 / tau2 + c[13] * tau2 / tau1 + c[15] / (tau1 * tau2);
    const double den3 = c[8] * tau1 * tau2 + c[10] * tau1 / tau2 + c[12] * tau2 / tau1 + c[14] / (tau1 * tau2);
    if (num3 == 0.0 || den3 == 0.0)
        infinite_weight(3, den3, num3);
    const double beta3 = std::log(std::sqrt(num3 / den3));

    return {beta1, beta2, beta3};
}

}  // namespace truthboost
