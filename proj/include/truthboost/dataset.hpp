#pragma once

#include "truthboost/errors.hpp"

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace truthboost {

/// n examples in R^d with labels in {-1,+1}. Features are stored row-major.
class LabeledDataset {
public:
    LabeledDataset(std::size_t d, std::vector<double> features, std::vector<int> labels);

    std::size_t size() const noexcept { return labels_.size(); }
    std::size_t dimension() const noexcept { return d_; }

    std::span<const double> row(std::size_t i) const { return {features_.data() + i * d_, d_}; }
    int label(std::size_t i) const { return labels_[i]; }

    const std::vector<double> &features() const noexcept { return features_; }
    const std::vector<int> &labels() const noexcept { return labels_; }

    friend bool operator==(const LabeledDataset &, const LabeledDataset &) = default;

private:
    std::size_t d_;
    std::vector<double> features_;
    std::vector<int> labels_;
};

/// Entry (i,k) is the sign of y_i * G_k(x_i): +1 when classifier k is right on example i.
class OutcomeMatrix {
public:
    OutcomeMatrix(std::size_t n, std::size_t p, std::vector<std::int8_t> entries);

    std::size_t rows() const noexcept { return n_; }
    std::size_t cols() const noexcept { return p_; }
    int at(std::size_t i, std::size_t k) const { return entries_[i * p_ + k]; }
    std::span<const std::int8_t> row(std::size_t i) const { return {entries_.data() + i * p_, p_}; }

    /// Columns [first, first + count) as a new matrix.
    OutcomeMatrix columns(std::size_t first, std::size_t count) const;

    friend bool operator==(const OutcomeMatrix &, const OutcomeMatrix &) = default;

private:
    std::size_t n_;
    std::size_t p_;
    std::vector<std::int8_t> entries_;
};

/// Two isotropic Gaussian classes with equal priors. covariance_scale is the per-axis variance.
struct GaussianSpec {
    std::size_t n = 1000;
    std::size_t d = 2;
    std::vector<double> mean_pos;
    std::vector<double> mean_neg;
    double covariance_scale = 1.0;
    std::uint64_t seed = 0;

    /// mean_pos = (+1,0,...), mean_neg = (-1,0,...), unit variance.
    static GaussianSpec with_defaults(std::size_t n, std::size_t d, std::uint64_t seed);

    void validate() const;
};

/// Name of the pseudo-random stream used by generate_gaussian, recorded in reports.
inline constexpr const char *kGeneratorName = "mt19937_64/box-muller";

LabeledDataset generate_gaussian(const GaussianSpec &spec);

LabeledDataset read_dataset(std::istream &in);
LabeledDataset read_dataset(const std::filesystem::path &path);
void write_dataset(const LabeledDataset &dataset, std::ostream &out);
void write_dataset(const LabeledDataset &dataset, const std::filesystem::path &path);

OutcomeMatrix read_outcomes(std::istream &in);
OutcomeMatrix read_outcomes(const std::filesystem::path &path);
void write_outcomes(const OutcomeMatrix &outcomes, std::ostream &out);
void write_outcomes(const OutcomeMatrix &outcomes, const std::filesystem::path &path);

template <typename C>
concept Classifier = requires(const C &c, std::span<const double> x) {
    { c.predict(x) } -> std::convertible_to<int>;
    { c.min_dimension() } -> std::convertible_to<std::size_t>;
};

template <Classifier C>
OutcomeMatrix outcome_matrix(const LabeledDataset &dataset, std::span<const C> classifiers) {
    if (classifiers.empty())
        throw validation_error("outcome_matrix: at least one classifier is required");
    for (const auto &c : classifiers)
        if (c.min_dimension() > dataset.dimension())
            throw validation_error("outcome_matrix: classifier needs dimension " + std::to_string(c.min_dimension()) +
                                   ", dataset has " + std::to_string(dataset.dimension()));

    const std::size_t n = dataset.size();
    const std::size_t p = classifiers.size();
    std::vector<std::int8_t> entries(n * p);
    for (std::size_t i = 0; i < n; ++i) {
        const auto x = dataset.row(i);
        for (std::size_t k = 0; k < p; ++k)
            entries[i * p + k] = classifiers[k].predict(x) == dataset.label(i) ? 1 : -1;
    }
    return OutcomeMatrix(n, p, std::move(entries));
}

template <Classifier C>
OutcomeMatrix outcome_matrix(const LabeledDataset &dataset, const std::vector<C> &classifiers) {
    return outcome_matrix(dataset, std::span<const C>(classifiers));
}

}  // namespace truthboost
