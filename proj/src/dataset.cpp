#include "truthboost/dataset.hpp"

#include "csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <random>

namespace truthboost {

LabeledDataset::LabeledDataset(std::size_t d, std::vector<double> features, std::vector<int> labels)
    : d_(d), features_(std::move(features)), labels_(std::move(labels)) {
    if (d_ == 0)
        throw validation_error("dataset: dimension must be at least 1");
    if (labels_.empty())
        throw validation_error("dataset: at least one example is required");
    if (features_.size() != labels_.size() * d_)
        throw validation_error("dataset: feature count does not match n * d");
    for (std::size_t i = 0; i < labels_.size(); ++i)
        if (labels_[i] != -1 && labels_[i] != 1)
            throw validation_error("dataset: label of example " + std::to_string(i) + " is not -1 or +1");
    for (double v : features_)
        if (!std::isfinite(v))
            throw validation_error("dataset: non-finite feature value");
}

OutcomeMatrix::OutcomeMatrix(std::size_t n, std::size_t p, std::vector<std::int8_t> entries)
    : n_(n), p_(p), entries_(std::move(entries)) {
    if (n_ == 0 || p_ == 0)
        throw validation_error("outcome matrix: needs at least one row and one column");
    if (entries_.size() != n_ * p_)
        throw validation_error("outcome matrix: entry count does not match n * p");
    for (auto e : entries_)
        if (e != -1 && e != 1)
            throw validation_error("outcome matrix: entries must be -1 or +1");
}

OutcomeMatrix OutcomeMatrix::columns(std::size_t first, std::size_t count) const {
    if (count == 0 || first + count > p_)
        throw validation_error("outcome matrix: column range out of bounds");
    std::vector<std::int8_t> out;
    out.reserve(n_ * count);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t k = first; k < first + count; ++k)
            out.push_back(entries_[i * p_ + k]);
    return OutcomeMatrix(n_, count, std::move(out));
}

GaussianSpec GaussianSpec::with_defaults(std::size_t n, std::size_t d, std::uint64_t seed) {
    GaussianSpec spec;
    spec.n = n;
    spec.d = d;
    spec.seed = seed;
    spec.mean_pos.assign(d, 0.0);
    spec.mean_neg.assign(d, 0.0);
    if (d > 0) {
        spec.mean_pos[0] = 1.0;
        spec.mean_neg[0] = -1.0;
    }
    return spec;
}

void GaussianSpec::validate() const {
    if (n < 2)
        throw validation_error("gaussian spec: n must be at least 2");
    if (d < 1)
        throw validation_error("gaussian spec: d must be at least 1");
    if (mean_pos.size() != d || mean_neg.size() != d)
        throw validation_error("gaussian spec: class means must have dimension d");
    if (!(covariance_scale > 0.0) || !std::isfinite(covariance_scale))
        throw validation_error("gaussian spec: covariance_scale must be positive and finite");
    for (std::size_t j = 0; j < d; ++j)
        if (!std::isfinite(mean_pos[j]) || !std::isfinite(mean_neg[j]))
            throw validation_error("gaussian spec: class means must be finite");
}

namespace {

// std::normal_distribution is implementation-defined; this keeps outputs identical across standard libraries.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t bits() { return engine_(); }

    double next() {
        if (spare_) {
            double v = *spare_;
            spare_.reset();
            return v;
        }
        constexpr double kScale = 0x1.0p-53;
        const double u1 = static_cast<double>((engine_() >> 11) + 1) * kScale;  // (0, 1]
        const double u2 = static_cast<double>(engine_() >> 11) * kScale;        // [0, 1)
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(angle);
        return r * std::cos(angle);
    }

private:
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

}  // namespace

LabeledDataset generate_gaussian(const GaussianSpec &spec) {
    spec.validate();
    NormalStream rng(spec.seed);
    const double sigma = std::sqrt(spec.covariance_scale);
    std::vector<double> features;
    features.reserve(spec.n * spec.d);
    std::vector<int> labels;
    labels.reserve(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) {
        const int label = (rng.bits() >> 63) != 0 ? 1 : -1;
        const auto &mean = label > 0 ? spec.mean_pos : spec.mean_neg;
        for (std::size_t j = 0; j < spec.d; ++j)
            features.push_back(mean[j] + sigma * rng.next());
        labels.push_back(label);
    }
    return LabeledDataset(spec.d, std::move(features), std::move(labels));
}

namespace {

int parse_sign(std::string_view field, std::size_t line) {
    if (field == "1" || field == "+1")
        return 1;
    if (field == "-1")
        return -1;
    throw parse_error("expected -1 or 1, got '" + std::string(field) + "'", line);
}

double parse_double(std::string_view field, std::size_t line) {
    double v = 0.0;
    const char *first = field.data();
    const char *last = field.data() + field.size();
    if (first != last && *first == '+')
        ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || field.empty())
        throw parse_error("not a number: '" + std::string(field) + "'", line);
    if (!std::isfinite(v))
        throw parse_error("non-finite value '" + std::string(field) + "'", line);
    return v;
}

std::ifstream open_for_read(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw validation_error("cannot open '" + path.string() + "' for reading");
    return in;
}

std::ofstream open_for_write(const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw validation_error("cannot open '" + path.string() + "' for writing");
    return out;
}

}  // namespace

LabeledDataset read_dataset(std::istream &in) {
    csv::LineReader reader(in);
    auto header = reader.next();
    if (!header)
        throw parse_error("no data rows", 0);
    const auto names = csv::split(*header);
    if (names.size() < 2 || names.back() != "y")
        throw parse_error("header must be x1,...,xd,y", reader.line_number());
    const std::size_t d = names.size() - 1;
    for (std::size_t j = 0; j < d; ++j)
        if (names[j] != "x" + std::to_string(j + 1))
            throw parse_error("header must be x1,...,xd,y", reader.line_number());

    std::vector<double> features;
    std::vector<int> labels;
    while (auto line = reader.next()) {
        const auto fields = csv::split(*line);
        if (fields.size() != d + 1)
            throw parse_error("expected " + std::to_string(d + 1) + " columns, got " + std::to_string(fields.size()),
                              reader.line_number());
        for (std::size_t j = 0; j < d; ++j)
            features.push_back(parse_double(fields[j], reader.line_number()));
        labels.push_back(parse_sign(fields[d], reader.line_number()));
    }
    if (labels.empty())
        throw parse_error("no data rows", 0);
    return LabeledDataset(d, std::move(features), std::move(labels));
}

LabeledDataset read_dataset(const std::filesystem::path &path) {
    auto in = open_for_read(path);
    return read_dataset(in);
}

void write_dataset(const LabeledDataset &dataset, std::ostream &out) {
    const std::size_t d = dataset.dimension();
    for (std::size_t j = 0; j < d; ++j)
        out << 'x' << (j + 1) << ',';
    out << "y\n";
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        for (double v : dataset.row(i))
            out << csv::format_double(v) << ',';
        out << dataset.label(i) << '\n';
    }
}

void write_dataset(const LabeledDataset &dataset, const std::filesystem::path &path) {
    auto out = open_for_write(path);
    write_dataset(dataset, out);
    if (!out)
        throw validation_error("failed writing '" + path.string() + "'");
}

OutcomeMatrix read_outcomes(std::istream &in) {
    csv::LineReader reader(in);
    auto header = reader.next();
    if (!header)
        throw parse_error("no data rows", 0);
    const auto names = csv::split(*header);
    for (std::size_t k = 0; k < names.size(); ++k)
        if (names[k] != "g" + std::to_string(k + 1))
            throw parse_error("header must be g1,...,gp", reader.line_number());
    const std::size_t p = names.size();

    std::vector<std::int8_t> entries;
    std::size_t n = 0;
    while (auto line = reader.next()) {
        const auto fields = csv::split(*line);
        if (fields.size() != p)
            throw parse_error("expected " + std::to_string(p) + " columns, got " + std::to_string(fields.size()),
                              reader.line_number());
        for (auto f : fields)
            entries.push_back(static_cast<std::int8_t>(parse_sign(f, reader.line_number())));
        ++n;
    }
    if (n == 0)
        throw parse_error("no data rows", 0);
    return OutcomeMatrix(n, p, std::move(entries));
}

OutcomeMatrix read_outcomes(const std::filesystem::path &path) {
    auto in = open_for_read(path);
    return read_outcomes(in);
}

void write_outcomes(const OutcomeMatrix &outcomes, std::ostream &out) {
    for (std::size_t k = 0; k < outcomes.cols(); ++k)
        out << (k ? "," : "") << 'g' << (k + 1);
    out << '\n';
    for (std::size_t i = 0; i < outcomes.rows(); ++i) {
        for (std::size_t k = 0; k < outcomes.cols(); ++k)
            out << (k ? "," : "") << outcomes.at(i, k);
        out << '\n';
    }
}

void write_outcomes(const OutcomeMatrix &outcomes, const std::filesystem::path &path) {
    auto out = open_for_write(path);
    write_outcomes(outcomes, out);
    if (!out)
        throw validation_error("failed writing '" + path.string() + "'");
}

}  // namespace truthboost
