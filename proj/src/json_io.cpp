#include "truthboost/json_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>

namespace truthboost {

using nlohmann::json;

namespace {

template <typename T>
T field(const json &j, const char *key) {
    if (!j.is_object() || !j.contains(key))
        throw validation_error(std::string("json: missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception &e) {
        throw validation_error(std::string("json: field '") + key + "': " + e.what());
    }
}

// Non-finite doubles are written as null; read them back as NaN rather than failing.
double number_or_nan(const json &j) {
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

std::vector<double> numbers(const json &j, const char *key) {
    std::vector<double> out;
    for (const auto &v : field<json>(j, key))
        out.push_back(number_or_nan(v));
    return out;
}

json optional_triple(const std::optional<std::array<double, 3>> &v) {
    return v ? json(*v) : json(nullptr);
}

std::optional<std::array<double, 3>> optional_triple_from(const json &j, const char *key) {
    const auto &v = field<json>(j, key);
    if (v.is_null())
        return std::nullopt;
    if (!v.is_array() || v.size() != 3)
        throw validation_error(std::string("json: field '") + key + "' must be null or a 3-vector");
    return std::array<double, 3>{number_or_nan(v[0]), number_or_nan(v[1]), number_or_nan(v[2])};
}

void check_version(const json &j) {
    if (j.is_object() && j.contains("schema_version") && j["schema_version"] != kSchemaVersion)
        throw validation_error("json: unsupported schema_version " + j["schema_version"].dump());
}

}  // namespace

json stump_to_json(const DecisionStump &stump) {
    return {{"feature", stump.feature_index}, {"threshold", stump.threshold}, {"polarity", stump.polarity}};
}

DecisionStump stump_from_json(const json &j) {
    DecisionStump stump{field<std::size_t>(j, "feature"), field<double>(j, "threshold"), field<int>(j, "polarity")};
    if (stump.polarity != 1 && stump.polarity != -1)
        throw validation_error("json: stump polarity must be -1 or 1");
    if (!std::isfinite(stump.threshold))
        throw validation_error("json: stump threshold must be finite");
    return stump;
}

json model_to_json(const ModelFile &file) {
    json steps = json::array();
    for (const auto &s : file.model.steps)
        steps.push_back({{"stump", stump_to_json(s.stump)}, {"beta", s.beta}, {"epsilon", s.epsilon}, {"included", s.included}});
    return {
        {"schema_version", kSchemaVersion},
        {"steps", steps},
        {"seed_info", file.seed_info},
        {"n", file.n},
        {"d", file.d},
        {"p", file.model.requested_steps},
        {"status", to_string(file.model.status)},
        {"stopped_at_step", file.model.stopped_at_step},
    };
}

ModelFile model_from_json(const json &j) {
    check_version(j);
    ModelFile file;
    file.n = field<std::size_t>(j, "n");
    file.d = field<std::size_t>(j, "d");
    file.seed_info = j.value("seed_info", json(nullptr));
    file.model.requested_steps = field<std::size_t>(j, "p");
    if (j.contains("status"))
        file.model.status = train_status_from_string(field<std::string>(j, "status"));
    file.model.stopped_at_step = j.value("stopped_at_step", std::size_t{0});
    for (const auto &s : field<json>(j, "steps")) {
        BoostStep step;
        step.stump = stump_from_json(field<json>(s, "stump"));
        step.beta = field<double>(s, "beta");
        step.epsilon = field<double>(s, "epsilon");
        step.included = field<bool>(s, "included");
        if (step.stump.min_dimension() > file.d)
            throw validation_error("json: stump feature index out of range for d");
        file.model.steps.push_back(step);
    }
    if (file.model.steps.empty())
        throw validation_error("json: model has no steps");
    return file;
}

json tree_to_json(const OutcomeTree &tree) {
    json counts = json::array({nullptr});
    for (std::size_t j = 1; j < tree.counts().size(); ++j)
        counts.push_back(tree.counts()[j]);
    return {{"schema_version", kSchemaVersion}, {"p", tree.depth()}, {"counts", counts}};
}

OutcomeTree tree_from_json(const json &j) {
    check_version(j);
    const auto p = field<std::size_t>(j, "p");
    const auto raw = field<json>(j, "counts");
    if (!raw.is_array() || raw.empty())
        throw validation_error("json: tree counts must be a non-empty array");
    std::vector<std::uint64_t> counts(raw.size(), 0);
    if (!raw[0].is_null() && raw[0] != 0)
        throw validation_error("json: tree counts[0] must be null");
    for (std::size_t i = 1; i < raw.size(); ++i) {
        if (!raw[i].is_number_unsigned() && !(raw[i].is_number_integer() && raw[i].get<std::int64_t>() >= 0))
            throw validation_error("json: tree count " + std::to_string(i) + " must be a non-negative integer");
        counts[i] = raw[i].get<std::uint64_t>();
    }
    return OutcomeTree(p, std::move(counts));
}

json analytic_to_json(const AnalyticState &state) {
    return {
        {"schema_version", kSchemaVersion},
        {"betas_analytic", state.betas},
        {"taus", state.taus},
        {"per_level", {{"a_k", state.a}, {"b_k", state.b}}},
        {"log_space", state.log_space},
    };
}

json risk_comparison_to_json(const RiskComparison &c) {
    return {
        {"schema_version", kSchemaVersion},
        {"beta_analytic", c.beta_analytic},
        {"risk_at_analytic", c.risk_at_analytic},
        {"risk_at_min", c.risk_at_min},
        {"gap", c.gap},
        {"euler_residual_at_analytic", optional_triple(c.euler_residual_at_analytic)},
        {"euler_residual_at_min", optional_triple(c.euler_residual_at_min)},
        {"beta_min", c.beta_min},
        {"gradient_norm_at_min", c.gradient_norm_at_min},
        {"converged", c.converged},
        {"iterations", c.iterations},
    };
}

RiskComparison risk_comparison_from_json(const json &j) {
    check_version(j);
    RiskComparison c;
    c.beta_analytic = numbers(j, "beta_analytic");
    c.risk_at_analytic = number_or_nan(field<json>(j, "risk_at_analytic"));
    c.risk_at_min = number_or_nan(field<json>(j, "risk_at_min"));
    c.gap = number_or_nan(field<json>(j, "gap"));
    c.euler_residual_at_analytic = optional_triple_from(j, "euler_residual_at_analytic");
    c.euler_residual_at_min = optional_triple_from(j, "euler_residual_at_min");
    c.beta_min = numbers(j, "beta_min");
    c.gradient_norm_at_min = number_or_nan(field<json>(j, "gradient_norm_at_min"));
    c.converged = field<bool>(j, "converged");
    c.iterations = field<std::size_t>(j, "iterations");
    return c;
}

json compare_report_to_json(const CompareReport &r) {
    json counts = json::array({nullptr});
    for (std::size_t i = 1; i < r.counts.size(); ++i)
        counts.push_back(r.counts[i]);
    return {
        {"schema_version", kSchemaVersion},
        {"tool_version", r.tool_version},
        {"generator", r.generator},
        {"seed", r.seed ? json(*r.seed) : json(nullptr)},
        {"input_digest", r.input_digest},
        {"n", r.n},
        {"d", r.d},
        {"p", r.p},
        {"betas_iterative", r.betas_iterative},
        {"betas_analytic", r.betas_analytic},
        {"betas_min", r.betas_min},
        {"mae_iter_vs_analytic", r.mae_iter_vs_analytic},
        {"risk_at_iterative", r.risk_at_iterative},
        {"risk", risk_comparison_to_json(r.risk)},
        {"counts", counts},
        {"timings_ns",
         {{"train", r.timings.train_ns}, {"table", r.timings.table_ns}, {"analytic", r.timings.analytic_ns}, {"minimize", r.timings.minimize_ns}}},
        {"analytic_to_train_time_ratio", r.analytic_to_train_time_ratio},
    };
}

CompareReport compare_report_from_json(const json &j) {
    check_version(j);
    CompareReport r;
    r.tool_version = field<std::string>(j, "tool_version");
    r.generator = field<std::string>(j, "generator");
    if (const auto seed = field<json>(j, "seed"); !seed.is_null())
        r.seed = seed.get<std::uint64_t>();
    r.input_digest = field<std::string>(j, "input_digest");
    r.n = field<std::size_t>(j, "n");
    r.d = field<std::size_t>(j, "d");
    r.p = field<std::size_t>(j, "p");
    r.betas_iterative = numbers(j, "betas_iterative");
    r.betas_analytic = numbers(j, "betas_analytic");
    r.betas_min = numbers(j, "betas_min");
    r.mae_iter_vs_analytic = field<double>(j, "mae_iter_vs_analytic");
    r.risk_at_iterative = number_or_nan(field<json>(j, "risk_at_iterative"));
    r.risk = risk_comparison_from_json(field<json>(j, "risk"));
    const auto counts = field<json>(j, "counts");
    r.counts.assign(counts.size(), 0);
    for (std::size_t i = 1; i < counts.size(); ++i)
        r.counts[i] = counts[i].get<std::uint64_t>();
    const auto timings = field<json>(j, "timings_ns");
    r.timings = {field<std::int64_t>(timings, "train"), field<std::int64_t>(timings, "table"),
                 field<std::int64_t>(timings, "analytic"), field<std::int64_t>(timings, "minimize")};
    r.analytic_to_train_time_ratio = field<double>(j, "analytic_to_train_time_ratio");
    return r;
}

json packet_reduction_to_json(const PacketReduction &reduction) {
    json packets = json::array();
    for (std::size_t i = 0; i < reduction.classifiers.size(); ++i) {
        const auto &c = reduction.classifiers[i];
        json members = json::array();
        for (const auto &m : c.members)
            members.push_back(stump_to_json(m));
        packets.push_back({{"members", members}, {"betas", c.betas}, {"mode", to_string(reduction.modes_used[i])}});
    }
    return {
        {"schema_version", kSchemaVersion},
        {"packets", packets},
        {"warnings", reduction.warnings},
        {"recombined_betas", reduction.recombined_betas},
        {"recombined_training_accuracy",
         reduction.recombined_training_accuracy ? json(*reduction.recombined_training_accuracy) : json(nullptr)},
    };
}

json read_json(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in)
        throw validation_error("cannot open '" + path.string() + "' for reading");
    try {
        return json::parse(in);
    } catch (const json::parse_error &e) {
        throw parse_error(path.string() + ": " + e.what(), 0);
    }
}

void write_json(const json &j, const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw validation_error("cannot open '" + path.string() + "' for writing");
    out << j.dump(2) << '\n';
    if (!out)
        throw validation_error("failed writing '" + path.string() + "'");
}

}  // namespace truthboost
