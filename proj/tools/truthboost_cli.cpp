// truthboost: command-line front end. Every subcommand reads files, runs one stage, and writes JSON/CSV.
// Exit codes: 0 success, 2 validation error, 3 numerical error. Failures print a one-line JSON object on stderr.

#include "truthboost/analytic.hpp"
#include "truthboost/boosting.hpp"
#include "truthboost/compare.hpp"
#include "truthboost/dataset.hpp"
#include "truthboost/json_io.hpp"
#include "truthboost/outcome_tree.hpp"
#include "truthboost/risk.hpp"

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace truthboost;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

/// Raised after a partial result was written, to exit with a numerical status.
struct numerical_exit : numerical_error {
    using numerical_error::numerical_error;
};

std::string sha256_hex(const std::string &bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int length = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 failed");
    std::string hex;
    char buf[3];
    for (unsigned int i = 0; i < length; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        hex += buf;
    }
    return "sha256:" + hex;
}

std::string file_digest(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw validation_error("cannot open '" + path.string() + "' for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return sha256_hex(buffer.str());
}

fs::path sidecar_path(const fs::path &data) {
    return fs::path(data.string() + ".meta.json");
}

json load_seed_info(const fs::path &data) {
    const auto sidecar = sidecar_path(data);
    return fs::exists(sidecar) ? read_json(sidecar) : json(nullptr);
}

void emit(const json &j, const std::string &out) {
    if (out.empty())
        std::cout << j.dump(2) << '\n';
    else
        write_json(j, out);
}

std::vector<double> parse_vector(const std::string &text, std::size_t expected, const char *what) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            values.push_back(std::stod(item, &used));
            if (used != item.size())
                throw std::invalid_argument(item);
        } catch (const std::exception &) {
            throw validation_error(std::string(what) + ": cannot parse '" + item + "' as a number");
        }
    }
    if (expected != 0 && values.size() != expected)
        throw validation_error(std::string(what) + ": expected " + std::to_string(expected) + " values, got " +
                               std::to_string(values.size()));
    return values;
}

/// Decimal digits cut (not rounded) after `digits` places, or rounded to nearest.
std::string format_fixed(double v, int digits, bool truncate) {
    char buf[64];
    if (!truncate) {
        std::snprintf(buf, sizeof buf, "%.*f", digits, v);
        return buf;
    }
    std::snprintf(buf, sizeof buf, "%.*f", digits + 6, v);
    std::string s(buf);
    return s.substr(0, s.size() - 6);
}

// -- subcommands -------------------------------------------------------------------------------------------

struct GenerateArgs {
    std::size_t n = 1000;
    std::size_t d = 2;
    std::uint64_t seed = 0;
    std::string mean_pos, mean_neg;
    double scale = 1.0;
    std::string out;
};

void run_generate(const GenerateArgs &a) {
    auto spec = GaussianSpec::with_defaults(a.n, a.d, a.seed);
    if (!a.mean_pos.empty())
        spec.mean_pos = parse_vector(a.mean_pos, a.d, "--mean-pos");
    if (!a.mean_neg.empty())
        spec.mean_neg = parse_vector(a.mean_neg, a.d, "--mean-neg");
    spec.covariance_scale = a.scale;
    const auto dataset = generate_gaussian(spec);
    write_dataset(dataset, fs::path(a.out));
    write_json({{"schema_version", kSchemaVersion},
                {"generator", kGeneratorName},
                {"seed", spec.seed},
                {"n", spec.n},
                {"d", spec.d},
                {"mean_pos", spec.mean_pos},
                {"mean_neg", spec.mean_neg},
                {"covariance_scale", spec.covariance_scale},
                {"tool_version", kToolVersion},
                {"digest", file_digest(a.out)}},
               sidecar_path(a.out));
}

struct TrainArgs {
    std::string data;
    std::size_t p = 3;
    std::string out;
};

void run_train(const TrainArgs &a) {
    const auto dataset = read_dataset(fs::path(a.data));
    ModelFile file{train_adaboost(dataset, a.p), dataset.size(), dataset.dimension(), load_seed_info(a.data)};
    emit(model_to_json(file), a.out);
    if (file.model.status != TrainStatus::complete)
        throw numerical_exit("infinite weight: " + file.model.status_message());
}

OutcomeMatrix outcomes_from(const std::string &data, const std::string &model) {
    const auto dataset = read_dataset(fs::path(data));
    const auto file = model_from_json(read_json(model));
    if (file.d != dataset.dimension())
        throw validation_error("model was trained on d = " + std::to_string(file.d) + ", dataset has d = " +
                               std::to_string(dataset.dimension()));
    return outcome_matrix(dataset, file.model.classifiers());
}

struct OutcomesArgs {
    std::string data, model, out;
};

void run_outcomes(const OutcomesArgs &a) {
    write_outcomes(outcomes_from(a.data, a.model), fs::path(a.out));
}

struct TableArgs {
    std::string data, model, outcomes, out, csv;
};

void run_table(const TableArgs &a) {
    const bool from_model = !a.data.empty() || !a.model.empty();
    if (from_model == !a.outcomes.empty())
        throw validation_error("table: give either --data and --model, or --outcomes");
    if (from_model && (a.data.empty() || a.model.empty()))
        throw validation_error("table: --data and --model go together");
    const auto tree = build_tree(from_model ? outcomes_from(a.data, a.model) : read_outcomes(fs::path(a.outcomes)));
    emit(tree_to_json(tree), a.out);
    if (!a.csv.empty()) {
        std::ofstream csv(a.csv);
        if (!csv)
            throw validation_error("cannot open '" + a.csv + "' for writing");
        write_truth_table_p3(tree, csv);
    }
}

struct AnalyticArgs {
    std::string tree, out;
    std::string format = "json";
    int digits = 3;
    std::string rounding = "truncate";
};

void run_analytic(const AnalyticArgs &a) {
    const auto tree = tree_from_json(read_json(a.tree));
    const auto state = analytic_state(tree);
    if (a.format == "text") {
        std::string line;
        for (double b : state.betas)
            line += (line.empty() ? "" : " ") + format_fixed(b, a.digits, a.rounding == "truncate");
        std::cout << line << '\n';
        if (!a.out.empty())
            write_json(analytic_to_json(state), a.out);
        return;
    }
    emit(analytic_to_json(state), a.out);
}

struct MinimizeArgs {
    std::string tree, out;
    double tol = 1e-12;
    std::size_t max_iters = 100;
};

void run_minimize(const MinimizeArgs &a) {
    const auto tree = tree_from_json(read_json(a.tree));
    NewtonOptions options;
    options.tolerance = a.tol;
    options.max_iterations = a.max_iters;
    const auto comparison = compare_risk(tree, options);
    emit(risk_comparison_to_json(comparison), a.out);
    if (!comparison.converged)
        throw numerical_exit("non-convergence: Newton solve stopped after " + std::to_string(comparison.iterations) +
                             " iterations");
}

struct RiskArgs {
    std::string tree, beta, out;
};

void run_risk(const RiskArgs &a) {
    const auto tree = tree_from_json(read_json(a.tree));
    const auto beta = parse_vector(a.beta, tree.depth(), "--beta");
    const auto report = evaluate_risk(tree, beta);
    json j = {{"schema_version", kSchemaVersion},
              {"beta", beta},
              {"risk_value", report.risk_value},
              {"gradient", report.gradient},
              {"gradient_norm", report.gradient_norm},
              {"euler_residual", report.euler_residual ? json(*report.euler_residual) : json(nullptr)}};
    emit(j, a.out);
}

struct CompareArgs {
    std::string data;
    std::size_t n = 1000;
    std::size_t d = 2;
    std::optional<std::uint64_t> seed;
    std::size_t p = 3;
    std::string out;
};

void run_compare_cmd(const CompareArgs &a) {
    CompareInputs inputs;
    std::optional<LabeledDataset> dataset;
    if (!a.data.empty()) {
        if (a.seed)
            throw validation_error("compare: --seed only applies when generating (omit --data)");
        dataset = read_dataset(fs::path(a.data));
        inputs.input_digest = file_digest(a.data);
        if (const auto info = load_seed_info(a.data); info.is_object()) {
            inputs.generator = info.value("generator", "");
            if (info.contains("seed"))
                inputs.seed = info["seed"].get<std::uint64_t>();
        }
    } else {
        if (!a.seed)
            throw validation_error("compare: give --data, or --seed (with optional --n/--d) to generate");
        dataset = generate_gaussian(GaussianSpec::with_defaults(a.n, a.d, *a.seed));
        std::ostringstream csv;
        write_dataset(*dataset, csv);
        inputs.input_digest = sha256_hex(csv.str());
        inputs.generator = kGeneratorName;
        inputs.seed = a.seed;
    }
    emit(compare_report_to_json(run_compare(*dataset, a.p, inputs)), a.out);
}

struct ReduceArgs {
    std::string data, model, out;
    std::string mode = "analytic";
};

void run_reduce(const ReduceArgs &a) {
    const auto dataset = read_dataset(fs::path(a.data));
    const auto file = model_from_json(read_json(a.model));
    const auto stumps = file.model.classifiers();
    emit(packet_reduction_to_json(packet_reduce(dataset, stumps, packet_mode_from_string(a.mode))), a.out);
}

int fail(const char *kind, const std::string &message, int code) {
    std::cerr << json{{"error", kind}, {"message", message}, {"exit_code", code}}.dump() << std::endl;
    return code;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"truthboost: AdaBoost weights from truth tables, and the exact exponential-risk minimizer"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    GenerateArgs gen;
    auto *generate = app.add_subcommand("generate", "Sample a two-class Gaussian dataset (CSV)");
    generate->add_option("--n", gen.n, "Number of examples")->default_val(1000);
    generate->add_option("--d", gen.d, "Dimension")->default_val(2);
    generate->add_option("--seed", gen.seed, "PRNG seed")->required();
    generate->add_option("--mean-pos", gen.mean_pos, "Comma-separated mean of the +1 class (default 1,0,...)");
    generate->add_option("--mean-neg", gen.mean_neg, "Comma-separated mean of the -1 class (default -1,0,...)");
    generate->add_option("--scale", gen.scale, "Per-axis variance")->default_val(1.0);
    generate->add_option("--out", gen.out, "Output CSV")->required();

    TrainArgs train;
    auto *train_cmd = app.add_subcommand("train", "Run AdaBoost with decision stumps (model JSON)");
    train_cmd->add_option("--data", train.data, "Dataset CSV")->required();
    train_cmd->add_option("--p", train.p, "Number of boosting steps")->default_val(3);
    train_cmd->add_option("--out", train.out, "Output model JSON (stdout if omitted)");

    OutcomesArgs outs;
    auto *outcomes = app.add_subcommand("outcomes", "Export the outcome matrix sign(y G_k(x)) as CSV");
    outcomes->add_option("--data", outs.data, "Dataset CSV")->required();
    outcomes->add_option("--model", outs.model, "Model JSON")->required();
    outcomes->add_option("--out", outs.out, "Output CSV")->required();

    TableArgs table;
    auto *table_cmd = app.add_subcommand("table", "Build the truth-table tree (tree JSON)");
    table_cmd->add_option("--data", table.data, "Dataset CSV (with --model)");
    table_cmd->add_option("--model", table.model, "Model JSON (with --data)");
    table_cmd->add_option("--outcomes", table.outcomes, "Outcome-matrix CSV instead of --data/--model");
    table_cmd->add_option("--out", table.out, "Output tree JSON (stdout if omitted)");
    table_cmd->add_option("--csv", table.csv, "Also write the p = 3 truth table as CSV");

    AnalyticArgs analytic;
    auto *analytic_cmd = app.add_subcommand("analytic", "Boosting weights from a tree JSON");
    analytic_cmd->add_option("--tree", analytic.tree, "Tree JSON")->required();
    analytic_cmd->add_option("--out", analytic.out, "Output JSON (stdout if omitted and --format json)");
    analytic_cmd->add_option("--format", analytic.format, "json or text")->check(CLI::IsMember({"json", "text"}));
    analytic_cmd->add_option("--digits", analytic.digits, "Decimal places in text output")->check(CLI::Range(0, 17));
    analytic_cmd->add_option("--rounding", analytic.rounding, "truncate or nearest, for text output")
        ->check(CLI::IsMember({"truncate", "nearest"}));

    MinimizeArgs minimize;
    auto *minimize_cmd = app.add_subcommand("minimize", "Exact risk minimizer vs the boosting weights");
    minimize_cmd->add_option("--tree", minimize.tree, "Tree JSON")->required();
    minimize_cmd->add_option("--tol", minimize.tol, "Gradient max-norm tolerance")->default_val(1e-12);
    minimize_cmd->add_option("--max-iters", minimize.max_iters, "Newton iteration cap")->default_val(100);
    minimize_cmd->add_option("--out", minimize.out, "Output JSON (stdout if omitted)");

    RiskArgs risk;
    auto *risk_cmd = app.add_subcommand("risk", "Risk, gradient and Euler residual at a given beta");
    risk_cmd->add_option("--tree", risk.tree, "Tree JSON")->required();
    risk_cmd->add_option("--beta", risk.beta, "Comma-separated weights")->required();
    risk_cmd->add_option("--out", risk.out, "Output JSON (stdout if omitted)");

    CompareArgs cmp;
    auto *compare_cmd = app.add_subcommand("compare", "Iterative vs analytic vs minimizer, end to end");
    compare_cmd->add_option("--data", cmp.data, "Dataset CSV (otherwise generated from --n/--d/--seed)");
    compare_cmd->add_option("--n", cmp.n, "Examples to generate")->default_val(1000);
    compare_cmd->add_option("--d", cmp.d, "Dimension to generate")->default_val(2);
    compare_cmd->add_option("--seed", cmp.seed, "Generation seed");
    compare_cmd->add_option("--p", cmp.p, "Number of boosting steps")->default_val(3);
    compare_cmd->add_option("--out", cmp.out, "Output report JSON (stdout if omitted)");

    ReduceArgs reduce;
    auto *reduce_cmd = app.add_subcommand("reduce", "Collapse classifiers into weighted packets of three");
    reduce_cmd->add_option("--data", reduce.data, "Dataset CSV")->required();
    reduce_cmd->add_option("--model", reduce.model, "Model JSON")->required();
    reduce_cmd->add_option("--mode", reduce.mode, "analytic or minimum")->check(CLI::IsMember({"analytic", "minimum"}));
    reduce_cmd->add_option("--out", reduce.out, "Output JSON (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        return fail("validation", e.what(), kExitValidation);
    }

    try {
        if (*generate)
            run_generate(gen);
        else if (*train_cmd)
            run_train(train);
        else if (*outcomes)
            run_outcomes(outs);
        else if (*table_cmd)
            run_table(table);
        else if (*analytic_cmd)
            run_analytic(analytic);
        else if (*minimize_cmd)
            run_minimize(minimize);
        else if (*risk_cmd)
            run_risk(risk);
        else if (*compare_cmd)
            run_compare_cmd(cmp);
        else if (*reduce_cmd)
            run_reduce(reduce);
    } catch (const validation_error &e) {
        return fail("validation", e.what(), kExitValidation);
    } catch (const numerical_error &e) {
        return fail("numerical", e.what(), kExitNumerical);
    } catch (const std::exception &e) {
        return fail("internal", e.what(), 1);
    }
    return 0;
}
