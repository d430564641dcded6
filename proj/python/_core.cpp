#include "truthboost/analytic.hpp"
#include "truthboost/boosting.hpp"
#include "truthboost/compare.hpp"
#include "truthboost/dataset.hpp"
#include "truthboost/json_io.hpp"
#include "truthboost/outcome_tree.hpp"
#include "truthboost/risk.hpp"
#include "truthboost/weak_learner.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

namespace py = pybind11;
using namespace truthboost;

namespace {

py::object to_python(const nlohmann::json &j) {
    switch (j.type()) {
    case nlohmann::json::value_t::null:
        return py::none();
    case nlohmann::json::value_t::boolean:
        return py::bool_(j.get<bool>());
    case nlohmann::json::value_t::number_integer:
        return py::int_(j.get<std::int64_t>());
    case nlohmann::json::value_t::number_unsigned:
        return py::int_(j.get<std::uint64_t>());
    case nlohmann::json::value_t::number_float:
        return py::float_(j.get<double>());
    case nlohmann::json::value_t::string:
        return py::str(j.get<std::string>());
    case nlohmann::json::value_t::array: {
        py::list out;
        for (const auto &v : j)
            out.append(to_python(v));
        return out;
    }
    case nlohmann::json::value_t::object: {
        py::dict out;
        for (const auto &[k, v] : j.items())
            out[py::str(k)] = to_python(v);
        return out;
    }
    default:
        throw std::runtime_error("unsupported JSON value");
    }
}

nlohmann::json from_python(const py::handle &obj) {
    return nlohmann::json::parse(py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

LabeledDataset dataset_from_arrays(py::array_t<double, py::array::c_style | py::array::forcecast> x,
                                   py::array_t<int, py::array::c_style | py::array::forcecast> y) {
    if (x.ndim() != 2)
        throw validation_error("features must be a 2-D array");
    if (y.ndim() != 1 || y.shape(0) != x.shape(0))
        throw validation_error("labels must be a 1-D array with one entry per row");
    std::vector<double> features(x.data(), x.data() + x.size());
    std::vector<int> labels(y.data(), y.data() + y.size());
    return LabeledDataset(static_cast<std::size_t>(x.shape(1)), std::move(features), std::move(labels));
}

OutcomeMatrix outcomes_from_array(py::array_t<int, py::array::c_style | py::array::forcecast> a) {
    if (a.ndim() != 2)
        throw validation_error("outcome matrix must be a 2-D array");
    std::vector<std::int8_t> entries;
    entries.reserve(static_cast<std::size_t>(a.size()));
    for (py::ssize_t i = 0; i < a.size(); ++i) {
        const int v = a.data()[i];
        if (v != 1 && v != -1)
            throw validation_error("outcome entries must be -1 or 1");
        entries.push_back(static_cast<std::int8_t>(v));
    }
    return OutcomeMatrix(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)), std::move(entries));
}

py::array_t<int> outcomes_to_array(const OutcomeMatrix &m) {
    py::array_t<int> out({static_cast<py::ssize_t>(m.rows()), static_cast<py::ssize_t>(m.cols())});
    auto view = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t k = 0; k < m.cols(); ++k)
            view(static_cast<py::ssize_t>(i), static_cast<py::ssize_t>(k)) = m.at(i, k);
    return out;
}

py::dict minimum_to_dict(const Minimum &m) {
    py::dict out;
    out["beta"] = m.beta;
    out["risk"] = m.report.risk_value;
    out["gradient"] = m.report.gradient;
    out["gradient_norm"] = m.report.gradient_norm;
    out["euler_residual"] = m.report.euler_residual ? py::cast(*m.report.euler_residual) : py::none();
    out["converged"] = m.report.converged;
    out["iterations"] = m.report.iterations;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "AdaBoost weights from truth-table counts, and the exact exponential-risk minimizer";
    m.attr("__version__") = kToolVersion;
    m.attr("GENERATOR_NAME") = kGeneratorName;
    m.attr("SCHEMA_VERSION") = kSchemaVersion;

    static py::exception<validation_error> validation(m, "ValidationError", PyExc_ValueError);
    static py::exception<numerical_error> numerical(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p)
                std::rethrow_exception(p);
        } catch (const validation_error &e) {
            py::set_error(validation, e.what());
        } catch (const numerical_error &e) {
            py::set_error(numerical, e.what());
        }
    });

    py::class_<GaussianSpec>(m, "GaussianSpec")
        .def(py::init([](std::size_t n, std::size_t d, std::uint64_t seed, std::optional<std::vector<double>> mean_pos,
                         std::optional<std::vector<double>> mean_neg, double covariance_scale) {
                 auto spec = GaussianSpec::with_defaults(n, d, seed);
                 if (mean_pos)
                     spec.mean_pos = *mean_pos;
                 if (mean_neg)
                     spec.mean_neg = *mean_neg;
                 spec.covariance_scale = covariance_scale;
                 spec.validate();
                 return spec;
             }),
             py::arg("n") = 1000, py::arg("d") = 2, py::arg("seed") = 0, py::arg("mean_pos") = py::none(),
             py::arg("mean_neg") = py::none(), py::arg("covariance_scale") = 1.0)
        .def_readwrite("n", &GaussianSpec::n)
        .def_readwrite("d", &GaussianSpec::d)
        .def_readwrite("mean_pos", &GaussianSpec::mean_pos)
        .def_readwrite("mean_neg", &GaussianSpec::mean_neg)
        .def_readwrite("covariance_scale", &GaussianSpec::covariance_scale)
        .def_readwrite("seed", &GaussianSpec::seed);

    py::class_<LabeledDataset>(m, "LabeledDataset")
        .def(py::init(&dataset_from_arrays), py::arg("features"), py::arg("labels"))
        .def_property_readonly("n", &LabeledDataset::size)
        .def_property_readonly("d", &LabeledDataset::dimension)
        .def_property_readonly("features",
                               [](const LabeledDataset &ds) {
                                   py::array_t<double> out({static_cast<py::ssize_t>(ds.size()),
                                                            static_cast<py::ssize_t>(ds.dimension())});
                                   std::copy(ds.features().begin(), ds.features().end(), out.mutable_data());
                                   return out;
                               })
        .def_property_readonly("labels", [](const LabeledDataset &ds) { return py::array_t<int>(
                                                                            static_cast<py::ssize_t>(ds.size()), ds.labels().data()); })
        .def("__len__", &LabeledDataset::size)
        .def("__eq__", [](const LabeledDataset &a, const LabeledDataset &b) { return a == b; });

    py::class_<OutcomeMatrix>(m, "OutcomeMatrix")
        .def(py::init(&outcomes_from_array), py::arg("entries"))
        .def_property_readonly("n", &OutcomeMatrix::rows)
        .def_property_readonly("p", &OutcomeMatrix::cols)
        .def("to_numpy", &outcomes_to_array)
        .def("columns", &OutcomeMatrix::columns, py::arg("first"), py::arg("count"))
        .def("__eq__", [](const OutcomeMatrix &a, const OutcomeMatrix &b) { return a == b; });

    m.def("generate_gaussian", &generate_gaussian, py::arg("spec"));
    m.def("read_dataset", py::overload_cast<const std::filesystem::path &>(&read_dataset), py::arg("path"));
    m.def("write_dataset", py::overload_cast<const LabeledDataset &, const std::filesystem::path &>(&write_dataset),
          py::arg("dataset"), py::arg("path"));
    m.def("read_outcomes", py::overload_cast<const std::filesystem::path &>(&read_outcomes), py::arg("path"));
    m.def("write_outcomes", py::overload_cast<const OutcomeMatrix &, const std::filesystem::path &>(&write_outcomes),
          py::arg("outcomes"), py::arg("path"));

    py::class_<DecisionStump>(m, "DecisionStump")
        .def(py::init([](std::size_t feature, double threshold, int polarity) {
                 if (polarity != 1 && polarity != -1)
                     throw validation_error("polarity must be -1 or 1");
                 return DecisionStump{feature, threshold, polarity};
             }),
             py::arg("feature"), py::arg("threshold"), py::arg("polarity"))
        .def_readonly("feature", &DecisionStump::feature_index)
        .def_readonly("threshold", &DecisionStump::threshold)
        .def_readonly("polarity", &DecisionStump::polarity)
        .def("predict", [](const DecisionStump &s, std::vector<double> x) { return stump_predict(s, x); }, py::arg("x"))
        .def("__eq__", [](const DecisionStump &a, const DecisionStump &b) { return a == b; })
        .def("__repr__", [](const DecisionStump &s) {
            std::ostringstream out;
            out << "DecisionStump(feature=" << s.feature_index << ", threshold=" << s.threshold
                << ", polarity=" << s.polarity << ")";
            return out.str();
        });

    m.def(
        "fit_stump",
        [](const LabeledDataset &ds, std::optional<std::vector<double>> weights) {
            return fit_stump(ds, weights ? ExampleWeights(*weights) : ExampleWeights::uniform(ds.size()));
        },
        py::arg("dataset"), py::arg("weights") = py::none());

    py::class_<BoostStep>(m, "BoostStep")
        .def_readonly("stump", &BoostStep::stump)
        .def_readonly("beta", &BoostStep::beta)
        .def_readonly("epsilon", &BoostStep::epsilon)
        .def_readonly("included", &BoostStep::included);

    py::class_<BoostModel>(m, "BoostModel")
        .def_readonly("steps", &BoostModel::steps)
        .def_property_readonly("status", [](const BoostModel &b) { return to_string(b.status); })
        .def_readonly("stopped_at_step", &BoostModel::stopped_at_step)
        .def_readonly("weight_history", &BoostModel::weight_history)
        .def_property_readonly("classifiers", &BoostModel::classifiers)
        .def_property_readonly("betas", &BoostModel::betas)
        .def("status_message", &BoostModel::status_message)
        .def("decision_function", [](const BoostModel &b, std::vector<double> x) { return decision_function(b, x); })
        .def("predict", [](const BoostModel &b, std::vector<double> x) { return predict(b, x); })
        .def(
            "to_json",
            [](const BoostModel &b, std::size_t n, std::size_t d) { return to_python(model_to_json({b, n, d, nullptr})); },
            py::arg("n"), py::arg("d"));

    m.def(
        "train_adaboost",
        [](const LabeledDataset &ds, std::size_t p, bool record_weights) {
            TrainOptions options;
            options.record_weights = record_weights;
            return train_adaboost(ds, p, options);
        },
        py::arg("dataset"), py::arg("p"), py::arg("record_weights") = false);

    m.def(
        "outcome_matrix",
        [](const LabeledDataset &ds, const std::vector<DecisionStump> &stumps) { return outcome_matrix(ds, stumps); },
        py::arg("dataset"), py::arg("classifiers"));

    py::class_<OutcomeTree>(m, "OutcomeTree")
        .def(py::init<std::size_t, std::vector<std::uint64_t>>(), py::arg("depth"), py::arg("counts"))
        .def_static(
            "from_leaves",
            [](std::size_t p, const std::vector<std::uint64_t> &leaves) { return OutcomeTree::from_leaves(p, leaves); },
            py::arg("p"), py::arg("leaves"))
        .def_property_readonly("depth", &OutcomeTree::depth)
        .def_property_readonly("n", &OutcomeTree::n)
        .def_property_readonly("counts", &OutcomeTree::counts)
        .def("count", &OutcomeTree::count, py::arg("j"))
        .def("level", [](const OutcomeTree &t, std::size_t k) {
            const auto l = t.level(k);
            return std::vector<std::uint64_t>(l.begin(), l.end());
        })
        .def_property_readonly("leaves", [](const OutcomeTree &t) {
            const auto l = t.leaves();
            return std::vector<std::uint64_t>(l.begin(), l.end());
        })
        .def("truncated", &OutcomeTree::truncated, py::arg("k"))
        .def("to_json", [](const OutcomeTree &t) { return to_python(tree_to_json(t)); })
        .def_static("from_json", [](const py::object &obj) { return tree_from_json(from_python(obj)); })
        .def("__eq__", [](const OutcomeTree &a, const OutcomeTree &b) { return a == b; });

    m.def("build_tree", &build_tree, py::arg("outcomes"));
    m.def("genealogy", [](std::uint64_t j) { return genealogy(j).signs; }, py::arg("j"));
    m.def("genealogy_index", [](std::vector<int> signs) { return genealogy_index(Genealogy{std::move(signs)}); },
          py::arg("signs"));
    m.def(
        "leaf_table_p3",
        [](const OutcomeTree &t) {
            const auto table = leaf_table_p3(t);
            py::dict out;
            out["n"] = table.n;
            out["m"] = table.m;
            return out;
        },
        py::arg("tree"));

    m.def("analytic_betas", &analytic_betas, py::arg("tree"));
    m.def(
        "analytic_state", [](const OutcomeTree &t) { return to_python(analytic_to_json(analytic_state(t))); },
        py::arg("tree"));
    m.def("closed_form_p3", &closed_form_p3, py::arg("tree"));

    m.def("risk_from_tree", [](const OutcomeTree &t, std::vector<double> b) { return risk_from_tree(t, b); },
          py::arg("tree"), py::arg("beta"));
    m.def("risk_bruteforce", [](const OutcomeMatrix &o, std::vector<double> b) { return risk_bruteforce(o, b); },
          py::arg("outcomes"), py::arg("beta"));
    m.def("risk_gradient", [](const OutcomeTree &t, std::vector<double> b) { return risk_gradient(t, b); },
          py::arg("tree"), py::arg("beta"));
    m.def(
        "risk_hessian",
        [](const OutcomeTree &t, std::vector<double> b) {
            const auto h = risk_hessian(t, b);
            const auto p = static_cast<py::ssize_t>(b.size());
            py::array_t<double> out({p, p});
            std::copy(h.begin(), h.end(), out.mutable_data());
            return out;
        },
        py::arg("tree"), py::arg("beta"));
    m.def("euler_residual_p3", [](const OutcomeTree &t, std::vector<double> b) { return euler_residual_p3(t, b); },
          py::arg("tree"), py::arg("beta"));
    m.def(
        "minimize_risk",
        [](const OutcomeTree &t, std::optional<std::vector<double>> init, double tol, std::size_t max_iters) {
            NewtonOptions options;
            options.tolerance = tol;
            options.max_iterations = max_iters;
            return minimum_to_dict(init ? minimize_risk(t, *init, options) : minimize_risk(t, options));
        },
        py::arg("tree"), py::arg("init") = py::none(), py::arg("tol") = 1e-12, py::arg("max_iters") = 100);
    m.def(
        "compare_risk", [](const OutcomeTree &t) { return to_python(risk_comparison_to_json(compare_risk(t))); },
        py::arg("tree"));

    m.def(
        "packet_reduce",
        [](const LabeledDataset &ds, const std::vector<DecisionStump> &stumps, const std::string &mode) {
            return to_python(packet_reduction_to_json(packet_reduce(ds, stumps, packet_mode_from_string(mode))));
        },
        py::arg("dataset"), py::arg("classifiers"), py::arg("mode") = "analytic");

    m.def(
        "compare",
        [](const LabeledDataset &ds, std::size_t p, std::optional<std::uint64_t> seed) {
            CompareInputs inputs;
            if (seed) {
                inputs.generator = kGeneratorName;
                inputs.seed = seed;
            }
            return to_python(compare_report_to_json(run_compare(ds, p, inputs)));
        },
        py::arg("dataset"), py::arg("p"), py::arg("seed") = py::none());
}
