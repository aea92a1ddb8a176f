#include "colsafe/bounds.hpp"
#include "colsafe/config.hpp"
#include "colsafe/environments.hpp"
#include "colsafe/errors.hpp"
#include "colsafe/experiment.hpp"
#include "colsafe/kernel.hpp"
#include "colsafe/sets.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace colsafe;

namespace {

py::dict run_config(const std::string& json_text) {
    const ExperimentConfig cfg = parse_config(json_text);
    const Benchmark bench = prepare_benchmark(cfg);
    const OracleInfo oracle = compute_oracle(cfg, bench);
    RunOutcome outcome;
    {
        py::gil_scoped_release release;
        outcome = run_experiment(cfg, bench, oracle);
    }
    std::ostringstream trace;
    write_trace_csv(trace, bench.env, outcome.result);
    py::dict out;
    out["summary"] = summary_json(cfg, bench, outcome);
    out["trace_csv"] = trace.str();
    out["env"] = env_json(bench);
    out["converged"] = outcome.result.reason == StopReason::Converged;
    return out;
}

std::vector<std::vector<double>> grid_points(const ParameterGrid& g) {
    std::vector<std::vector<double>> pts;
    for (std::size_t k = 0; k < g.size(); ++k) {
        const auto p = g.point(k);
        pts.emplace_back(p.begin(), p.end());
    }
    return pts;
}

}  // namespace

PYBIND11_MODULE(_colsafe, m) {
    m.doc() = "Safe exploration with Nadaraya-Watson confidence bounds";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);
    py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);

    py::enum_<KernelKind>(m, "KernelKind")
        .value("Box", KernelKind::Box)
        .value("Cosine", KernelKind::Cosine)
        .value("TruncatedMatern", KernelKind::TruncatedMatern);

    py::class_<KernelSpec>(m, "KernelSpec")
        .def_readwrite("kind", &KernelSpec::kind)
        .def_readwrite("upper", &KernelSpec::upper)
        .def_readwrite("lower", &KernelSpec::lower)
        .def_readwrite("lam", &KernelSpec::lambda)
        .def_readwrite("nu", &KernelSpec::nu)
        .def_readwrite("lengthscale", &KernelSpec::lengthscale)
        .def_static("box", &KernelSpec::box, py::arg("lam"))
        .def_static("cosine", &KernelSpec::cosine, py::arg("lam"), py::arg("lower") = 1e-3)
        .def_static("truncated_matern",
                    py::overload_cast<double, double, double>(&KernelSpec::truncated_matern),
                    py::arg("lam"), py::arg("nu"), py::arg("lengthscale"));

    m.def("eval_base", &eval_base, py::arg("spec"), py::arg("v"));
    m.def("eval_scaled", [](const KernelSpec& s, std::vector<double> a, std::vector<double> b) {
        return eval_scaled(s, a, b);
    }, py::arg("spec"), py::arg("a"), py::arg("b"));
    m.def("validate_kernel", [](const KernelSpec& s) {
        const auto r = validate(s);
        py::dict d;
        d["ok"] = r.ok;
        d["warning"] = r.warning;
        d["v"] = r.v;
        d["value"] = r.value;
        d["message"] = r.message;
        return d;
    }, py::arg("spec"));

    py::class_<BoundConfig>(m, "BoundConfig")
        .def(py::init<>())
        .def_readwrite("lipschitz", &BoundConfig::lipschitz)
        .def_readwrite("lam", &BoundConfig::lambda)
        .def_readwrite("sigma", &BoundConfig::sigma)
        .def_readwrite("delta", &BoundConfig::delta)
        .def_readwrite("domain_size", &BoundConfig::domain_size)
        .def_readwrite("output_dims", &BoundConfig::output_dims)
        .def_readwrite("kernel_lower", &BoundConfig::kernel_lower)
        .def("validate", &BoundConfig::validate);

    m.def("beta", &beta, py::arg("cfg"), py::arg("kappa"), py::arg("i") = 0);
    m.def("beta_bar_bound", &beta_bar_bound, py::arg("cfg"), py::arg("n"));
    m.def("n_beta_bar", &n_beta_bar, py::arg("cfg"), py::arg("beta_bar"));
    m.def("confidence_interval", [](std::vector<double> mu, double b, std::size_t i) {
        const auto q = confidence_interval(std::span<const double>(mu), b, i);
        return py::make_tuple(q.lower, q.upper);
    }, py::arg("mu"), py::arg("beta"), py::arg("i"));

    py::class_<Benchmark>(m, "Benchmark")
        .def_property_readonly("name", [](const Benchmark& b) { return b.env.name(); })
        .def_property_readonly("points", [](const Benchmark& b) { return grid_points(b.env.grid()); })
        .def_property_readonly("thresholds", [](const Benchmark& b) { return b.env.thresholds(); })
        .def_property_readonly("output_dims", [](const Benchmark& b) { return b.env.output_dims(); })
        .def_property_readonly("seed_set", [](const Benchmark& b) { return b.seed_set.indices(); })
        .def_property_readonly("true_lipschitz", [](const Benchmark& b) { return b.env.true_lipschitz(); })
        .def("reward", [](const Benchmark& b, std::size_t a) { return b.env.reward(a); })
        .def("constraint_norm",
             [](const Benchmark& b, std::size_t a, std::size_t i) { return b.env.constraint_norm(a, i); })
        .def("is_safe", [](const Benchmark& b, std::size_t a) { return b.env.is_safe(a); })
        .def("closure", [](const Benchmark& b, double beta_bar, double lipschitz) {
            return reachability_closure(b.env, reachability_params(b.env, beta_bar, lipschitz),
                                        b.seed_set).indices();
        }, py::arg("beta_bar"), py::arg("lipschitz"))
        .def("safe_optimum", [](const Benchmark& b, double beta_bar, double lipschitz) {
            const auto o = true_safe_optimum(b.env, reachability_params(b.env, beta_bar, lipschitz),
                                             b.seed_set);
            return py::make_tuple(o.index, o.value);
        }, py::arg("beta_bar"), py::arg("lipschitz"));

    m.def("benchmark_names", &benchmark_names);
    m.def("make_benchmark", &make_benchmark, py::arg("name"), py::arg("resolution") = 0,
          py::arg("seed") = 0);
    m.def("normalize_config", [](const std::string& text) { return config_to_json(parse_config(text)); },
          py::arg("json_text"));
    m.def("run_config", &run_config, py::arg("json_text"),
          "Run one experiment from JSON config text; returns summary, trace CSV and env JSON.");
}
