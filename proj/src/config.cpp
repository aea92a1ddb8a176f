#include "colsafe/config.hpp"

#include "colsafe/errors.hpp"

#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace colsafe {

using nlohmann::json;

std::string to_string(Algorithm algorithm) {
    return algorithm == Algorithm::CoLSafe ? "colsafe" : "gp-safeopt";
}

Algorithm algorithm_from_string(const std::string& name) {
    if (name == "colsafe") return Algorithm::CoLSafe;
    if (name == "gp-safeopt") return Algorithm::GpSafeOpt;
    throw ConfigError("unknown algorithm '" + name + "' (expected colsafe or gp-safeopt)");
}

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& item : j.items()) {
        if (!allowed.count(item.key())) {
            throw ConfigError(where + ": unknown key '" + item.key() + "'");
        }
    }
}

template <class T>
T get_or(const json& j, const char* key, T fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(where + ": field '" + key + "' has the wrong type");
    }
}

KernelSpec parse_kernel(const json& j) {
    reject_unknown(j, {"kind", "lambda", "nu", "lengthscale", "lower"}, "kernel");
    const auto kind = kernel_kind_from_string(get_or<std::string>(j, "kind", "box", "kernel"));
    const double lambda = get_or(j, "lambda", 0.05, "kernel");
    const double nu = get_or(j, "nu", 1.5, "kernel");
    const double lengthscale = get_or(j, "lengthscale", 0.5, "kernel");
    switch (kind) {
        case KernelKind::Box:
            return KernelSpec::box(lambda);
        case KernelKind::Cosine:
            return KernelSpec::cosine(lambda, get_or(j, "lower", 1e-3, "kernel"));
        case KernelKind::TruncatedMatern:
            if (j.contains("lower")) {
                return KernelSpec::truncated_matern(lambda, nu, lengthscale,
                                                    get_or(j, "lower", 0.0, "kernel"));
            }
            return KernelSpec::truncated_matern(lambda, nu, lengthscale);
    }
    throw ConfigError("kernel: unsupported kind");
}

json kernel_json(const KernelSpec& k) {
    json j{{"kind", to_string(k.kind)}, {"lambda", k.lambda}};
    if (k.kind == KernelKind::TruncatedMatern) {
        j["nu"] = k.nu;
        j["lengthscale"] = k.lengthscale;
        j["lower"] = k.lower;
    } else if (k.kind == KernelKind::Cosine) {
        j["lower"] = k.lower;
    }
    return j;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    reject_unknown(j,
                   {"benchmark", "resolution", "algorithm", "kernel", "lipschitz", "sigma",
                    "delta", "domain_size", "noise", "beta_bar", "max_iterations", "run_to_cap",
                    "seed", "output_dir", "trace_timing", "export_sets", "check_invariants",
                    "workers", "trials", "gp", "sweep", "bench"},
                   "config");
    const std::string top = "config";
    ExperimentConfig cfg;
    cfg.benchmark = get_or(j, "benchmark", cfg.benchmark, top);
    cfg.resolution = get_or(j, "resolution", cfg.resolution, top);
    cfg.algorithm = algorithm_from_string(get_or<std::string>(j, "algorithm", "colsafe", top));
    if (j.contains("kernel")) cfg.kernel = parse_kernel(j.at("kernel"));
    cfg.lipschitz = get_or(j, "lipschitz", cfg.lipschitz, top);
    cfg.sigma = get_or(j, "sigma", cfg.sigma, top);
    cfg.delta = get_or(j, "delta", cfg.delta, top);
    cfg.domain_size = get_or(j, "domain_size", cfg.domain_size, top);
    cfg.noise = NoiseModel{NoiseKind::Gaussian, cfg.sigma};
    if (j.contains("noise")) {
        const auto& n = j.at("noise");
        reject_unknown(n, {"kind", "sigma"}, "noise");
        cfg.noise.kind = noise_kind_from_string(get_or<std::string>(n, "kind", "gaussian", "noise"));
        cfg.noise.sigma = get_or(n, "sigma", cfg.sigma, "noise");
    }
    cfg.beta_bar = get_or(j, "beta_bar", cfg.beta_bar, top);
    cfg.max_iterations = get_or(j, "max_iterations", cfg.max_iterations, top);
    cfg.run_to_cap = get_or(j, "run_to_cap", cfg.run_to_cap, top);
    cfg.seed = get_or(j, "seed", cfg.seed, top);
    cfg.output_dir = get_or(j, "output_dir", cfg.output_dir, top);
    cfg.trace_timing = get_or(j, "trace_timing", cfg.trace_timing, top);
    cfg.export_sets = get_or(j, "export_sets", cfg.export_sets, top);
    cfg.check_invariants = get_or(j, "check_invariants", cfg.check_invariants, top);
    cfg.workers = get_or(j, "workers", cfg.workers, top);
    cfg.trials = get_or(j, "trials", cfg.trials, top);

    cfg.gp.noise_variance = std::max(cfg.sigma * cfg.sigma, 1e-8);
    if (j.contains("gp")) {
        const auto& g = j.at("gp");
        reject_unknown(g, {"lengthscale", "signal_variance", "noise_variance", "beta_scale", "nu", "mode"},
                       "gp");
        cfg.gp.lengthscale = get_or(g, "lengthscale", cfg.gp.lengthscale, "gp");
        cfg.gp.signal_variance = get_or(g, "signal_variance", cfg.gp.signal_variance, "gp");
        cfg.gp.noise_variance = get_or(g, "noise_variance", cfg.gp.noise_variance, "gp");
        cfg.gp.beta_scale = get_or(g, "beta_scale", cfg.gp.beta_scale, "gp");
        cfg.gp.nu = get_or(g, "nu", cfg.gp.nu, "gp");
        cfg.gp.mode = gp_update_mode_from_string(
            get_or<std::string>(g, "mode", to_string(cfg.gp.mode), "gp"));
    }
    if (j.contains("sweep")) {
        const auto& s = j.at("sweep");
        reject_unknown(s, {"kernels", "lambdas", "iterations", "nu", "lengthscale"}, "sweep");
        if (s.contains("kernels")) {
            cfg.sweep.kernels.clear();
            for (const auto& name : get_or<std::vector<std::string>>(s, "kernels", {}, "sweep")) {
                cfg.sweep.kernels.push_back(kernel_kind_from_string(name));
            }
        }
        cfg.sweep.lambdas = get_or(s, "lambdas", cfg.sweep.lambdas, "sweep");
        cfg.sweep.iterations = get_or(s, "iterations", cfg.sweep.iterations, "sweep");
        cfg.sweep.nu = get_or(s, "nu", cfg.sweep.nu, "sweep");
        cfg.sweep.lengthscale = get_or(s, "lengthscale", cfg.sweep.lengthscale, "sweep");
    }
    if (j.contains("bench")) {
        const auto& b = j.at("bench");
        reject_unknown(b, {"sizes", "window"}, "bench");
        cfg.bench.sizes = get_or(b, "sizes", cfg.bench.sizes, "bench");
        cfg.bench.window = get_or(b, "window", cfg.bench.window, "bench");
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string config_to_json(const ExperimentConfig& cfg) {
    json kernels = json::array();
    for (auto k : cfg.sweep.kernels) kernels.push_back(to_string(k));
    json j{{"benchmark", cfg.benchmark},
           {"resolution", cfg.resolution},
           {"algorithm", to_string(cfg.algorithm)},
           {"kernel", kernel_json(cfg.kernel)},
           {"lipschitz", cfg.lipschitz},
           {"sigma", cfg.sigma},
           {"delta", cfg.delta},
           {"domain_size", cfg.domain_size},
           {"noise", {{"kind", to_string(cfg.noise.kind)}, {"sigma", cfg.noise.sigma}}},
           {"beta_bar", cfg.beta_bar},
           {"max_iterations", cfg.max_iterations},
           {"run_to_cap", cfg.run_to_cap},
           {"seed", cfg.seed},
           {"output_dir", cfg.output_dir},
           {"trace_timing", cfg.trace_timing},
           {"export_sets", cfg.export_sets},
           {"check_invariants", cfg.check_invariants},
           {"workers", cfg.workers},
           {"trials", cfg.trials},
           {"gp",
            {{"lengthscale", cfg.gp.lengthscale},
             {"signal_variance", cfg.gp.signal_variance},
             {"noise_variance", cfg.gp.noise_variance},
             {"beta_scale", cfg.gp.beta_scale},
             {"nu", cfg.gp.nu},
             {"mode", to_string(cfg.gp.mode)}}},
           {"sweep",
            {{"kernels", kernels},
             {"lambdas", cfg.sweep.lambdas},
             {"iterations", cfg.sweep.iterations},
             {"nu", cfg.sweep.nu},
             {"lengthscale", cfg.sweep.lengthscale}}},
           {"bench", {{"sizes", cfg.bench.sizes}, {"window", cfg.bench.window}}}};
    return j.dump(2);
}

void apply_env_overrides(ExperimentConfig& cfg) {
    if (const char* seed = std::getenv("COLSAFE_SEED"); seed && *seed) {
        try {
            std::size_t used = 0;
            cfg.seed = std::stoull(seed, &used);
            if (used != std::string(seed).size()) throw std::invalid_argument(seed);
        } catch (const std::exception&) {
            throw ConfigError(std::string("COLSAFE_SEED is not an unsigned integer: ") + seed);
        }
    }
    if (const char* out = std::getenv("COLSAFE_OUT_DIR"); out && *out) cfg.output_dir = out;
}

BoundConfig bound_config(const ExperimentConfig& cfg, const SyntheticEnv& env) {
    BoundConfig b;
    b.lipschitz = cfg.lipschitz;
    b.lambda = cfg.kernel.lambda;
    b.sigma = cfg.sigma;
    b.delta = cfg.delta;
    b.domain_size = cfg.domain_size == 0 ? env.grid().size() : cfg.domain_size;
    b.output_dims = env.output_dims();
    b.kernel_lower = cfg.kernel.lower;
    return b;
}

Benchmark prepare_benchmark(const ExperimentConfig& cfg) {
    Benchmark bench = make_benchmark(cfg.benchmark, cfg.resolution, cfg.seed);
    if (!(cfg.noise.sigma >= 0.0)) throw ConfigError("noise sigma must be nonnegative");
    bench.env.set_noise(cfg.noise);

    const BoundConfig bounds = bound_config(cfg, bench.env);
    bounds.validate();
    if (bounds.domain_size < bench.env.grid().size()) {
        throw ConfigError("domain_size must be at least the grid size " +
                          std::to_string(bench.env.grid().size()));
    }
    const KernelReport report = validate(cfg.kernel);
    if (!report.ok) throw ConfigError("kernel: " + report.message);

    const double true_l = bench.env.true_lipschitz();
    if (cfg.lipschitz < true_l) {
        std::ostringstream msg;
        msg << "lipschitz " << cfg.lipschitz << " is below the benchmark's grid Lipschitz constant "
            << true_l;
        throw ConfigError(msg.str());
    }
    check_safe_seed(bench.env, bench.seed_set);
    if (!(cfg.beta_bar > cfg.lipschitz * cfg.kernel.lambda)) {
        std::ostringstream msg;
        msg << "unreachable accuracy: beta_bar " << cfg.beta_bar << " must exceed L*lambda "
            << cfg.lipschitz * cfg.kernel.lambda;
        throw ConfigError(msg.str());
    }
    if (cfg.max_iterations == 0) throw ConfigError("max_iterations must be positive");
    if (cfg.trials == 0) throw ConfigError("trials must be at least 1");
    if (cfg.algorithm == Algorithm::GpSafeOpt) cfg.gp.validate();
    return bench;
}

}  // namespace colsafe
