#pragma once

#include "colsafe/bounds.hpp"
#include "colsafe/environments.hpp"
#include "colsafe/gp_baseline.hpp"
#include "colsafe/kernel.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace colsafe {

enum class Algorithm { CoLSafe, GpSafeOpt };

std::string to_string(Algorithm algorithm);
Algorithm algorithm_from_string(const std::string& name);

struct SweepSpec {
    std::vector<KernelKind> kernels{KernelKind::Box, KernelKind::TruncatedMatern};
    std::vector<double> lambdas{1.0, 1.5, 1.75};
    std::size_t iterations = 20;
    double nu = 1.5;            // TruncatedMatern cells
    double lengthscale = 0.5;   // TruncatedMatern cells
};

struct BenchSpec {
    std::vector<std::size_t> sizes{100, 200, 400, 800};
    /// Iterations around each size whose median time is used for the fit.
    std::size_t window = 9;
};

struct ExperimentConfig {
    std::string benchmark = "1d-linear";
    std::size_t resolution = 0;  // 0: benchmark default
    Algorithm algorithm = Algorithm::CoLSafe;
    KernelSpec kernel = KernelSpec::box(0.05);

    double lipschitz = 1.0;
    double sigma = 0.01;  // proxy used by the bound
    double delta = 0.05;
    std::size_t domain_size = 0;  // 0: grid size
    NoiseModel noise{NoiseKind::Gaussian, 0.01};

    double beta_bar = 0.1;
    std::size_t max_iterations = 10000;
    bool run_to_cap = false;

    std::uint64_t seed = 0;
    std::string output_dir = "out";
    bool trace_timing = true;
    bool export_sets = false;
    bool check_invariants = true;
    std::size_t workers = 0;  // 0: hardware concurrency
    std::size_t trials = 20;

    GpConfig gp;
    SweepSpec sweep;
    BenchSpec bench;
};

/// Parses a JSON document. Unknown keys and malformed values are ConfigError.
ExperimentConfig parse_config(const std::string& json_text);
/// Reads and parses a file; an unreadable file is IoError.
ExperimentConfig load_config(const std::string& path);
/// Serialises every field, suitable for parse_config.
std::string config_to_json(const ExperimentConfig& cfg);

/// COLSAFE_SEED and COLSAFE_OUT_DIR, when set, replace seed and output_dir.
void apply_env_overrides(ExperimentConfig& cfg);

/// Benchmark with the configured noise, after every check that can fail
/// before a run: names, bound constants, kernel assumption, L against the
/// measured grid Lipschitz constant, strict safety of the seed, and
/// beta_bar > L * lambda.
Benchmark prepare_benchmark(const ExperimentConfig& cfg);

BoundConfig bound_config(const ExperimentConfig& cfg, const SyntheticEnv& env);

}  // namespace colsafe
