#pragma once

#include "colsafe/config.hpp"
#include "colsafe/optimizer.hpp"

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace colsafe {

enum ExitCode : int {
    kExitSuccess = 0,
    kExitCapHit = 2,
    kExitConfigError = 3,
    kExitIoError = 4,
};

std::unique_ptr<ConfidenceModel> make_model(const ExperimentConfig& cfg, const Benchmark& bench);

/// Ground truth for optimality checks: the best true reward over the
/// reachability closure of the seed.
struct OracleInfo {
    SafeOptimum optimum;
    std::size_t closure_size = 0;
};

OracleInfo compute_oracle(const ExperimentConfig& cfg, const Benchmark& bench);

struct RunOutcome {
    RunResult result;
    /// Sampled points whose true constraints fail.
    std::size_t true_violations = 0;
    double best_true_reward = 0.0;
    SafeOptimum oracle;
    std::size_t closure_size = 0;
    /// f(best) >= oracle - 2 beta_bar, with 1e-9 slack.
    bool optimal = false;
};

/// One run on a prepared benchmark. `stream` selects the noise stream, so
/// replicas under one seed are independent and reproducible.
RunOutcome run_experiment(const ExperimentConfig& cfg, const Benchmark& bench,
                          const OracleInfo& oracle, std::uint64_t stream = 0);

/// Trace CSV with the fixed column schema; doubles in shortest round-trip form.
void write_trace_csv(std::ostream& out, const SyntheticEnv& env, const RunResult& result);
void write_sets_csv(std::ostream& out, const RunResult& result);
std::string summary_json(const ExperimentConfig& cfg, const Benchmark& bench,
                         const RunOutcome& outcome);
std::string env_json(const Benchmark& bench);

/// Shortest decimal that round-trips; "inf", "-inf", "nan" for the rest.
std::string format_double(double v);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct BenchResult {
    std::vector<std::size_t> sizes;
    std::vector<double> nw_ms;  // per iteration, index n - 1
    std::vector<double> gp_ms;
    std::vector<double> nw_median_ms;
    std::vector<double> gp_median_ms;
    double nw_slope = 0.0;
    double gp_slope = 0.0;
    double ratio_at_max = 0.0;  // NW / GP at the largest size
};

struct VerifyReport {
    std::size_t trials = 0;
    std::size_t violation_runs = 0;
    double violation_fraction = 0.0;
    double violation_bound = 0.0;  // delta + 2 sqrt(delta (1 - delta) / trials)
    std::size_t converged_runs = 0;
    std::size_t optimality_checked = 0;
    std::size_t optimality_passed = 0;
    std::size_t confidence_violation_events = 0;
    std::size_t invariant_checks = 0;
    std::size_t invariant_failures = 0;
    std::size_t runs_with_invariant_failures = 0;
};

/// Commands return an exit code and write their artifacts under
/// cfg.output_dir. ConfigError and IoError propagate to the caller.
int cmd_run(const ExperimentConfig& cfg);
int cmd_sweep(const ExperimentConfig& cfg);
int cmd_bench(const ExperimentConfig& cfg, BenchResult* result = nullptr);
int cmd_verify(const ExperimentConfig& cfg, VerifyReport* report = nullptr);

BenchResult run_bench(const ExperimentConfig& cfg);
VerifyReport run_verify(const ExperimentConfig& cfg);
std::string verify_json(const VerifyReport& report);

struct SweepRow {
    std::string kernel;
    double lambda = 0.0;
    std::size_t n = 0;
    double f_best = 0.0;
};

struct SweepCell {
    std::string kernel;
    double lambda = 0.0;
    bool ok = false;
    std::string error;
    std::vector<SweepRow> rows;
};

std::vector<SweepCell> run_sweep(const ExperimentConfig& cfg);

}  // namespace colsafe
