#pragma once

#include "colsafe/environments.hpp"
#include "colsafe/grid.hpp"
#include "colsafe/model.hpp"
#include "colsafe/sets.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace colsafe {

struct TraceRecord {
    std::size_t n = 0;
    std::size_t a_index = 0;
    std::vector<double> a_coords;
    Measurement measurement;
    double kappa = 0.0;      // at a_n after the update
    std::vector<double> widths;  // w(a_n, i) at selection time
    double max_width = 0.0;  // acquisition score max_i w(a_n, i)
    std::size_t s_size = 0;
    std::size_t m_size = 0;
    std::size_t g_size = 0;
    std::size_t best_index = 0;
    double best_l = 0.0;
    double update_ms = 0.0;
    std::size_t violations = 0;
    bool safe_changed = true;
    // Filled only when ExplorerOptions::record_sets is on.
    std::string safe_hex;
    std::string maximizers_hex;
    std::string expanders_hex;
};

struct StoppingConfig {
    double beta_bar = 0.1;
    std::size_t max_iterations = 1000;
    /// Ignore the stopping rule and always run max_iterations steps.
    bool run_to_cap = false;
};

enum class StopReason { Converged, MaxIterations };

std::string to_string(StopReason reason);

/// Counters for the per-step monotonicity checks. Failures are counted, never
/// thrown, so harnesses can report them.
struct InvariantReport {
    std::size_t checks = 0;
    std::size_t upper_increased = 0;
    std::size_t lower_decreased = 0;
    std::size_t width_increased = 0;
    std::size_t safe_shrunk = 0;
    std::size_t candidates_grew = 0;
    std::size_t sampled_outside_candidates = 0;

    std::size_t failures() const {
        return upper_increased + lower_decreased + width_increased + safe_shrunk +
               candidates_grew + sampled_outside_candidates;
    }
};

struct RunResult {
    std::size_t best_index = 0;
    double best_lower = 0.0;
    StopReason reason = StopReason::MaxIterations;
    std::size_t iterations = 0;
    std::size_t converged_at = 0;  // 0 when the rule never fired
    std::vector<TraceRecord> trace;
    InvariantReport invariants;
    std::size_t violations = 0;
};

/// Supplies noisy readings for a grid index.
class MeasurementSource {
public:
    virtual ~MeasurementSource() = default;
    virtual Measurement measure(std::size_t a) = 0;
};

/// Environment plus its own noise stream.
class EnvSource final : public MeasurementSource {
public:
    EnvSource(const SyntheticEnv& env, std::uint64_t seed, std::uint64_t stream = 0)
        : env_(&env), noise_(seed, stream) {}
    Measurement measure(std::size_t a) override { return env_->observe(a, noise_); }

private:
    const SyntheticEnv* env_;
    NoiseStream noise_;
};

struct Selection {
    std::size_t index = 0;
    double score = 0.0;
};

/// Candidate with the largest width over all outputs; ties to the smaller
/// index. Throws std::logic_error when `candidates` is empty.
Selection select_next(const GridSet& candidates, const IntervalTable& table);
/// Safe point with the largest pessimistic reward; ties to the smaller index.
std::size_t best_guess(const GridSet& safe, const IntervalTable& table);

struct ExplorerOptions {
    bool time_updates = true;
    bool check_invariants = true;
    bool record_sets = false;
};

/// One run of the safe exploration loop over a fixed grid.
class SafeExplorer {
public:
    SafeExplorer(const ParameterGrid& grid, double lipschitz, Thresholds thresholds,
                 const GridSet& seed, std::unique_ptr<ConfidenceModel> model,
                 MeasurementSource& source, ExplorerOptions options = {});

    /// One iteration: safe set, maximizers, expanders, selection, then the
    /// measurement and the interval refresh.
    TraceRecord step();
    /// Steps until the stopping rule fires (unless run_to_cap) or the cap.
    RunResult run(const StoppingConfig& stopping);

    const IntervalTable& table() const { return table_; }
    const GridSet& safe_set() const { return safe_; }
    const GridSet& candidates() const { return candidates_; }
    const ConfidenceModel& model() const { return *model_; }
    const InvariantReport& invariants() const { return invariants_; }
    std::size_t iteration() const { return n_; }

private:
    void check(const IntervalTable& before, const GridSet& prev_safe,
               const GridSet& prev_candidates, const TraceRecord& rec);

    const ParameterGrid* grid_;
    SetCalculator calc_;
    std::unique_ptr<ConfidenceModel> model_;
    MeasurementSource* source_;
    ExplorerOptions options_;
    IntervalTable table_;
    GridSet safe_;
    GridSet candidates_;
    std::size_t n_ = 0;
    InvariantReport invariants_;
};

}  // namespace colsafe
