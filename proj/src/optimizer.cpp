#include "colsafe/optimizer.hpp"

#include "colsafe/errors.hpp"

#include <chrono>
#include <limits>
#include <stdexcept>

namespace colsafe {

std::string to_string(StopReason reason) {
    return reason == StopReason::Converged ? "converged" : "max_iterations";
}

Selection select_next(const GridSet& candidates, const IntervalTable& table) {
    if (candidates.empty()) throw std::logic_error("select_next: stalled, no candidates");
    Selection best{0, -std::numeric_limits<double>::infinity()};
    bool first = true;
    for (std::size_t a : candidates.indices()) {
        const double w = table.max_width(a);
        if (first || w > best.score) {
            best = {a, w};
            first = false;
        }
    }
    return best;
}

std::size_t best_guess(const GridSet& safe, const IntervalTable& table) {
    if (safe.empty()) throw std::logic_error("best_guess: empty safe set");
    std::size_t best = 0;
    double value = 0.0;
    bool first = true;
    for (std::size_t a : safe.indices()) {
        const double l = table.lower(a, 0);
        if (first || l > value) {
            best = a;
            value = l;
            first = false;
        }
    }
    return best;
}

SafeExplorer::SafeExplorer(const ParameterGrid& grid, double lipschitz, Thresholds thresholds,
                           const GridSet& seed, std::unique_ptr<ConfidenceModel> model,
                           MeasurementSource& source, ExplorerOptions options)
    : grid_(&grid),
      calc_(grid, lipschitz, thresholds),
      model_(std::move(model)),
      source_(&source),
      options_(options),
      table_(IntervalTable::initial(grid.size(), thresholds.size() + 1, seed, thresholds)),
      safe_(seed),
      candidates_(grid.size()) {
    if (seed.universe() != grid.size()) throw DimensionError("explorer: seed set size mismatch");
    if (seed.empty()) throw ConfigError("explorer: the safe seed set is empty");
}

TraceRecord SafeExplorer::step() {
    using clock = std::chrono::steady_clock;
    const IntervalTable before = options_.check_invariants ? table_ : IntervalTable{};
    const GridSet prev_safe = safe_;
    const GridSet prev_candidates = candidates_;

    const auto t0 = clock::now();
    GridSet safe = calc_.safe_set(safe_, table_);
    const GridSet maximizers = calc_.maximizers(safe, table_);
    const GridSet expanders = calc_.expanders(safe, table_);
    GridSet candidates = maximizers.united(expanders);
    const Selection sel = select_next(candidates, table_);
    const std::size_t best = best_guess(safe, table_);
    const auto t1 = clock::now();

    TraceRecord rec;
    rec.n = ++n_;
    rec.a_index = sel.index;
    const Point p = grid_->point(sel.index);
    rec.a_coords.assign(p.begin(), p.end());
    for (std::size_t i = 0; i < table_.outputs(); ++i) rec.widths.push_back(table_.width(sel.index, i));
    rec.max_width = sel.score;
    rec.s_size = safe.count();
    rec.m_size = maximizers.count();
    rec.g_size = expanders.count();
    rec.best_index = best;
    rec.best_l = table_.lower(best, 0);
    rec.safe_changed = !(safe == safe_);
    if (options_.record_sets) {
        rec.safe_hex = safe.to_hex();
        rec.maximizers_hex = maximizers.to_hex();
        rec.expanders_hex = expanders.to_hex();
    }

    rec.measurement = source_->measure(sel.index);
    const auto t2 = clock::now();
    model_->observe(sel.index, rec.measurement, table_);
    const auto t3 = clock::now();

    if (options_.time_updates) {
        const std::chrono::duration<double, std::milli> ms = (t1 - t0) + (t3 - t2);
        rec.update_ms = ms.count();
    }
    rec.kappa = model_->kappa(sel.index);
    rec.violations = table_.violations();

    safe_ = std::move(safe);
    candidates_ = std::move(candidates);
    if (options_.check_invariants) check(before, prev_safe, prev_candidates, rec);
    return rec;
}

void SafeExplorer::check(const IntervalTable& before, const GridSet& prev_safe,
                         const GridSet& prev_candidates, const TraceRecord& rec) {
    ++invariants_.checks;
    for (std::size_t a = 0; a < table_.points(); ++a) {
        for (std::size_t i = 0; i < table_.outputs(); ++i) {
            const Interval old = before.get(a, i);
            const Interval now = table_.get(a, i);
            if (now.upper > old.upper) ++invariants_.upper_increased;
            if (now.lower < old.lower) ++invariants_.lower_decreased;
            if (now.width() > old.width()) ++invariants_.width_increased;
        }
    }
    if (!prev_safe.is_subset_of(safe_)) ++invariants_.safe_shrunk;
    if (!candidates_.contains(rec.a_index)) ++invariants_.sampled_outside_candidates;
    if (rec.n > 1 && !rec.safe_changed && !candidates_.is_subset_of(prev_candidates)) {
        ++invariants_.candidates_grew;
    }
}

RunResult SafeExplorer::run(const StoppingConfig& stopping) {
    RunResult result;
    if (stopping.max_iterations == 0) throw ConfigError("max_iterations must be positive");
    while (n_ < stopping.max_iterations) {
        TraceRecord rec = step();
        const bool done = !rec.safe_changed && rec.max_width <= 2.0 * stopping.beta_bar;
        result.best_index = rec.best_index;
        result.best_lower = rec.best_l;
        result.trace.push_back(std::move(rec));
        if (done && result.converged_at == 0) result.converged_at = n_;
        if (done && !stopping.run_to_cap) break;
    }
    result.iterations = n_;
    result.reason = result.converged_at != 0 ? StopReason::Converged : StopReason::MaxIterations;
    result.invariants = invariants_;
    result.violations = table_.violations();
    return result;
}

}  // namespace colsafe
