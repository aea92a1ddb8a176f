#pragma once

#include "colsafe/bucket_index.hpp"
#include "colsafe/estimator.hpp"
#include "colsafe/grid.hpp"

#include <optional>
#include <span>
#include <vector>

namespace colsafe {

/// Closed extended-real interval; either end may be infinite.
struct Interval {
    double lower;
    double upper;
    double width() const { return upper - lower; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Safety thresholds c_i; entry k belongs to constraint index i = k + 1.
using Thresholds = std::vector<double>;

/// i = 0: [mu - beta, mu + beta]. i > 0: [max(0, |mu| - beta), |mu| + beta].
/// An infinite beta gives [-inf, inf] or [0, inf].
Interval confidence_interval(std::span<const double> mu, double beta, std::size_t i);
/// Undefined estimate (zero kernel mass) gives the uninformative interval.
Interval confidence_interval(const std::optional<std::vector<double>>& mu, double beta,
                             std::size_t i);

/// Contained sets C_n(a, i), one interval per grid point and output index.
class IntervalTable {
public:
    IntervalTable() = default;
    /// Every entry starts uninformative: [-inf, inf] for the reward,
    /// [0, inf] for constraint norms.
    IntervalTable(std::size_t points, std::size_t outputs);

    /// Initial table: seed points get [c_i, inf] for every constraint.
    static IntervalTable initial(std::size_t points, std::size_t outputs, const GridSet& seed,
                                 const Thresholds& thresholds);

    std::size_t points() const { return points_; }
    std::size_t outputs() const { return outputs_; }

    Interval get(std::size_t a, std::size_t i) const { return cells_[a * outputs_ + i]; }
    double lower(std::size_t a, std::size_t i) const { return get(a, i).lower; }
    double upper(std::size_t a, std::size_t i) const { return get(a, i).upper; }
    double width(std::size_t a, std::size_t i) const { return get(a, i).width(); }
    double max_width(std::size_t a) const;

    void set(std::size_t a, std::size_t i, Interval value) { cells_[a * outputs_ + i] = value; }

    /// C <- C intersect q. An empty intersection leaves C unchanged, counts a
    /// confidence-violation event and returns false.
    bool intersect(std::size_t a, std::size_t i, Interval q);
    std::size_t violations() const { return violations_; }

private:
    std::size_t points_ = 0;
    std::size_t outputs_ = 0;
    std::vector<Interval> cells_;
    std::size_t violations_ = 0;
};

struct SafeSetState {
    GridSet safe;
    GridSet maximizers;
    GridSet expanders;
    std::size_t n = 0;
};

/// Evaluates the safe, maximizer and expander comprehensions over a fixed
/// grid. Ball queries go through a bucket index; every candidate is then
/// tested with the literal inequality, so results equal a full scan.
class SetCalculator {
public:
    SetCalculator(const ParameterGrid& grid, double lipschitz, Thresholds thresholds);

    const ParameterGrid& grid() const { return *grid_; }
    double lipschitz() const { return lipschitz_; }
    const Thresholds& thresholds() const { return thresholds_; }

    /// a' is safe iff for every constraint i some a in `previous` has
    /// l(a, i) - L |a - a'| >= c_i.
    GridSet safe_set(const GridSet& previous, const IntervalTable& table) const;
    /// Safe points whose optimistic reward reaches the best pessimistic one.
    GridSet maximizers(const GridSet& safe, const IntervalTable& table) const;
    /// Safe points that could certify some currently unsafe point.
    GridSet expanders(const GridSet& safe, const IntervalTable& table) const;

    /// Calls visit(j) for every grid index j within `radius` of grid point a,
    /// plus possibly a few more. Falls back to a full scan when cheaper.
    template <class Visit>
    void for_each_near(std::size_t a, double radius, Visit&& visit) const;

private:
    const ParameterGrid* grid_;
    double lipschitz_;
    Thresholds thresholds_;
    BucketIndex index_;
};

GridSet update_safe_set(const GridSet& previous, const IntervalTable& table,
                        const ParameterGrid& grid, double lipschitz, const Thresholds& thresholds);
GridSet update_maximizers(const GridSet& safe, const IntervalTable& table);
GridSet update_expanders(const GridSet& safe, const IntervalTable& table,
                         const ParameterGrid& grid, double lipschitz,
                         const Thresholds& thresholds);

template <class Visit>
void SetCalculator::for_each_near(std::size_t a, double radius, Visit&& visit) const {
    const std::size_t n = grid_->size();
    const double reach = std::ceil(radius / index_.cell_size());
    const double cells = std::pow(2.0 * reach + 1.0, static_cast<double>(grid_->dim()));
    if (!std::isfinite(radius) || !(cells < static_cast<double>(n))) {
        for (std::size_t j = 0; j < n; ++j) visit(j);
        return;
    }
    index_.for_each_candidate(grid_->point(a), radius, visit);
}

}  // namespace colsafe
