#include "colsafe/sets.hpp"

#include "colsafe/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace colsafe {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

double euclidean_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

// Cell edge for the ball-query index: roughly two grid spacings.
double pick_cell_size(const ParameterGrid& grid) {
    const std::size_t n = grid.size();
    const std::size_t d = grid.dim();
    double extent = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
        double lo = inf;
        double hi = -inf;
        for (std::size_t j = 0; j < n; ++j) {
            lo = std::min(lo, grid.point(j)[k]);
            hi = std::max(hi, grid.point(j)[k]);
        }
        extent = std::max(extent, hi - lo);
    }
    if (!(extent > 0.0)) return 1.0;
    const double per_axis = std::max(1.0, std::pow(static_cast<double>(n), 1.0 / static_cast<double>(d)));
    return 2.0 * extent / per_axis;
}

// Pad ball radii so rounding in l - L*d >= c can never exclude a point the
// literal test would accept.
double padded(double radius) {
    return radius * (1.0 + 1e-9) + 1e-12;
}

}  // namespace

Interval confidence_interval(std::span<const double> mu, double beta, std::size_t i) {
    if (i == 0) {
        if (mu.size() != 1) throw DimensionError("confidence_interval: reward estimate must be scalar");
        return Interval{mu[0] - beta, mu[0] + beta};
    }
    const double norm = euclidean_norm(mu);
    return Interval{std::max(0.0, norm - beta), norm + beta};
}

Interval confidence_interval(const std::optional<std::vector<double>>& mu, double beta,
                             std::size_t i) {
    if (!mu) return i == 0 ? Interval{-inf, inf} : Interval{0.0, inf};
    return confidence_interval(std::span<const double>(*mu), beta, i);
}

IntervalTable::IntervalTable(std::size_t points, std::size_t outputs)
    : points_(points), outputs_(outputs), cells_(points * outputs) {
    for (std::size_t a = 0; a < points; ++a) {
        for (std::size_t i = 0; i < outputs; ++i) {
            set(a, i, i == 0 ? Interval{-inf, inf} : Interval{0.0, inf});
        }
    }
}

IntervalTable IntervalTable::initial(std::size_t points, std::size_t outputs, const GridSet& seed,
                                     const Thresholds& thresholds) {
    if (thresholds.size() + 1 != outputs) {
        throw DimensionError("interval table: need one threshold per constraint");
    }
    IntervalTable table(points, outputs);
    for (std::size_t a : seed.indices()) {
        for (std::size_t i = 1; i < outputs; ++i) {
            table.set(a, i, Interval{thresholds[i - 1], inf});
        }
    }
    return table;
}

double IntervalTable::max_width(std::size_t a) const {
    double w = -inf;
    for (std::size_t i = 0; i < outputs_; ++i) w = std::max(w, width(a, i));
    return w;
}

bool IntervalTable::intersect(std::size_t a, std::size_t i, Interval q) {
    const Interval old = get(a, i);
    const Interval next{std::max(old.lower, q.lower), std::min(old.upper, q.upper)};
    if (next.lower > next.upper) {
        ++violations_;
        return false;
    }
    set(a, i, next);
    return true;
}

SetCalculator::SetCalculator(const ParameterGrid& grid, double lipschitz, Thresholds thresholds)
    : grid_(&grid),
      lipschitz_(lipschitz),
      thresholds_(std::move(thresholds)),
      index_(grid.dim(), pick_cell_size(grid)) {
    for (std::size_t j = 0; j < grid.size(); ++j) index_.insert(j, grid.point(j));
}

GridSet SetCalculator::safe_set(const GridSet& previous, const IntervalTable& table) const {
    const std::size_t n = grid_->size();
    const std::size_t q = thresholds_.size();
    if (table.outputs() != q + 1 || table.points() != n) {
        throw DimensionError("safe_set: table shape does not match grid and thresholds");
    }
    GridSet result(n);
    if (previous.empty()) return result;

    std::vector<std::size_t> certified(n, 0);
    std::vector<unsigned char> mark(n);
    const auto prev = previous.indices();
    for (std::size_t i = 1; i <= q; ++i) {
        const double c = thresholds_[i - 1];
        std::fill(mark.begin(), mark.end(), 0);
        for (std::size_t a : prev) {
            const double l = table.lower(a, i);
            if (!(l >= c)) continue;  // l - L*d <= l for every d >= 0
            const double radius = lipschitz_ > 0.0 ? (l - c) / lipschitz_ : inf;
            for_each_near(a, padded(radius), [&](std::size_t j) {
                if (!mark[j] && l - lipschitz_ * grid_->distance(a, j) >= c) mark[j] = 1;
            });
        }
        for (std::size_t j = 0; j < n; ++j) certified[j] += mark[j];
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (certified[j] == q) result.insert(j);
    }
    return result;
}

GridSet SetCalculator::maximizers(const GridSet& safe, const IntervalTable& table) const {
    return update_maximizers(safe, table);
}

GridSet SetCalculator::expanders(const GridSet& safe, const IntervalTable& table) const {
    const std::size_t n = grid_->size();
    const std::size_t q = thresholds_.size();
    GridSet result(n);
    if (safe.count() == n) return result;
    for (std::size_t a : safe.indices()) {
        bool found = false;
        for (std::size_t i = 1; i <= q && !found; ++i) {
            const double c = thresholds_[i - 1];
            const double u = table.upper(a, i);
            if (!(u >= c)) continue;
            const double radius = lipschitz_ > 0.0 ? (u - c) / lipschitz_ : inf;
            for_each_near(a, padded(radius), [&](std::size_t j) {
                if (!found && !safe.contains(j) && u - lipschitz_ * grid_->distance(a, j) >= c) {
                    found = true;
                }
            });
        }
        if (found) result.insert(a);
    }
    return result;
}

GridSet update_safe_set(const GridSet& previous, const IntervalTable& table,
                        const ParameterGrid& grid, double lipschitz, const Thresholds& thresholds) {
    return SetCalculator(grid, lipschitz, thresholds).safe_set(previous, table);
}

GridSet update_maximizers(const GridSet& safe, const IntervalTable& table) {
    GridSet result(safe.universe());
    double best = -inf;
    const auto members = safe.indices();
    for (std::size_t a : members) best = std::max(best, table.lower(a, 0));
    for (std::size_t a : members) {
        if (table.upper(a, 0) >= best) result.insert(a);
    }
    return result;
}

GridSet update_expanders(const GridSet& safe, const IntervalTable& table,
                         const ParameterGrid& grid, double lipschitz,
                         const Thresholds& thresholds) {
    return SetCalculator(grid, lipschitz, thresholds).expanders(safe, table);
}

}  // namespace colsafe
