#include "colsafe/model.hpp"

#include "colsafe/errors.hpp"

#include <algorithm>

namespace colsafe {

NadarayaWatsonModel::NadarayaWatsonModel(const ParameterGrid& grid, KernelSpec kernel,
                                         BoundConfig bounds)
    : grid_(&grid),
      kernel_(kernel),
      bounds_(std::move(bounds)),
      store_(grid.dim(), bounds_.output_dims, kernel.lambda),
      grid_index_(grid.dim(), kernel.lambda),
      mass_(grid.size(), 0.0) {
    bounds_.validate();
    if (bounds_.domain_size < grid.size()) {
        throw ConfigError("domain size D must be at least the grid size");
    }
    for (std::size_t j = 0; j < grid.size(); ++j) grid_index_.insert(j, grid.point(j));
    for (std::size_t m : bounds_.output_dims) sums_.emplace_back(grid.size() * m, 0.0);
}

std::vector<std::size_t> NadarayaWatsonModel::support(std::size_t a) const {
    std::vector<std::size_t> out;
    const Point p = grid_->point(a);
    grid_index_.for_each_candidate(p, kernel_.lambda, [&](std::size_t j) {
        if (distance(grid_->point(j), p) <= kernel_.lambda) out.push_back(j);
    });
    std::sort(out.begin(), out.end());
    return out;
}

void NadarayaWatsonModel::observe(std::size_t a, const Measurement& m, IntervalTable& table) {
    const Point p = grid_->point(a);
    store_.add_sample(p, m);
    const auto& dims = bounds_.output_dims;
    for (std::size_t j : support(a)) {
        // Same argument order as SampleStore so the weights round identically.
        const double w = eval_scaled(kernel_, grid_->point(j), p);
        mass_[j] += w;
        for (std::size_t i = 0; i < dims.size(); ++i) {
            double* s = sums_[i].data() + j * dims[i];
            for (std::size_t k = 0; k < dims[i]; ++k) s[k] += w * m.values[i][k];
        }
        for (std::size_t i = 0; i < dims.size(); ++i) {
            table.intersect(j, i, confidence_interval(mu(j, i), beta_at(j, i), i));
        }
    }
}

std::optional<std::vector<double>> NadarayaWatsonModel::mu(std::size_t a, std::size_t i) const {
    if (i >= sums_.size()) throw std::out_of_range("mu: output index out of range");
    if (mass_[a] == 0.0) return std::nullopt;
    const std::size_t m = bounds_.output_dims[i];
    std::vector<double> out(sums_[i].begin() + a * m, sums_[i].begin() + (a + 1) * m);
    for (auto& v : out) v /= mass_[a];
    return out;
}

double NadarayaWatsonModel::beta_at(std::size_t a, std::size_t i) const {
    return beta(bounds_, mass_[a], i);
}

}  // namespace colsafe
