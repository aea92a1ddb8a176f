#include "colsafe/estimator.hpp"

#include "colsafe/errors.hpp"

#include <algorithm>
#include <string>

namespace colsafe {

void validate_output_dims(const OutputDims& dims) {
    if (dims.empty() || dims[0] != 1) {
        throw ConfigError("output dimensions: reward index 0 must be scalar");
    }
    for (std::size_t i = 1; i < dims.size(); ++i) {
        if (dims[i] == 0) {
            throw ConfigError("output dimensions: constraint " + std::to_string(i) +
                              " has zero dimension");
        }
    }
}

SampleStore::SampleStore(std::size_t dim, OutputDims dims, double cell_size)
    : dim_(dim), dims_(std::move(dims)), index_(dim, cell_size) {
    validate_output_dims(dims_);
}

void SampleStore::add_sample(Point a, const Measurement& m) {
    if (a.size() != dim_) {
        throw DimensionError("add_sample: point has dimension " + std::to_string(a.size()) +
                             ", store expects " + std::to_string(dim_));
    }
    if (m.values.size() != dims_.size()) {
        throw DimensionError("add_sample: measurement has " + std::to_string(m.values.size()) +
                             " outputs, expected " + std::to_string(dims_.size()));
    }
    for (std::size_t i = 0; i < dims_.size(); ++i) {
        if (m.values[i].size() != dims_[i]) {
            throw DimensionError("add_sample: output " + std::to_string(i) + " has dimension " +
                                 std::to_string(m.values[i].size()) + ", expected " +
                                 std::to_string(dims_[i]));
        }
    }
    const std::size_t t = measurements_.size();
    points_.insert(points_.end(), a.begin(), a.end());
    measurements_.push_back(m);
    index_.insert(t, point(t));
}

Point SampleStore::point(std::size_t t) const {
    return Point(points_.data() + t * dim_, dim_);
}

std::vector<std::size_t> SampleStore::neighbors(Point a, double radius) const {
    std::vector<std::size_t> out;
    last_examined_ = index_.for_each_candidate(a, radius, [&](std::size_t t) {
        if (distance(a, point(t)) <= radius) out.push_back(t);
    });
    std::sort(out.begin(), out.end());
    return out;
}

double SampleStore::kappa(const KernelSpec& kernel, Point a) const {
    double mass = 0.0;
    for (std::size_t t : neighbors(a, kernel.lambda)) {
        mass += eval_scaled(kernel, a, point(t));
    }
    return mass;
}

std::optional<std::vector<double>> SampleStore::mu(const KernelSpec& kernel, Point a,
                                                   std::size_t i) const {
    if (i >= dims_.size()) {
        throw std::out_of_range("mu: output index " + std::to_string(i) + " out of range");
    }
    double mass = 0.0;
    std::vector<double> acc(dims_[i], 0.0);
    for (std::size_t t : neighbors(a, kernel.lambda)) {
        const double w = eval_scaled(kernel, a, point(t));
        mass += w;
        const auto& h = measurements_[t].values[i];
        for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += w * h[k];
    }
    if (mass == 0.0) return std::nullopt;
    for (auto& v : acc) v /= mass;
    return acc;
}

}  // namespace colsafe
