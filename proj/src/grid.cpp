#include "colsafe/grid.hpp"

#include "colsafe/errors.hpp"

#include <cmath>
#include <set>

namespace colsafe {

double distance(Point a, Point b) {
    if (a.size() != b.size()) {
        throw DimensionError("distance: point dimensions differ (" + std::to_string(a.size()) +
                             " vs " + std::to_string(b.size()) + ")");
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        sum += d * d;
    }
    return std::sqrt(sum);
}

ParameterGrid::ParameterGrid(std::size_t dim, std::vector<double> coords, std::vector<Axis> axes)
    : dim_(dim), coords_(std::move(coords)), axes_(std::move(axes)) {}

ParameterGrid ParameterGrid::regular(std::vector<Axis> axes) {
    if (axes.empty()) {
        throw ConfigError("grid: at least one axis is required");
    }
    std::size_t total = 1;
    for (const auto& ax : axes) {
        if (ax.resolution == 0) {
            throw ConfigError("grid: axis resolution must be positive");
        }
        if (ax.resolution > 1 && !(ax.upper > ax.lower)) {
            throw ConfigError("grid: axis upper bound must exceed lower bound");
        }
        total *= ax.resolution;
    }
    const std::size_t dim = axes.size();
    std::vector<double> coords(total * dim);
    std::vector<std::size_t> multi(dim, 0);
    for (std::size_t idx = 0; idx < total; ++idx) {
        for (std::size_t k = 0; k < dim; ++k) {
            const auto& ax = axes[k];
            coords[idx * dim + k] =
                ax.resolution == 1
                    ? ax.lower
                    : ax.lower + (ax.upper - ax.lower) * static_cast<double>(multi[k]) /
                                     static_cast<double>(ax.resolution - 1);
        }
        for (std::size_t k = dim; k-- > 0;) {
            if (++multi[k] < axes[k].resolution) break;
            multi[k] = 0;
        }
    }
    return ParameterGrid(dim, std::move(coords), std::move(axes));
}

ParameterGrid ParameterGrid::from_points(std::size_t dim, std::vector<double> coords) {
    if (dim == 0 || coords.empty() || coords.size() % dim != 0) {
        throw DimensionError("grid: coordinate buffer is not a whole number of points");
    }
    std::set<std::vector<double>> seen;
    for (std::size_t i = 0; i < coords.size(); i += dim) {
        std::vector<double> p(coords.begin() + static_cast<std::ptrdiff_t>(i),
                              coords.begin() + static_cast<std::ptrdiff_t>(i + dim));
        if (!seen.insert(std::move(p)).second) {
            throw ConfigError("grid: duplicate point at index " + std::to_string(i / dim));
        }
    }
    return ParameterGrid(dim, std::move(coords), {});
}

Point ParameterGrid::point(std::size_t index) const {
    return Point(coords_.data() + index * dim_, dim_);
}

double ParameterGrid::distance(std::size_t a, std::size_t b) const {
    return colsafe::distance(point(a), point(b));
}

std::vector<std::size_t> ParameterGrid::multi_index(std::size_t index) const {
    std::vector<std::size_t> multi(dim_, 0);
    for (std::size_t k = dim_; k-- > 0;) {
        multi[k] = index % axes_[k].resolution;
        index /= axes_[k].resolution;
    }
    return multi;
}

std::size_t ParameterGrid::flat_index(std::span<const std::size_t> multi) const {
    std::size_t index = 0;
    for (std::size_t k = 0; k < dim_; ++k) {
        index = index * axes_[k].resolution + multi[k];
    }
    return index;
}

std::optional<std::size_t> ParameterGrid::find(Point coords) const {
    if (coords.size() != dim_) {
        throw DimensionError("grid: query dimension mismatch");
    }
    constexpr double tol = 1e-9;
    auto matches = [&](std::size_t idx) {
        const Point p = point(idx);
        for (std::size_t k = 0; k < dim_; ++k) {
            if (std::abs(p[k] - coords[k]) > tol) return false;
        }
        return true;
    };
    if (is_regular()) {
        std::vector<std::size_t> multi(dim_);
        for (std::size_t k = 0; k < dim_; ++k) {
            const auto& ax = axes_[k];
            if (ax.resolution == 1) {
                multi[k] = 0;
                continue;
            }
            const double step = (ax.upper - ax.lower) / static_cast<double>(ax.resolution - 1);
            const double r = std::round((coords[k] - ax.lower) / step);
            if (r < 0 || r >= static_cast<double>(ax.resolution)) return std::nullopt;
            multi[k] = static_cast<std::size_t>(r);
        }
        const std::size_t idx = flat_index(multi);
        return matches(idx) ? std::optional<std::size_t>(idx) : std::nullopt;
    }
    for (std::size_t idx = 0; idx < size(); ++idx) {
        if (matches(idx)) return idx;
    }
    return std::nullopt;
}

void GridSet::insert(std::size_t i) {
    if (!bits_[i]) {
        bits_[i] = 1;
        ++count_;
    }
}

void GridSet::erase(std::size_t i) {
    if (bits_[i]) {
        bits_[i] = 0;
        --count_;
    }
}

std::vector<std::size_t> GridSet::indices() const {
    std::vector<std::size_t> out;
    out.reserve(count_);
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        if (bits_[i]) out.push_back(i);
    }
    return out;
}

bool GridSet::is_subset_of(const GridSet& other) const {
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        if (bits_[i] && !other.contains(i)) return false;
    }
    return true;
}

GridSet GridSet::united(const GridSet& other) const {
    GridSet out = *this;
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        if (other.contains(i)) out.insert(i);
    }
    return out;
}

std::string GridSet::to_hex() const {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bits_.size() / 4 + 1);
    for (std::size_t i = 0; i < bits_.size(); i += 4) {
        unsigned nibble = 0;
        for (std::size_t b = 0; b < 4 && i + b < bits_.size(); ++b) {
            if (bits_[i + b]) nibble |= 1u << b;
        }
        out.push_back(digits[nibble]);
    }
    return out;
}

}  // namespace colsafe
