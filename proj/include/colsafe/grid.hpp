#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace colsafe {

using Point = std::span<const double>;

/// Euclidean distance; throws DimensionError on mismatched sizes.
double distance(Point a, Point b);

struct Axis {
    double lower = 0.0;
    double upper = 1.0;
    std::size_t resolution = 2;
};

/// Finite parameter domain. Points are stored contiguously; index order is
/// row-major over the axes (the last axis varies fastest).
class ParameterGrid {
public:
    static ParameterGrid regular(std::vector<Axis> axes);
    /// Arbitrary point cloud; `coords` holds `dim` values per point.
    static ParameterGrid from_points(std::size_t dim, std::vector<double> coords);

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
    bool is_regular() const { return !axes_.empty(); }
    const std::vector<Axis>& axes() const { return axes_; }

    Point point(std::size_t index) const;
    double distance(std::size_t a, std::size_t b) const;

    /// Multi-index of a regular-grid point.
    std::vector<std::size_t> multi_index(std::size_t index) const;
    std::size_t flat_index(std::span<const std::size_t> multi) const;

    /// Index of the grid point exactly at `coords` (within 1e-9 per axis).
    std::optional<std::size_t> find(Point coords) const;

private:
    ParameterGrid(std::size_t dim, std::vector<double> coords, std::vector<Axis> axes);

    std::size_t dim_ = 0;
    std::vector<double> coords_;
    std::vector<Axis> axes_;
};

/// Membership set over grid indices.
class GridSet {
public:
    GridSet() = default;
    explicit GridSet(std::size_t universe) : bits_(universe, 0) {}

    std::size_t universe() const { return bits_.size(); }
    bool contains(std::size_t i) const { return bits_[i] != 0; }
    void insert(std::size_t i);
    void erase(std::size_t i);
    std::size_t count() const { return count_; }
    bool empty() const { return count_ == 0; }

    std::vector<std::size_t> indices() const;
    bool is_subset_of(const GridSet& other) const;
    GridSet united(const GridSet& other) const;

    /// Hex bitmask, bit k = index k, least significant nibble first.
    std::string to_hex() const;

    friend bool operator==(const GridSet& a, const GridSet& b) { return a.bits_ == b.bits_; }

private:
    std::vector<unsigned char> bits_;
    std::size_t count_ = 0;
};

}  // namespace colsafe
