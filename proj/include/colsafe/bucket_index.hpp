#pragma once

#include "colsafe/grid.hpp"

#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace colsafe {

using CellKey = std::vector<std::int64_t>;

struct CellKeyHash {
    std::size_t operator()(const CellKey& key) const noexcept {
        std::uint64_t h = 0x9e3779b97f4a7c15ULL;
        for (auto c : key) {
            h ^= static_cast<std::uint64_t>(c) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

/// Uniform-cell bucket grid: a point lives in cell floor(x / edge) per axis,
/// where edge is cell_size inflated by one part in 1e9. The inflation keeps
/// any two points within cell_size of each other in adjacent cells despite
/// rounding, so a radius query with radius <= cell_size touches exactly 3^d
/// cells.
class BucketIndex {
public:
    BucketIndex(std::size_t dim, double cell_size);

    std::size_t dim() const { return dim_; }
    double cell_size() const { return cell_size_; }
    double cell_edge() const { return cell_edge_; }
    std::size_t bucket_count() const { return buckets_.size(); }

    CellKey cell_of(Point p) const;
    void insert(std::size_t id, Point p);

    /// Ids stored in the given cell, or nullptr.
    const std::vector<std::size_t>* bucket(const CellKey& key) const;

    /// Calls visit(id) for every id in cells that can hold points within
    /// `radius` of q. Returns the number of cells examined. Candidates still
    /// need an exact distance check.
    template <class Visit>
    std::size_t for_each_candidate(Point q, double radius, Visit&& visit) const;

private:
    std::size_t dim_;
    double cell_size_;
    double cell_edge_;
    std::unordered_map<CellKey, std::vector<std::size_t>, CellKeyHash> buckets_;
};

template <class Visit>
std::size_t BucketIndex::for_each_candidate(Point q, double radius, Visit&& visit) const {
    const CellKey centre = cell_of(q);
    const auto reach = static_cast<std::int64_t>(std::ceil(radius / cell_size_));
    CellKey offset(dim_, -reach);
    CellKey key(dim_);
    std::size_t examined = 0;
    while (true) {
        for (std::size_t k = 0; k < dim_; ++k) key[k] = centre[k] + offset[k];
        ++examined;
        if (const auto* ids = bucket(key)) {
            for (std::size_t id : *ids) visit(id);
        }
        std::size_t k = dim_;
        while (k-- > 0) {
            if (++offset[k] <= reach) break;
            offset[k] = -reach;
        }
        if (k == static_cast<std::size_t>(-1)) break;
    }
    return examined;
}

}  // namespace colsafe
