#include "colsafe/bucket_index.hpp"

#include "colsafe/errors.hpp"

namespace colsafe {

BucketIndex::BucketIndex(std::size_t dim, double cell_size)
    : dim_(dim), cell_size_(cell_size), cell_edge_(cell_size * (1.0 + 1e-9)) {
    if (!(cell_size > 0.0)) {
        throw ConfigError("bucket index: cell size must be positive");
    }
}

CellKey BucketIndex::cell_of(Point p) const {
    if (p.size() != dim_) {
        throw DimensionError("bucket index: point dimension mismatch");
    }
    CellKey key(dim_);
    for (std::size_t k = 0; k < dim_; ++k) {
        key[k] = static_cast<std::int64_t>(std::floor(p[k] / cell_edge_));
    }
    return key;
}

void BucketIndex::insert(std::size_t id, Point p) {
    buckets_[cell_of(p)].push_back(id);
}

const std::vector<std::size_t>* BucketIndex::bucket(const CellKey& key) const {
    auto it = buckets_.find(key);
    return it == buckets_.end() ? nullptr : &it->second;
}

}  // namespace colsafe
