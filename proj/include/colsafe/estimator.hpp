#pragma once

#include "colsafe/bucket_index.hpp"
#include "colsafe/grid.hpp"
#include "colsafe/kernel.hpp"

#include <optional>
#include <vector>

namespace colsafe {

/// Output dimensions m_i for i in {0 (reward), 1..q (constraints)}; m_0 = 1.
using OutputDims = std::vector<std::size_t>;

void validate_output_dims(const OutputDims& dims);

/// One experiment's readings: values[i] has dims[i] components.
struct Measurement {
    std::vector<std::vector<double>> values;
};

/// Sample history for the Nadaraya-Watson estimator with a bucket index whose
/// cell size equals the kernel bandwidth.
class SampleStore {
public:
    SampleStore(std::size_t dim, OutputDims dims, double cell_size);

    std::size_t dim() const { return dim_; }
    const OutputDims& output_dims() const { return dims_; }
    std::size_t size() const { return measurements_.size(); }
    const BucketIndex& index() const { return index_; }

    void add_sample(Point a, const Measurement& m);

    Point point(std::size_t t) const;
    const Measurement& measurement(std::size_t t) const { return measurements_[t]; }

    /// Samples with |a - a_t| <= radius, ascending by sample order.
    std::vector<std::size_t> neighbors(Point a, double radius) const;
    /// Number of buckets the last neighbors() call examined.
    std::size_t last_buckets_examined() const { return last_examined_; }

    double kappa(const KernelSpec& kernel, Point a) const;

    /// Weighted average of index-i readings; nullopt when the kernel mass at
    /// `a` is zero.
    std::optional<std::vector<double>> mu(const KernelSpec& kernel, Point a, std::size_t i) const;

private:
    std::size_t dim_;
    OutputDims dims_;
    std::vector<double> points_;
    std::vector<Measurement> measurements_;
    BucketIndex index_;
    mutable std::size_t last_examined_ = 0;
};

}  // namespace colsafe
