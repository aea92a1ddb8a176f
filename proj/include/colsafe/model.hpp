#pragma once

#include "colsafe/bounds.hpp"
#include "colsafe/bucket_index.hpp"
#include "colsafe/estimator.hpp"
#include "colsafe/grid.hpp"
#include "colsafe/kernel.hpp"
#include "colsafe/sets.hpp"

#include <optional>
#include <string>
#include <vector>

namespace colsafe {

/// Source of confidence intervals for the explorer. observe() adds one
/// experiment and intersects fresh intervals into the contained-set table.
class ConfidenceModel {
public:
    virtual ~ConfidenceModel() = default;

    virtual std::string name() const = 0;
    virtual void observe(std::size_t a, const Measurement& m, IntervalTable& table) = 0;
    /// Kernel mass at grid point a; NaN for models without one.
    virtual double kappa(std::size_t a) const = 0;
    virtual std::size_t observations() const = 0;
};

/// Nadaraya-Watson intervals. Keeps per-grid-point running sums of kernel
/// mass and weighted readings, so an observation touches only the grid points
/// inside its kernel support. The sums are accumulated in sample order and
/// match SampleStore::kappa / SampleStore::mu bit for bit.
class NadarayaWatsonModel final : public ConfidenceModel {
public:
    NadarayaWatsonModel(const ParameterGrid& grid, KernelSpec kernel, BoundConfig bounds);

    std::string name() const override { return "colsafe"; }
    void observe(std::size_t a, const Measurement& m, IntervalTable& table) override;
    double kappa(std::size_t a) const override { return mass_[a]; }
    std::size_t observations() const override { return store_.size(); }

    std::optional<std::vector<double>> mu(std::size_t a, std::size_t i) const;
    double beta_at(std::size_t a, std::size_t i) const;

    const SampleStore& store() const { return store_; }
    const KernelSpec& kernel() const { return kernel_; }
    const BoundConfig& bounds() const { return bounds_; }

    /// Grid points with distance <= lambda from grid point a, ascending.
    std::vector<std::size_t> support(std::size_t a) const;

private:
    const ParameterGrid* grid_;
    KernelSpec kernel_;
    BoundConfig bounds_;
    SampleStore store_;
    BucketIndex grid_index_;
    std::vector<double> mass_;
    std::vector<std::vector<double>> sums_;  // [i][a * m_i + k]
};

}  // namespace colsafe
