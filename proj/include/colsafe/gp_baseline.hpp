#pragma once

#include "colsafe/grid.hpp"
#include "colsafe/model.hpp"
#include "colsafe/sets.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace colsafe {

enum class GpUpdateMode { Refactorize, Incremental };

std::string to_string(GpUpdateMode mode);
GpUpdateMode gp_update_mode_from_string(const std::string& name);

struct GpConfig {
    double lengthscale = 0.05;
    double signal_variance = 1.0;
    double noise_variance = 1e-4;
    double beta_scale = 2.0;
    double nu = 1.5;
    GpUpdateMode mode = GpUpdateMode::Refactorize;

    void validate() const;
};

/// Raised when the kernel matrix stays indefinite after the largest jitter.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Exact GP regression with zero prior mean and a Matern kernel. Several
/// scalar targets can share the inputs (and therefore the factor).
class GaussianProcess {
public:
    GaussianProcess(std::size_t dim, GpConfig cfg, std::size_t targets = 1);

    std::size_t dim() const { return dim_; }
    std::size_t targets() const { return targets_; }
    std::size_t size() const { return n_; }
    const GpConfig& config() const { return cfg_; }
    double jitter() const { return jitter_; }

    double kernel(Point a, Point b) const;

    /// Conditions on one input with `targets` readings.
    void add(Point x, std::span<const double> y);

    struct Posterior {
        std::vector<double> mean;  // one per target
        double variance = 0.0;     // shared by all targets, clipped at 0
    };
    Posterior predict(Point x) const;

private:
    // Packed lower-triangular factor, row r holds r + 1 entries.
    double& factor(std::size_t r, std::size_t c) { return chol_[r * (r + 1) / 2 + c]; }
    double factor(std::size_t r, std::size_t c) const { return chol_[r * (r + 1) / 2 + c]; }
    bool try_factorize(double jitter);
    bool try_extend();
    void refactorize();
    void solve_weights();
    // Solves the leading m x m block of the factor in place.
    void forward(std::vector<double>& v, std::size_t m) const;

    std::size_t dim_;
    GpConfig cfg_;
    std::size_t targets_;
    std::size_t n_ = 0;
    double jitter_ = 0.0;
    std::vector<double> inputs_;
    std::vector<std::vector<double>> y_;      // [target][t]
    std::vector<std::vector<double>> alpha_;  // [target][t]
    std::vector<double> chol_;
};

/// [mean - beta_scale * std, mean + beta_scale * std].
Interval gp_interval(double mean, double std_dev, double beta_scale);

/// Single-target convenience wrappers.
void gp_update(GaussianProcess& model, Point a, double y);
/// [mean - beta_scale * std, mean + beta_scale * std] for a one-target model.
Interval gp_bounds(const GaussianProcess& model, Point a, double beta_scale);

/// GP-UCB style intervals over every grid point, refreshed after each
/// observation. Constraint vectors get the norm interval with half-width
/// beta_scale * sqrt(m_i * variance).
class GpConfidenceModel final : public ConfidenceModel {
public:
    GpConfidenceModel(const ParameterGrid& grid, OutputDims dims, GpConfig cfg);

    std::string name() const override { return "gp-safeopt"; }
    void observe(std::size_t a, const Measurement& m, IntervalTable& table) override;
    double kappa(std::size_t a) const override;
    std::size_t observations() const override { return gp_.size(); }

    const GaussianProcess& process() const { return gp_; }

private:
    const ParameterGrid* grid_;
    OutputDims dims_;
    GaussianProcess gp_;
};

}  // namespace colsafe
