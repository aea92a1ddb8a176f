#pragma once

#include "colsafe/estimator.hpp"

#include <cstdint>

namespace colsafe {

/// Constants for the high-probability estimation-error bound.
struct BoundConfig {
    double lipschitz = 1.0;     // L
    double lambda = 0.5;        // kernel bandwidth
    double sigma = 0.1;         // sub-Gaussian proxy std
    double delta = 0.05;        // failure probability
    std::size_t domain_size = 1;  // D >= |grid|
    OutputDims output_dims{1};
    double kernel_lower = 0.5;  // chi_K, used by the sample-count bound

    /// Throws ConfigError when any invariant fails.
    void validate() const;
};

/// Half-width of the confidence ball around mu at kernel mass `kappa` for
/// output i. +infinity when kappa == 0.
double beta(const BoundConfig& cfg, double kappa, std::size_t i);

/// Uncertainty reached after `n` in-support samples (scalar form).
double beta_bar_bound(const BoundConfig& cfg, std::uint64_t n);

/// Smallest n >= 1 with beta_bar_bound(cfg, n) <= beta_bar. Throws
/// ConfigError("unreachable accuracy ...") when beta_bar <= L * lambda.
std::uint64_t n_beta_bar(const BoundConfig& cfg, double beta_bar);

struct UncertaintyBudget {
    double beta_bar = 0.0;
    std::uint64_t n_beta_bar = 0;
};

UncertaintyBudget make_budget(const BoundConfig& cfg, double beta_bar);

}  // namespace colsafe
