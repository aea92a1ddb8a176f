#pragma once

#include "colsafe/grid.hpp"

#include <string>

namespace colsafe {

enum class KernelKind { Box, Cosine, TruncatedMatern };

std::string to_string(KernelKind kind);
KernelKind kernel_kind_from_string(const std::string& name);

/// Radial kernel with compact support on [0, 1] and the constants bounding
/// it there: lower <= K(v) <= upper for v <= 1, K(v) = 0 for v > 1.
struct KernelSpec {
    KernelKind kind = KernelKind::Box;
    double upper = 0.5;   // c_K
    double lower = 0.5;   // chi_K
    double lambda = 1.0;  // bandwidth, same units as parameter distance
    double nu = 1.5;
    double lengthscale = 0.05;

    static KernelSpec box(double lambda);
    /// The cosine profile reaches 0 at v = 1, so no positive `lower` can hold
    /// on the closed support; validate() reports it.
    static KernelSpec cosine(double lambda, double lower = 1e-3);
    /// Matern-nu profile in v / lengthscale, cut to zero beyond v = 1.
    /// `lower` defaults to the profile value at v = 1.
    static KernelSpec truncated_matern(double lambda, double nu, double lengthscale);
    static KernelSpec truncated_matern(double lambda, double nu, double lengthscale, double lower);
};

/// Unnormalised Matern correlation at scaled distance r (1 at r = 0).
double matern_profile(double nu, double r);

/// K(v); exactly zero for v > 1.
double eval_base(const KernelSpec& spec, double v);

/// K_lambda(a, a') = K(|a - a'| / lambda) / c_K. Zero when |a - a'| > lambda.
double eval_scaled(const KernelSpec& spec, Point a, Point a_prime);

/// Same as eval_scaled for a precomputed distance.
double eval_scaled_at(const KernelSpec& spec, double dist);

struct KernelReport {
    bool ok = true;
    bool warning = false;
    double v = 0.0;      // location of the first violation, if any
    double value = 0.0;  // kernel value there
    std::string message;
};

/// Samples K densely on [0, 1] and just past 1 to check the bound constants.
/// Warns (without failing) when the lower constant is below 1e-12.
KernelReport validate(const KernelSpec& spec);

}  // namespace colsafe
