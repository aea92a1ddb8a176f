#include "colsafe/bounds.hpp"

#include "colsafe/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace colsafe {

void BoundConfig::validate() const {
    auto fail = [](const std::string& what) { throw ConfigError("bound config: " + what); };
    if (!(delta > 0.0 && delta < 1.0)) fail("delta must lie in (0, 1)");
    if (!(lipschitz >= 0.0) || !std::isfinite(lipschitz)) fail("Lipschitz constant must be >= 0");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) fail("sigma must be positive");
    if (!(lambda > 0.0) || !std::isfinite(lambda)) fail("lambda must be positive");
    if (domain_size == 0) fail("domain size D must be positive");
    if (!(kernel_lower > 0.0)) fail("kernel lower constant must be positive");
    validate_output_dims(output_dims);
}

double beta(const BoundConfig& cfg, double kappa, std::size_t i) {
    if (kappa < 0.0 || std::isnan(kappa)) {
        throw std::invalid_argument("beta: kernel mass must be nonnegative");
    }
    if (i >= cfg.output_dims.size()) {
        throw std::out_of_range("beta: output index out of range");
    }
    if (kappa == 0.0) return std::numeric_limits<double>::infinity();

    const double half_m = static_cast<double>(cfg.output_dims[i]) / 2.0;
    const double log_d_over_delta =
        std::log(static_cast<double>(cfg.domain_size)) - std::log(cfg.delta);
    const double bias = cfg.lipschitz * cfg.lambda;
    if (kappa <= 1.0) {
        const double log_term = log_d_over_delta + half_m * std::log(2.0);
        return bias + 2.0 * cfg.sigma / kappa * std::sqrt(log_term);
    }
    const double log_term = log_d_over_delta + half_m * std::log1p(kappa);
    return bias + 2.0 * cfg.sigma / kappa * std::sqrt(kappa * log_term);
}

double beta_bar_bound(const BoundConfig& cfg, std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("beta_bar_bound: n must be >= 1");
    const double log_d_over_delta =
        std::log(static_cast<double>(cfg.domain_size)) - std::log(cfg.delta);
    const double mass = static_cast<double>(n) * cfg.kernel_lower;
    const double alpha1 = std::sqrt(log_d_over_delta + 0.5 * std::log(2.0));
    const double alpha2 = std::sqrt(mass * (log_d_over_delta + 0.5 * std::log1p(mass)));
    return cfg.lipschitz * cfg.lambda + 2.0 * cfg.sigma * std::max(alpha1, alpha2) / mass;
}

std::uint64_t n_beta_bar(const BoundConfig& cfg, double beta_bar) {
    const double floor_value = cfg.lipschitz * cfg.lambda;
    if (!(beta_bar > floor_value)) {
        std::ostringstream msg;
        msg << "unreachable accuracy: beta_bar " << beta_bar << " must exceed L*lambda "
            << floor_value;
        throw ConfigError(msg.str());
    }
    constexpr std::uint64_t limit = std::uint64_t{1} << 62;
    std::uint64_t hi = 1;
    while (beta_bar_bound(cfg, hi) > beta_bar) {
        if (hi >= limit) {
            throw ConfigError("unreachable accuracy: sample count exceeds 2^62");
        }
        hi *= 2;
    }
    if (hi == 1) return 1;
    // bound(lo) > beta_bar >= bound(hi); the bound is decreasing in n.
    std::uint64_t lo = hi / 2;
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (beta_bar_bound(cfg, mid) <= beta_bar) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

UncertaintyBudget make_budget(const BoundConfig& cfg, double beta_bar) {
    return UncertaintyBudget{beta_bar, n_beta_bar(cfg, beta_bar)};
}

}  // namespace colsafe
