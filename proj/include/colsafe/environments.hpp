#pragma once

#include "colsafe/estimator.hpp"
#include "colsafe/grid.hpp"
#include "colsafe/rng.hpp"
#include "colsafe/sets.hpp"

#include <functional>
#include <string>
#include <vector>

namespace colsafe {

enum class NoiseKind { Gaussian, Uniform };

std::string to_string(NoiseKind kind);
NoiseKind noise_kind_from_string(const std::string& name);

/// Gaussian(0, sigma^2) per component, or uniform on [-sigma*sqrt(3), sigma*sqrt(3)].
struct NoiseModel {
    NoiseKind kind = NoiseKind::Gaussian;
    double sigma = 0.0;
};

/// Ground-truth reward and constraints tabulated over a grid.
class SyntheticEnv {
public:
    using RewardFn = std::function<double(Point)>;
    using ConstraintFn = std::function<std::vector<double>(Point)>;

    struct Constraint {
        ConstraintFn fn;
        std::size_t dim = 1;
        double threshold = 0.0;
    };

    SyntheticEnv(std::string name, ParameterGrid grid, const RewardFn& reward,
                 const std::vector<Constraint>& constraints, NoiseModel noise = {},
                 std::uint64_t seed = 0);

    const std::string& name() const { return name_; }
    const ParameterGrid& grid() const { return grid_; }
    const OutputDims& output_dims() const { return dims_; }
    const Thresholds& thresholds() const { return thresholds_; }
    std::size_t constraint_count() const { return thresholds_.size(); }
    const NoiseModel& noise() const { return noise_; }
    void set_noise(NoiseModel noise) { noise_ = noise; }
    std::uint64_t seed() const { return seed_; }

    double reward(std::size_t a) const { return reward_[a]; }
    /// Raw value of constraint i (1-based) at grid point a.
    std::span<const double> constraint(std::size_t a, std::size_t i) const;
    double constraint_norm(std::size_t a, std::size_t i) const;
    /// Smallest norm-minus-threshold margin over all constraints.
    double safety_margin(std::size_t a) const;
    bool is_safe(std::size_t a) const { return safety_margin(a) >= 0.0; }

    Measurement truth(std::size_t a) const;
    /// truth(a) plus noise drawn from `stream`; a fixed number of draws per
    /// component regardless of sigma, so sequences stay aligned.
    Measurement observe(std::size_t a, NoiseStream& stream) const;

    /// max over grid pairs and outputs of |h(a) - h(b)| / |a - b|.
    double true_lipschitz() const { return true_lipschitz_; }

private:
    std::string name_;
    ParameterGrid grid_;
    OutputDims dims_;
    Thresholds thresholds_;
    NoiseModel noise_;
    std::uint64_t seed_;
    std::vector<double> reward_;
    std::vector<std::vector<double>> constraints_;  // [i-1][a * dim + k]
    double true_lipschitz_ = 0.0;
};

/// Hyperparameters that make a benchmark converge at its default resolution.
struct SuggestedSettings {
    double lipschitz = 1.0;
    double lambda = 0.1;
    double beta_bar = 0.2;
    double sigma = 0.01;
};

struct Benchmark {
    SyntheticEnv env;
    GridSet seed_set;
    SuggestedSettings suggested;
};

std::vector<std::string> benchmark_names();

/// resolution == 0 selects the benchmark's default. Throws ConfigError for
/// unknown names.
Benchmark make_benchmark(const std::string& name, std::size_t resolution = 0,
                         std::uint64_t seed = 0);

/// Throws ConfigError unless every seed point satisfies all constraints with
/// strictly positive margin.
void check_safe_seed(const SyntheticEnv& env, const GridSet& seed);

struct ReachabilityParams {
    double beta_bar = 0.1;
    double lipschitz = 1.0;
    Thresholds thresholds;
};

ReachabilityParams reachability_params(const SyntheticEnv& env, double beta_bar,
                                       double lipschitz);

/// One application of the reachability operator using true constraint norms.
GridSet reachability_step(const SyntheticEnv& env, const ReachabilityParams& params,
                          const GridSet& set);
/// Fixed point of reachability_step starting at `seed`.
GridSet reachability_closure(const SyntheticEnv& env, const ReachabilityParams& params,
                             const GridSet& seed);

struct SafeOptimum {
    std::size_t index = 0;
    double value = 0.0;
};

/// Argmax of the true reward over the reachability closure; ties go to the
/// smaller index.
SafeOptimum true_safe_optimum(const SyntheticEnv& env, const ReachabilityParams& params,
                              const GridSet& seed);

}  // namespace colsafe
