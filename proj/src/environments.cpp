#include "colsafe/environments.hpp"

#include "colsafe/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace colsafe {

std::string to_string(NoiseKind kind) {
    return kind == NoiseKind::Gaussian ? "gaussian" : "uniform";
}

NoiseKind noise_kind_from_string(const std::string& name) {
    if (name == "gaussian") return NoiseKind::Gaussian;
    if (name == "uniform") return NoiseKind::Uniform;
    throw ConfigError("unknown noise kind '" + name + "' (expected gaussian or uniform)");
}

SyntheticEnv::SyntheticEnv(std::string name, ParameterGrid grid, const RewardFn& reward,
                           const std::vector<Constraint>& constraints, NoiseModel noise,
                           std::uint64_t seed)
    : name_(std::move(name)), grid_(std::move(grid)), noise_(noise), seed_(seed) {
    const std::size_t n = grid_.size();
    dims_.push_back(1);
    reward_.resize(n);
    for (std::size_t a = 0; a < n; ++a) reward_[a] = reward(grid_.point(a));
    for (const auto& c : constraints) {
        dims_.push_back(c.dim);
        thresholds_.push_back(c.threshold);
        std::vector<double> table;
        table.reserve(n * c.dim);
        for (std::size_t a = 0; a < n; ++a) {
            auto v = c.fn(grid_.point(a));
            if (v.size() != c.dim) {
                throw DimensionError("environment '" + name_ + "': constraint returned " +
                                     std::to_string(v.size()) + " values, declared " +
                                     std::to_string(c.dim));
            }
            table.insert(table.end(), v.begin(), v.end());
        }
        constraints_.push_back(std::move(table));
    }

    double lip = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            const double d = grid_.distance(a, b);
            lip = std::max(lip, std::abs(reward_[a] - reward_[b]) / d);
            for (std::size_t i = 1; i < dims_.size(); ++i) {
                const auto ga = constraint(a, i);
                const auto gb = constraint(b, i);
                lip = std::max(lip, distance(ga, gb) / d);
            }
        }
    }
    true_lipschitz_ = lip;
}

std::span<const double> SyntheticEnv::constraint(std::size_t a, std::size_t i) const {
    const std::size_t dim = dims_.at(i);
    return std::span<const double>(constraints_.at(i - 1).data() + a * dim, dim);
}

double SyntheticEnv::constraint_norm(std::size_t a, std::size_t i) const {
    double s = 0.0;
    for (double v : constraint(a, i)) s += v * v;
    return std::sqrt(s);
}

double SyntheticEnv::safety_margin(std::size_t a) const {
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < dims_.size(); ++i) {
        margin = std::min(margin, constraint_norm(a, i) - thresholds_[i - 1]);
    }
    return margin;
}

Measurement SyntheticEnv::truth(std::size_t a) const {
    Measurement m;
    m.values.push_back({reward_[a]});
    for (std::size_t i = 1; i < dims_.size(); ++i) {
        auto g = constraint(a, i);
        m.values.emplace_back(g.begin(), g.end());
    }
    return m;
}

Measurement SyntheticEnv::observe(std::size_t a, NoiseStream& stream) const {
    Measurement m = truth(a);
    for (auto& component : m.values) {
        for (auto& v : component) {
            double w = 0.0;
            if (noise_.kind == NoiseKind::Gaussian) {
                w = noise_.sigma * stream.gaussian();
            } else {
                w = noise_.sigma * std::sqrt(3.0) * (2.0 * stream.uniform() - 1.0);
            }
            v += w;
        }
    }
    return m;
}

namespace {

double norm2(Point a) {
    double s = 0.0;
    for (double x : a) s += x * x;
    return std::sqrt(s);
}

double sq_dist(Point a, double x, double y) {
    return (a[0] - x) * (a[0] - x) + (a[1] - y) * (a[1] - y);
}

std::size_t pick(std::size_t requested, std::size_t fallback) {
    return requested == 0 ? fallback : requested;
}

GridSet seed_at(const ParameterGrid& grid, std::vector<double> coords, const std::string& name) {
    const auto idx = grid.find(coords);
    if (!idx) {
        throw ConfigError("benchmark '" + name +
                          "': resolution does not place a grid point on the safe seed");
    }
    GridSet s(grid.size());
    s.insert(*idx);
    return s;
}

}  // namespace

std::vector<std::string> benchmark_names() {
    return {"1d-linear", "2d-quadratic", "2d-vector-constraint", "disjoint-region"};
}

Benchmark make_benchmark(const std::string& name, std::size_t resolution, std::uint64_t seed) {
    if (name == "1d-linear") {
        // f(a) = a, |g(a)| = 1 - |a| >= 0, seed at the origin.
        auto grid = ParameterGrid::regular({Axis{-1.0, 1.0, pick(resolution, 21)}});
        auto s0 = seed_at(grid, {0.0}, name);
        SyntheticEnv env(
            name, std::move(grid), [](Point a) { return a[0]; },
            {{[](Point a) { return std::vector<double>{1.0 - std::abs(a[0])}; }, 1, 0.0}}, {},
            seed);
        return {std::move(env), std::move(s0), SuggestedSettings{1.0, 0.05, 0.1, 0.01}};
    }
    if (name == "2d-quadratic") {
        // Concave bowl peaking at (0.75, 0.75); the cone constraint leaves an
        // annular unsafe band 1 < |a| < 1.4 that cuts the peak off.
        const std::size_t res = pick(resolution, 41);
        auto grid = ParameterGrid::regular({Axis{-1.0, 1.0, res}, Axis{-1.0, 1.0, res}});
        auto s0 = seed_at(grid, {0.0, 0.0}, name);
        SyntheticEnv env(
            name, std::move(grid), [](Point a) { return 0.5 - 0.25 * sq_dist(a, 0.75, 0.75); },
            {{[](Point a) { return std::vector<double>{1.5 - 1.25 * norm2(a)}; }, 1, 0.25}}, {},
            seed);
        return {std::move(env), std::move(s0), SuggestedSettings{1.5, 0.06, 0.15, 0.05}};
    }
    if (name == "2d-vector-constraint") {
        // Keep-out disc of radius 0.3 around (0.35, 0.35) expressed as the
        // norm of a 2-vector; reward peaks just behind the obstacle.
        const std::size_t res = pick(resolution, 21);
        auto grid = ParameterGrid::regular({Axis{-1.0, 1.0, res}, Axis{-1.0, 1.0, res}});
        auto s0 = seed_at(grid, {-0.6, -0.6}, name);
        SyntheticEnv env(
            name, std::move(grid), [](Point a) { return 0.5 - 0.25 * sq_dist(a, 0.6, 0.6); },
            {{[](Point a) {
                  return std::vector<double>{0.9 * (a[0] - 0.35), 0.9 * (a[1] - 0.35)};
              },
              2, 0.27}},
            {}, seed);
        return {std::move(env), std::move(s0), SuggestedSettings{1.2, 0.12, 0.2, 0.01}};
    }
    if (name == "disjoint-region") {
        // Safe iff |a_x| >= 0.3: two half-planes. The right one has the higher
        // reward but cannot be reached from the seed on the left.
        const std::size_t res = pick(resolution, 21);
        auto grid = ParameterGrid::regular({Axis{-1.0, 1.0, res}, Axis{-1.0, 1.0, res}});
        auto s0 = seed_at(grid, {-0.8, 0.0}, name);
        SyntheticEnv env(
            name, std::move(grid), [](Point a) { return 0.4 * a[0] + 0.1 * a[1]; },
            {{[](Point a) { return std::vector<double>{a[0]}; }, 1, 0.3}}, {}, seed);
        return {std::move(env), std::move(s0), SuggestedSettings{1.0, 0.12, 0.14, 0.01}};
    }
    throw ConfigError("unknown benchmark '" + name + "'");
}

void check_safe_seed(const SyntheticEnv& env, const GridSet& seed) {
    if (seed.universe() != env.grid().size()) {
        throw ConfigError("safe seed set does not match the grid size");
    }
    if (seed.empty()) throw ConfigError("safe seed set is empty");
    for (std::size_t a : seed.indices()) {
        if (!(env.safety_margin(a) > 0.0)) {
            throw ConfigError("safe seed point " + std::to_string(a) + " violates a constraint");
        }
    }
}

ReachabilityParams reachability_params(const SyntheticEnv& env, double beta_bar,
                                       double lipschitz) {
    return ReachabilityParams{beta_bar, lipschitz, env.thresholds()};
}

GridSet reachability_step(const SyntheticEnv& env, const ReachabilityParams& params,
                          const GridSet& set) {
    const auto& grid = env.grid();
    const std::size_t n = grid.size();
    GridSet result = set;
    if (set.empty()) return result;
    const auto members = set.indices();
    for (std::size_t a = 0; a < n; ++a) {
        if (result.contains(a)) continue;
        bool all = true;
        for (std::size_t i = 1; i <= params.thresholds.size() && all; ++i) {
            const double c = params.thresholds[i - 1];
            bool witness = false;
            for (std::size_t b : members) {
                if (env.constraint_norm(b, i) - 2.0 * params.beta_bar -
                        params.lipschitz * grid.distance(a, b) >=
                    c) {
                    witness = true;
                    break;
                }
            }
            all = witness;
        }
        if (all) result.insert(a);
    }
    return result;
}

GridSet reachability_closure(const SyntheticEnv& env, const ReachabilityParams& params,
                             const GridSet& seed) {
    GridSet current = seed;
    while (true) {
        GridSet next = reachability_step(env, params, current);
        if (next == current) return current;
        current = std::move(next);
    }
}

SafeOptimum true_safe_optimum(const SyntheticEnv& env, const ReachabilityParams& params,
                              const GridSet& seed) {
    const GridSet closure = reachability_closure(env, params, seed);
    SafeOptimum best{0, -std::numeric_limits<double>::infinity()};
    bool first = true;
    for (std::size_t a : closure.indices()) {
        if (first || env.reward(a) > best.value) {
            best = {a, env.reward(a)};
            first = false;
        }
    }
    return best;
}

}  // namespace colsafe
