#pragma once

// Shared generators and brute-force oracles for the unit and acceptance
// tests. The oracles are deliberately naive: plain loops over the grid that
// transcribe each set definition literally.

#include "colsafe/environments.hpp"
#include "colsafe/grid.hpp"
#include "colsafe/rng.hpp"
#include "colsafe/sets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace support {

using namespace colsafe;

constexpr double kInf = std::numeric_limits<double>::infinity();

class Rng {
public:
    explicit Rng(std::uint64_t seed) : s_(seed, 0x7e57) {}
    double uniform(double lo, double hi) { return lo + (hi - lo) * (1.0 - s_.uniform()); }
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(s_.next_u64() % n); }
    bool coin(double p) { return s_.uniform() <= p; }
    double gaussian() { return s_.gaussian(); }

private:
    NoiseStream s_;
};

/// Regular grid in 1 to 3 dimensions, or a random point cloud, with at most
/// `max_points` points.
inline ParameterGrid random_grid(Rng& rng, std::size_t max_points) {
    if (rng.coin(0.25)) {
        const std::size_t dim = 1 + rng.index(3);
        const std::size_t n = 2 + rng.index(max_points - 1);
        std::vector<double> coords;
        for (std::size_t k = 0; k < n * dim; ++k) coords.push_back(rng.uniform(-1.0, 1.0));
        return ParameterGrid::from_points(dim, coords);
    }
    const std::size_t dim = 1 + rng.index(3);
    const auto per_axis = static_cast<std::size_t>(
        std::floor(std::pow(static_cast<double>(max_points), 1.0 / static_cast<double>(dim))));
    std::vector<Axis> axes;
    for (std::size_t k = 0; k < dim; ++k) {
        const double lo = rng.uniform(-2.0, 0.0);
        axes.push_back(Axis{lo, lo + rng.uniform(0.5, 3.0), 2 + rng.index(per_axis - 1)});
    }
    return ParameterGrid::regular(axes);
}

inline GridSet random_subset(Rng& rng, std::size_t n, double p, bool nonempty) {
    GridSet s(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (rng.coin(p)) s.insert(k);
    }
    if (nonempty && s.empty()) s.insert(rng.index(n));
    return s;
}

/// Intervals with a mix of infinite ends, tight values, and lower bounds
/// placed exactly on the safe-set boundary c + L * d for some grid distance d.
inline IntervalTable random_table(Rng& rng, const ParameterGrid& grid, const Thresholds& c,
                                  double lipschitz) {
    const std::size_t n = grid.size();
    IntervalTable t(n, c.size() + 1);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t i = 0; i <= c.size(); ++i) {
            const double base = i == 0 ? 0.0 : c[i - 1];
            double lo = i == 0 ? -kInf : 0.0;
            double hi = kInf;
            const double roll = rng.uniform(0.0, 1.0);
            if (roll < 0.15) {
                // keep uninformative
            } else if (roll < 0.35 && i > 0) {
                lo = base + lipschitz * grid.distance(a, rng.index(n));
                hi = rng.coin(0.5) ? kInf : lo + rng.uniform(0.0, 1.0);
            } else {
                lo = base + rng.uniform(-1.0, 1.5);
                if (i > 0) lo = std::max(0.0, lo);
                hi = rng.coin(0.2) ? kInf : lo + rng.uniform(0.0, 1.5);
            }
            t.set(a, i, Interval{lo, hi});
        }
    }
    return t;
}

inline GridSet naive_safe_set(const ParameterGrid& grid, const GridSet& prev,
                              const IntervalTable& t, double L, const Thresholds& c) {
    GridSet out(grid.size());
    for (std::size_t ap = 0; ap < grid.size(); ++ap) {
        bool all = true;
        for (std::size_t i = 1; i <= c.size(); ++i) {
            bool any = false;
            for (std::size_t a = 0; a < grid.size(); ++a) {
                if (prev.contains(a) && t.lower(a, i) - L * grid.distance(a, ap) >= c[i - 1]) {
                    any = true;
                }
            }
            all = all && any;
        }
        if (all && !prev.empty()) out.insert(ap);
    }
    return out;
}

inline GridSet naive_maximizers(const GridSet& safe, const IntervalTable& t) {
    double best = -kInf;
    for (std::size_t a = 0; a < safe.universe(); ++a) {
        if (safe.contains(a)) best = std::max(best, t.lower(a, 0));
    }
    GridSet out(safe.universe());
    for (std::size_t a = 0; a < safe.universe(); ++a) {
        if (safe.contains(a) && t.upper(a, 0) >= best) out.insert(a);
    }
    return out;
}

inline GridSet naive_expanders(const ParameterGrid& grid, const GridSet& safe,
                               const IntervalTable& t, double L, const Thresholds& c) {
    GridSet out(grid.size());
    for (std::size_t a = 0; a < grid.size(); ++a) {
        if (!safe.contains(a)) continue;
        bool found = false;
        for (std::size_t ap = 0; ap < grid.size(); ++ap) {
            if (safe.contains(ap)) continue;
            for (std::size_t i = 1; i <= c.size(); ++i) {
                if (t.upper(a, i) - L * grid.distance(a, ap) >= c[i - 1]) found = true;
            }
        }
        if (found) out.insert(a);
    }
    return out;
}

/// Fixed point of the reachability operator, adding one point at a time and
/// letting later points use witnesses added earlier in the same sweep.
inline GridSet naive_closure(const SyntheticEnv& env, const ReachabilityParams& p,
                             const GridSet& seed) {
    const auto& grid = env.grid();
    GridSet s = seed;
    if (s.empty()) return s;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t a = grid.size(); a-- > 0;) {
            if (s.contains(a)) continue;
            bool all = true;
            for (std::size_t i = 1; i <= p.thresholds.size(); ++i) {
                bool any = false;
                for (std::size_t b = 0; b < grid.size(); ++b) {
                    if (s.contains(b) && env.constraint_norm(b, i) - 2.0 * p.beta_bar -
                                                 p.lipschitz * grid.distance(a, b) >=
                                             p.thresholds[i - 1]) {
                        any = true;
                    }
                }
                all = all && any;
            }
            if (all) {
                s.insert(a);
                changed = true;
            }
        }
    }
    return s;
}

/// Sum of a few random sinusoids; smooth, so the grid Lipschitz constant is
/// modest.
struct Wiggle {
    std::vector<std::vector<double>> freq;
    std::vector<double> amp;
    std::vector<double> phase;

    Wiggle(Rng& rng, std::size_t dim, double scale) {
        for (int k = 0; k < 3; ++k) {
            std::vector<double> w;
            for (std::size_t d = 0; d < dim; ++d) w.push_back(rng.uniform(-2.0, 2.0));
            freq.push_back(w);
            amp.push_back(rng.uniform(0.0, scale));
            phase.push_back(rng.uniform(0.0, 6.283));
        }
    }
    double operator()(Point x) const {
        double s = 0.0;
        for (std::size_t k = 0; k < amp.size(); ++k) {
            double arg = phase[k];
            for (std::size_t d = 0; d < x.size(); ++d) arg += freq[k][d] * x[d];
            s += amp[k] * std::sin(arg);
        }
        return s;
    }
};

struct RandomProblem {
    Benchmark bench;
    double lipschitz = 1.0;
    double lambda = 0.1;
    double beta_bar = 0.2;
    double sigma = 0.01;
};

/// Small random environment with one or two constraints (one of them
/// possibly vector valued) and a strictly safe single-point seed.
inline RandomProblem random_problem(Rng& rng, std::size_t max_points = 200) {
    const std::size_t dim = 1 + rng.index(2);
    const std::size_t per_axis =
        dim == 1 ? 5 + rng.index(20) : 4 + rng.index(static_cast<std::size_t>(std::sqrt(max_points)) - 3);
    std::vector<Axis> axes(dim, Axis{-1.0, 1.0, per_axis});
    auto grid = ParameterGrid::regular(axes);
    const double spacing = 2.0 / static_cast<double>(per_axis - 1);

    Wiggle f(rng, dim, 0.5);
    const std::size_t q = 1 + rng.index(2);
    std::vector<Wiggle> g;
    std::vector<std::size_t> dims;
    for (std::size_t i = 0; i < q; ++i) {
        dims.push_back(rng.coin(0.3) ? 2 : 1);
        for (std::size_t k = 0; k < dims.back(); ++k) g.emplace_back(rng, dim, 0.4);
    }
    // Evaluate constraint norms to place the thresholds below the seed's.
    std::vector<SyntheticEnv::Constraint> cons;
    std::size_t offset = 0;
    for (std::size_t i = 0; i < q; ++i) {
        const std::size_t m = dims[i];
        std::vector<Wiggle> parts(g.begin() + offset, g.begin() + offset + m);
        offset += m;
        cons.push_back({[parts](Point x) {
                             std::vector<double> v;
                             for (const auto& w : parts) v.push_back(1.0 + w(x));
                             return v;
                         },
                         m, 0.0});
    }
    SyntheticEnv probe("random", grid, f, cons);
    const std::size_t seed_index = rng.index(grid.size());
    for (std::size_t i = 0; i < q; ++i) {
        cons[i].threshold =
            std::max(0.0, probe.constraint_norm(seed_index, i + 1) - rng.uniform(0.05, 0.6));
    }
    SyntheticEnv env("random", grid, f, cons);
    GridSet seed(grid.size());
    seed.insert(seed_index);

    RandomProblem p{Benchmark{env, seed, SuggestedSettings{}}};
    p.lipschitz = env.true_lipschitz() * rng.uniform(1.0, 1.3) + 1e-6;
    p.lambda = spacing * rng.uniform(0.3, 1.6);
    p.beta_bar = p.lipschitz * p.lambda + rng.uniform(0.05, 0.3);
    p.sigma = rng.coin(0.3) ? 0.0 : rng.uniform(0.001, 0.05);
    p.bench.env.set_noise(NoiseModel{rng.coin(0.5) ? NoiseKind::Gaussian : NoiseKind::Uniform,
                                     p.sigma});
    return p;
}

}  // namespace support
