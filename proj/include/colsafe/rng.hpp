#pragma once

#include <cstdint>

namespace colsafe {

/// Counter-based generator: draw k of stream s under seed x is a pure
/// function of (x, s, k), so replicas are reproducible regardless of
/// scheduling. Gaussians use Box-Muller so sequences do not depend on the
/// standard library's distribution implementation.
class NoiseStream {
public:
    NoiseStream(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64();
    /// Uniform on (0, 1].
    double uniform();
    double gaussian();

    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace colsafe
