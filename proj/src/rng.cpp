#include "colsafe/rng.hpp"

#include <cmath>
#include <numbers>

namespace colsafe {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

NoiseStream::NoiseStream(std::uint64_t seed, std::uint64_t stream)
    : key_(splitmix64(seed) ^ splitmix64(stream * 0xd1b54a32d192ed03ULL + 1)) {}

std::uint64_t NoiseStream::next_u64() {
    return splitmix64(key_ + 0x9e3779b97f4a7c15ULL * counter_++);
}

double NoiseStream::uniform() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
}

double NoiseStream::gaussian() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace colsafe
