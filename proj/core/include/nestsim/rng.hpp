#pragma once

#include <cstdint>
#include <numbers>

#include "nestsim/linalg.hpp"

namespace nestsim {

/// Counter-based splitmix64 stream. Seeding by (seed, index) gives every
/// sample an independent, order-free stream, which is what makes parallel
/// evaluation bit-identical to sequential.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    SplitMix64(std::uint64_t seed, std::uint64_t index)
        : state_(seed ^ (0x9e3779b97f4a7c15ULL * (index + 1))) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform direction on the unit sphere.
    Vec3 unit_vector() {
        const double z = uniform(-1.0, 1.0);
        const double phi = uniform(0.0, 2.0 * std::numbers::pi);
        const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        return {s * std::cos(phi), s * std::sin(phi), z};
    }

  private:
    std::uint64_t state_;
};

}  // namespace nestsim
