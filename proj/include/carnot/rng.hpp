#pragma once

// Deterministic random source for sample sweeps.  splitmix64 underneath;
// the double helpers avoid std::uniform_real_distribution so that byte
// streams are identical across standard libraries.

#include <cstdint>

#include "carnot/group.hpp"

namespace carnot {

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0,1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Log-uniform in [lo, hi], lo > 0.
    double log_uniform(double lo, double hi) {
        return lo * std::pow(hi / lo, uniform());
    }

    int uniform_int(int n) { return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n)); }

    GroupPoint point_in_box(double half_width) {
        return {uniform(-half_width, half_width), uniform(-half_width, half_width),
                uniform(-half_width, half_width)};
    }

  private:
    std::uint64_t state_;
};

}  // namespace carnot
