#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include <Eigen/Core>

namespace fmcm {

/**
 * Deterministic random source.  All mappings from raw 64-bit words to
 * doubles are spelled out here instead of going through std distributions,
 * whose output is implementation defined; the same seed therefore produces
 * the same stream on every platform.
 */
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi], inclusive.
    int uniform_int(int lo, int hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(gen_() % span);
    }

    /// Uniform point of the closed disk of radius R about the origin.
    Eigen::Vector2d in_disk(double radius) {
        double r = radius * std::sqrt(uniform());
        double t = uniform(0.0, 2 * std::numbers::pi);
        return {r * std::cos(t), r * std::sin(t)};
    }

  private:
    std::mt19937_64 gen_;
};

}  // namespace fmcm
