#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "lindblad/core.hpp"

namespace lindblad {

/// Seeded uniform source. Doubles are built from the top 53 bits of
/// mt19937_64 so sequences are identical across standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
  std::mt19937_64 engine_;
};

/// Uniform in the closed unit ball (rejection from the cube).
[[nodiscard]] std::vector<BlochVector> sample_ball(std::size_t n, std::uint64_t seed);

/// Uniform in the unit disk of the y = 0 plane.
[[nodiscard]] std::vector<BlochVector> sample_disk_y0(std::size_t n, std::uint64_t seed);

/// Uniform on the unit sphere (Archimedes' projection).
[[nodiscard]] std::vector<BlochVector> sample_sphere(std::size_t n, std::uint64_t seed);

}  // namespace lindblad
