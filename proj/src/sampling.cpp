#include "lindblad/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lindblad {

std::vector<BlochVector> sample_ball(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<BlochVector> out;
  out.reserve(n);
  while (out.size() < n) {
    const BlochVector v{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    if (v.norm2() <= 1.0) out.push_back(v);
  }
  return out;
}

std::vector<BlochVector> sample_disk_y0(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<BlochVector> out;
  out.reserve(n);
  while (out.size() < n) {
    const BlochVector v{rng.uniform(-1.0, 1.0), 0.0, rng.uniform(-1.0, 1.0)};
    if (v.norm2() <= 1.0) out.push_back(v);
  }
  return out;
}

std::vector<BlochVector> sample_sphere(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<BlochVector> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = rng.uniform(-1.0, 1.0);
    const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    out.push_back({s * std::cos(phi), s * std::sin(phi), z});
  }
  return out;
}

}  // namespace lindblad
