#include "lindblad/analysis.hpp"
#include "lindblad/kernels.hpp"

namespace lindblad {

std::string_view to_string(Plane p) noexcept {
  switch (p) {
    case Plane::Y0: return "y=0";
    case Plane::Z0: return "z=0";
    case Plane::X0: return "x=0";
  }
  return "unknown";
}

std::optional<Plane> parse_plane(std::string_view s) noexcept {
  if (s == "y=0") return Plane::Y0;
  if (s == "z=0") return Plane::Z0;
  if (s == "x=0") return Plane::X0;
  return std::nullopt;
}

std::vector<PortraitSample> vector_field_grid(const ModelSpec& model, Plane plane, int n, Exec exec) {
  std::vector<PortraitSample> grid;
  if (n < 1) return grid;
  auto coord = [n](int i) { return n == 1 ? 0.0 : -1.0 + 2.0 * i / (n - 1); };

  std::vector<BlochVector> states;
  states.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double c1 = coord(i);
      const double c2 = coord(j);
      grid.push_back({c1, c2, 0.0, 0.0});
      switch (plane) {
        case Plane::Y0: states.push_back({c1, 0.0, c2}); break;
        case Plane::Z0: states.push_back({c1, c2, 0.0}); break;
        case Plane::X0: states.push_back({0.0, c1, c2}); break;
      }
    }
  }

  const auto velocities = exec == Exec::parallel ? kernels::field_at(model, states)
                                                 : kernels::serial::field_at(model, states);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Velocity& f = velocities[k];
    switch (plane) {
      case Plane::Y0: grid[k].dc1 = f.dx; grid[k].dc2 = f.dz; break;
      case Plane::Z0: grid[k].dc1 = f.dx; grid[k].dc2 = f.dy; break;
      case Plane::X0: grid[k].dc1 = f.dy; grid[k].dc2 = f.dz; break;
    }
  }
  return grid;
}

}  // namespace lindblad
