#include <algorithm>
#include <cstddef>
#include <limits>

#include "lindblad/dynamics.hpp"
#include "lindblad/kernels.hpp"

namespace lindblad::kernels {

double max_normal_form_deviation(const ModelSpec& model, std::span<const BlochVector> states) {
  const auto n = static_cast<std::ptrdiff_t>(states.size());
  double worst = 0.0;
#pragma omp parallel for reduction(max : worst) schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const BlochVector& v = states[static_cast<std::size_t>(i)];
    worst = std::max(worst, max_abs_difference(field(model, v), normal_form_rhs(model, v)));
  }
  return worst;
}

double max_outward_flux(const ModelSpec& model, std::span<const BlochVector> states) {
  const auto n = static_cast<std::ptrdiff_t>(states.size());
  double worst = -std::numeric_limits<double>::infinity();
#pragma omp parallel for reduction(max : worst) schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const BlochVector& v = states[static_cast<std::size_t>(i)];
    worst = std::max(worst, dot(v, field(model, v)));
  }
  return worst;
}

double min_psd_minor(const ModelSpec& model, std::span<const BlochVector> states) {
  const auto n = static_cast<std::ptrdiff_t>(states.size());
  double lowest = std::numeric_limits<double>::infinity();
#pragma omp parallel for reduction(min : lowest) schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    lowest = std::min(lowest, psd_check(evaluate(model, states[static_cast<std::size_t>(i)]).h).min_minor());
  }
  return lowest;
}

std::vector<Velocity> field_at(const ModelSpec& model, std::span<const BlochVector> states) {
  std::vector<Velocity> out(states.size());
  const auto n = static_cast<std::ptrdiff_t>(states.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out[k] = field(model, states[k]);
  }
  return out;
}

std::vector<NewtonOutcome> newton_multistart(const ModelSpec& model, std::span<const BlochVector> starts,
                                             const NewtonOptions& opt) {
  std::vector<NewtonOutcome> out(starts.size());
  const auto n = static_cast<std::ptrdiff_t>(starts.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out[k] = newton_solve(model, starts[k], opt);
  }
  return out;
}

std::vector<std::vector<FixedPoint>> fixed_points_over(std::span<const ModelSpec> models,
                                                       const FixedPointOptions& opt) {
  std::vector<std::vector<FixedPoint>> out(models.size());
  const auto n = static_cast<std::ptrdiff_t>(models.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out[k] = find_fixed_points(models[k], opt, Exec::serial);
  }
  return out;
}

}  // namespace lindblad::kernels
