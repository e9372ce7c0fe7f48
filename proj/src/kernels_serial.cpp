#include <algorithm>
#include <limits>

#include "lindblad/dynamics.hpp"
#include "lindblad/kernels.hpp"

namespace lindblad::kernels::serial {

double max_normal_form_deviation(const ModelSpec& model, std::span<const BlochVector> states) {
  double worst = 0.0;
  for (const auto& v : states) {
    worst = std::max(worst, max_abs_difference(field(model, v), normal_form_rhs(model, v)));
  }
  return worst;
}

double max_outward_flux(const ModelSpec& model, std::span<const BlochVector> states) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& v : states) worst = std::max(worst, dot(v, field(model, v)));
  return worst;
}

double min_psd_minor(const ModelSpec& model, std::span<const BlochVector> states) {
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& v : states) lowest = std::min(lowest, psd_check(evaluate(model, v).h).min_minor());
  return lowest;
}

std::vector<Velocity> field_at(const ModelSpec& model, std::span<const BlochVector> states) {
  std::vector<Velocity> out;
  out.reserve(states.size());
  for (const auto& v : states) out.push_back(field(model, v));
  return out;
}

std::vector<NewtonOutcome> newton_multistart(const ModelSpec& model, std::span<const BlochVector> starts,
                                             const NewtonOptions& opt) {
  std::vector<NewtonOutcome> out;
  out.reserve(starts.size());
  for (const auto& s : starts) out.push_back(newton_solve(model, s, opt));
  return out;
}

std::vector<std::vector<FixedPoint>> fixed_points_over(std::span<const ModelSpec> models,
                                                       const FixedPointOptions& opt) {
  std::vector<std::vector<FixedPoint>> out;
  out.reserve(models.size());
  for (const auto& m : models) out.push_back(find_fixed_points(m, opt, Exec::serial));
  return out;
}

}  // namespace lindblad::kernels::serial
