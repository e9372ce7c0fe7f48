#pragma once

// Data-parallel loops used by the analysis layer. Every kernel has a serial
// reference in kernels::serial with an identical contract; results agree bit
// for bit because inputs are generated up front and reductions are max/min.

#include <span>
#include <vector>

#include "lindblad/analysis.hpp"
#include "lindblad/core.hpp"
#include "lindblad/models.hpp"

namespace lindblad::kernels {

/// max_i max-component |field(s_i) - normal_form_rhs(s_i)|. Model must not be ConstantH.
[[nodiscard]] double max_normal_form_deviation(const ModelSpec& model, std::span<const BlochVector> states);

/// max_i s_i . field(s_i).
[[nodiscard]] double max_outward_flux(const ModelSpec& model, std::span<const BlochVector> states);

/// min_i of PsdReport::min_minor at evaluate(model, s_i).
[[nodiscard]] double min_psd_minor(const ModelSpec& model, std::span<const BlochVector> states);

[[nodiscard]] std::vector<Velocity> field_at(const ModelSpec& model, std::span<const BlochVector> states);

[[nodiscard]] std::vector<NewtonOutcome> newton_multistart(const ModelSpec& model,
                                                           std::span<const BlochVector> starts,
                                                           const NewtonOptions& opt);

/// find_fixed_points (serial inside) for each model.
[[nodiscard]] std::vector<std::vector<FixedPoint>> fixed_points_over(std::span<const ModelSpec> models,
                                                                     const FixedPointOptions& opt);

namespace serial {

[[nodiscard]] double max_normal_form_deviation(const ModelSpec& model, std::span<const BlochVector> states);
[[nodiscard]] double max_outward_flux(const ModelSpec& model, std::span<const BlochVector> states);
[[nodiscard]] double min_psd_minor(const ModelSpec& model, std::span<const BlochVector> states);
[[nodiscard]] std::vector<Velocity> field_at(const ModelSpec& model, std::span<const BlochVector> states);
[[nodiscard]] std::vector<NewtonOutcome> newton_multistart(const ModelSpec& model,
                                                           std::span<const BlochVector> starts,
                                                           const NewtonOptions& opt);
[[nodiscard]] std::vector<std::vector<FixedPoint>> fixed_points_over(std::span<const ModelSpec> models,
                                                                     const FixedPointOptions& opt);

}  // namespace serial

}  // namespace lindblad::kernels
