#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "lindblad/core.hpp"

namespace lindblad {

enum class ModelKind { ConstantH, Pitchfork, SaddleNode, Transcritical, Hopf, Roessler };

[[nodiscard]] std::string_view to_string(ModelKind kind) noexcept;
[[nodiscard]] std::optional<ModelKind> parse_model_kind(std::string_view name) noexcept;

// Each parameter struct lists its fields by name so that sweeps and the JSON
// config can address parameters generically.

/// State-independent diagonal h with H = 0.
struct ConstantHParams {
  static constexpr ModelKind kind = ModelKind::ConstantH;
  double h11{1.0};
  double h22{1.0};
  double h33{0.0};
  static constexpr std::array fields{std::pair{"h11", &ConstantHParams::h11},
                                     std::pair{"h22", &ConstantHParams::h22},
                                     std::pair{"h33", &ConstantHParams::h33}};
};

/// zdot = -z (t + z^2).
struct PitchforkParams {
  static constexpr ModelKind kind = ModelKind::Pitchfork;
  double alpha{0.5};
  double t{-0.25};
  static constexpr std::array fields{std::pair{"alpha", &PitchforkParams::alpha},
                                     std::pair{"t", &PitchforkParams::t}};
};

/// zdot = -z (t + z^2) + b.
struct SaddleNodeParams {
  static constexpr ModelKind kind = ModelKind::SaddleNode;
  double alpha{0.5};
  double t{-0.75};
  double b{0.0};
  static constexpr std::array fields{std::pair{"alpha", &SaddleNodeParams::alpha},
                                     std::pair{"t", &SaddleNodeParams::t},
                                     std::pair{"b", &SaddleNodeParams::b}};
};

/// qdot = -q (q - c) with q = (z + 1) / 2.
struct TranscriticalParams {
  static constexpr ModelKind kind = ModelKind::Transcritical;
  double alpha{1.0};
  double c{0.5};
  static constexpr std::array fields{std::pair{"alpha", &TranscriticalParams::alpha},
                                     std::pair{"c", &TranscriticalParams::c}};
};

/// Hopf normal form in the (z, x) plane with precession rate b.
struct HopfParams {
  static constexpr ModelKind kind = ModelKind::Hopf;
  double delta{0.9};
  double epsilon{0.25};
  double b{0.2};
  static constexpr std::array fields{std::pair{"delta", &HopfParams::delta},
                                     std::pair{"epsilon", &HopfParams::epsilon},
                                     std::pair{"b", &HopfParams::b}};
};

/// Roessler system rescaled by M and shifted by epsilon along x.
/// h33_scale multiplies the h33 entry; the vector field does not depend on it.
struct RoesslerParams {
  static constexpr ModelKind kind = ModelKind::Roessler;
  double a{0.1};
  double b{0.1};
  double c{14.0};
  double M{50.0};
  double epsilon{0.35};
  double h33_scale{1.0};
  static constexpr std::array fields{std::pair{"a", &RoesslerParams::a},
                                     std::pair{"b", &RoesslerParams::b},
                                     std::pair{"c", &RoesslerParams::c},
                                     std::pair{"M", &RoesslerParams::M},
                                     std::pair{"epsilon", &RoesslerParams::epsilon},
                                     std::pair{"h33_scale", &RoesslerParams::h33_scale}};
};

using ModelParams = std::variant<ConstantHParams, PitchforkParams, SaddleNodeParams,
                                 TranscriticalParams, HopfParams, RoesslerParams>;

/// A state-dependent coefficient matrix and Hamiltonian, i.e. one nonlinear
/// Lindblad generator.
struct ModelSpec {
  ModelParams params;

  [[nodiscard]] ModelKind kind() const noexcept;
  [[nodiscard]] std::vector<std::string> param_names() const;
  /// Throws InvalidParams for an unknown name.
  [[nodiscard]] double get(std::string_view name) const;
  [[nodiscard]] ModelSpec with(std::string_view name, double value) const;
  /// True for the kinds whose long-time dynamics live on the z axis.
  [[nodiscard]] bool is_one_dimensional() const noexcept;
};

/// Default parameters for a kind (the values used in the examples above).
[[nodiscard]] ModelSpec default_model(ModelKind kind);

struct ModelTerms {
  CoeffMatrix h;
  Hamiltonian2 H;
};

struct ValidationReport {
  std::vector<std::string> violations;
  [[nodiscard]] bool ok() const noexcept { return violations.empty(); }
};

[[nodiscard]] ValidationReport validate_params(const ModelSpec& model);

/// Throws InvalidParams listing every violation.
void require_valid(const ModelSpec& model);

/// Coefficient matrix and Hamiltonian at the state v. No validation is done;
/// callers on hot paths validate once up front.
[[nodiscard]] ModelTerms evaluate(const ModelSpec& model, const BlochVector& v) noexcept;

/// Same as evaluate but rejects parameters outside the admissible region.
[[nodiscard]] ModelTerms evaluate_checked(const ModelSpec& model, const BlochVector& v);

/// Minimum of h11 and h22 over grid_n uniform points of z in [-1, 1]
/// (q in [0, 1] for Transcritical). One-dimensional kinds only.
[[nodiscard]] double nonneg_scan(const ModelSpec& model, int grid_n);

}  // namespace lindblad
