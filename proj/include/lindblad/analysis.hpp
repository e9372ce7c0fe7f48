#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "lindblad/core.hpp"
#include "lindblad/exec.hpp"
#include "lindblad/models.hpp"

namespace lindblad {

// ---------------------------------------------------------------------------
// Linearization
// ---------------------------------------------------------------------------

/// Central finite-difference Jacobian of the model's field, (x, y, z) ordering.
/// Step per component is 1e-6 * max(1, |v_i|).
[[nodiscard]] Eigen::Matrix3d jacobian(const ModelSpec& model, const BlochVector& v);

using Eigenvalues = std::array<std::complex<double>, 3>;

/// Eigenvalues sorted by descending real part, then descending imaginary part.
[[nodiscard]] Eigenvalues eigenvalues(const Eigen::Matrix3d& m);

enum class StabilityClass { StableNode, StableSpiral, UnstableNode, UnstableSpiral, Saddle, Marginal };

[[nodiscard]] std::string_view to_string(StabilityClass c) noexcept;
[[nodiscard]] bool is_stable(StabilityClass c) noexcept;

/// Real parts are compared with +-1e-6 max(1, spectral radius), wide enough
/// for double roots, which Newton only resolves to about sqrt(eps). Any real part
/// inside the band gives Marginal. A mixed spectrum whose unstable part is a
/// complex pair is an UnstableSpiral (saddle-focus); otherwise mixed is Saddle.
[[nodiscard]] StabilityClass classify_eigenvalues(const Eigenvalues& eigs) noexcept;

// ---------------------------------------------------------------------------
// Fixed points
// ---------------------------------------------------------------------------

struct FixedPoint {
  BlochVector location;
  double residual{0.0};
  Eigenvalues eigenvalues{};
  StabilityClass stability{StabilityClass::Marginal};
};

struct NewtonOptions {
  /// Residual bound, scaled by max(1, h11 + h22 + h33) at the root.
  double residual_tol{1e-12};
  int max_iterations{50};
  double step_tol{1e-14};
  /// Iterates farther than this from the origin are abandoned.
  double escape_radius{1e3};
};

struct NewtonOutcome {
  BlochVector location;
  double residual{0.0};
  bool converged{false};
};

/// Newton iteration with the finite-difference Jacobian from one start.
/// Iterates until the step stalls so that multiple roots converge as far as
/// they can before the residual test.
[[nodiscard]] NewtonOutcome newton_solve(const ModelSpec& model, const BlochVector& start,
                                         const NewtonOptions& opt = {});

/// Lattice of grid_n^3 cell centres over [-1, 1]^3 kept inside the unit ball,
/// followed by the origin and the six axis points of the sphere.
[[nodiscard]] std::vector<BlochVector> newton_starts(int grid_n);

struct FixedPointOptions {
  int grid_n{5};
  double dedup_radius{1e-6};
  NewtonOptions newton{};
};

/// Multi-start Newton, deduplicated, classified and sorted by (z, x, y).
/// Roots outside the Bloch ball are kept; they matter for branch bookkeeping.
[[nodiscard]] std::vector<FixedPoint> find_fixed_points(const ModelSpec& model,
                                                        const FixedPointOptions& opt = {},
                                                        Exec exec = Exec::parallel);

[[nodiscard]] FixedPoint make_fixed_point(const ModelSpec& model, const BlochVector& location,
                                          double residual);

// ---------------------------------------------------------------------------
// Parameter sweeps
// ---------------------------------------------------------------------------

enum class BifurcationKind { SaddleNode, Pitchfork, Transcritical, Hopf, Unclassified };

[[nodiscard]] std::string_view to_string(BifurcationKind k) noexcept;

struct BifurcationEvent {
  BifurcationKind kind{BifurcationKind::Unclassified};
  /// Ordered (low, high) interval of the swept parameter that contains the
  /// bifurcation. Zero width when a sampled value is itself non-hyperbolic.
  std::pair<double, double> param_bracket{0.0, 0.0};
  std::string details;
};

struct BranchPoint {
  FixedPoint point;
  int branch_id{0};
};

struct SweepSpec {
  ModelSpec base;
  std::string param;
  double from{0.0};
  double to{1.0};
  int n_steps{101};  ///< number of sampled parameter values, endpoints included
  FixedPointOptions fixed_points{};
  /// Fixed points at adjacent values closer than this may belong to one branch.
  double link_radius{0.2};
};

struct SweepResult {
  std::string param_name;
  std::vector<double> param_values;
  std::vector<std::vector<BranchPoint>> branches;  ///< per parameter value
  std::vector<BifurcationEvent> events;
};

/// Throws InvalidParams if any swept value leaves the model's parameter region.
[[nodiscard]] SweepResult sweep(const SweepSpec& spec, Exec exec = Exec::parallel);

/// Critical b of zdot = -z (t + z^2) + b, 2 (|t|/3)^(3/2). Throws DomainError for t >= 0.
[[nodiscard]] double saddle_node_critical_b(double t);

// ---------------------------------------------------------------------------
// Limit cycles
// ---------------------------------------------------------------------------

struct LimitCycleOptions {
  double transient{200.0};
  int n_crossings{10};
  /// Integration time after the transient; 0 picks 4 n_crossings 2 pi / |b|.
  double max_time{0.0};
  double abs_tol{1e-11};
  double rel_tol{1e-11};
  /// Consecutive crossing radii must agree to this relative tolerance.
  double radius_tol{1e-4};
  double min_radius{1e-6};
};

struct LimitCycle {
  double radius_mean{0.0};
  double radius_stddev{0.0};
  double period{0.0};
  std::vector<double> crossing_times;
};

/// Hopf models only. Detects upward crossings of the half-plane x = 0, z > 0
/// with cubic Hermite interpolation on the bracketing step.
/// Throws NoCycleDetected when fewer than n_crossings settle on a cycle.
[[nodiscard]] LimitCycle limit_cycle(const ModelSpec& model, const BlochVector& v0,
                                     const LimitCycleOptions& opt = {});

// ---------------------------------------------------------------------------
// Lyapunov spectra
// ---------------------------------------------------------------------------

struct LyapunovOptions {
  double total_time{200.0};  ///< averaging time after the transient
  double transient{20.0};
  double renorm_interval{0.01};
  double dt{1e-4};  ///< RK4 step for state plus tangent vectors
};

struct LyapunovSpectrum {
  std::array<double, 3> exponents{};  ///< descending
  double transient_discard{0.0};
  double total_time{0.0};
  double renorm_interval{0.0};
  /// Time average of the Jacobian trace along the trajectory.
  double mean_divergence{0.0};
};

/// Benettin algorithm: three tangent vectors driven by the Jacobian and
/// re-orthonormalized by modified Gram-Schmidt every renorm_interval.
/// Throws DomainError if a tangent vector collapses to zero in between.
[[nodiscard]] LyapunovSpectrum lyapunov_spectrum(const ModelSpec& model, const BlochVector& v0,
                                                 const LyapunovOptions& opt = {});

// ---------------------------------------------------------------------------
// Phase portraits
// ---------------------------------------------------------------------------

enum class Plane { Y0, Z0, X0 };

[[nodiscard]] std::string_view to_string(Plane p) noexcept;
[[nodiscard]] std::optional<Plane> parse_plane(std::string_view s) noexcept;

/// Grid row in plane coordinates: y=0 -> (x, z), z=0 -> (x, y), x=0 -> (y, z).
struct PortraitSample {
  double c1{0.0};
  double c2{0.0};
  double dc1{0.0};
  double dc2{0.0};
};

/// n x n uniform grid over [-1, 1]^2 (the square around the plane's unit disk),
/// row-major in c2 then c1. n = 1 is the single centre sample.
[[nodiscard]] std::vector<PortraitSample> vector_field_grid(const ModelSpec& model, Plane plane, int n,
                                                            Exec exec = Exec::parallel);

}  // namespace lindblad
