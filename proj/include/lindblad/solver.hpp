#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "lindblad/core.hpp"
#include "lindblad/exec.hpp"
#include "lindblad/models.hpp"
#include "lindblad/ode.hpp"

namespace lindblad {

enum class Method { RK4, RK45 };

struct IntegratorConfig {
  Method method{Method::RK45};
  double dt{1e-3};  ///< RK4 step (upper bound; steps are made uniform)
  double abs_tol{1e-9};
  double rel_tol{1e-9};
  std::size_t max_steps{10'000'000};
  double t_end{10.0};
};

/// Throws DomainError when dt, tolerances, t_end or max_steps are out of range.
void validate_config(const IntegratorConfig& cfg);

/// States are checked against |v| <= 1 + kTrajectorySlack.
inline constexpr double kTrajectorySlack = 10.0 * kAdmissibilitySlack;

struct Trajectory {
  std::vector<double> times;
  std::vector<BlochVector> states;
  ModelSpec model;
  IntegratorConfig config;
};

/// Called with (t, state, velocity) at the initial state and every accepted step.
using StepObserver = std::function<void(double, const BlochVector&, const Velocity&)>;

/// Integrates the model's vector field without storing the trajectory.
/// Throws InvalidParams, AdmissibilityViolation or StepLimitExceeded.
void integrate_observed(const ModelSpec& model, const BlochVector& v0, const IntegratorConfig& cfg,
                        const StepObserver& observer);

[[nodiscard]] Trajectory integrate(const ModelSpec& model, const BlochVector& v0,
                                   const IntegratorConfig& cfg);

struct ClosedForm1D {
  double z{0.0};
  cplx s{0.0, 0.0};  ///< s = x + i y
};

/// Exact solution of zdot = (h11 - h22) - (h11 + h22) z, sdot = -Gamma s for
/// state-independent rates.
[[nodiscard]] ClosedForm1D closed_form_1d(double h11, double h22, double gamma, double z0, cplx s0,
                                          double t);

/// max over n seeded unit-sphere points of v . F(v); U is trapping when < 0.
[[nodiscard]] double sample_boundary_flux(const ModelSpec& model, std::size_t n, std::uint64_t seed,
                                          Exec exec = Exec::parallel);

inline ode::State<3> to_state(const BlochVector& v) { return {v.x, v.y, v.z}; }
inline BlochVector to_bloch(const ode::State<3>& s) { return {s[0], s[1], s[2]}; }
inline ode::State<3> to_state(const Velocity& f) { return {f.dx, f.dy, f.dz}; }

}  // namespace lindblad
