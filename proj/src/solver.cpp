#include "lindblad/solver.hpp"

#include <cmath>
#include <sstream>

#include "lindblad/dynamics.hpp"
#include "lindblad/errors.hpp"
#include "lindblad/kernels.hpp"
#include "lindblad/sampling.hpp"

namespace lindblad {

namespace {

void check_admissible(double t, const BlochVector& v) {
  if (v.norm() > 1.0 + kTrajectorySlack) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "state left the Bloch ball at t = " << t << ": |v| = " << v.norm();
    throw AdmissibilityViolation(msg.str());
  }
}

}  // namespace

void validate_config(const IntegratorConfig& cfg) {
  if (!(cfg.t_end >= 0.0) || !std::isfinite(cfg.t_end)) throw DomainError("t_end must be finite and >= 0");
  if (cfg.max_steps < 1) throw DomainError("max_steps must be >= 1");
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw DomainError("dt must be finite and > 0");
  if (cfg.method == Method::RK45 && !(cfg.abs_tol > 0.0 && cfg.rel_tol > 0.0)) {
    throw DomainError("tolerances must be > 0");
  }
}

void integrate_observed(const ModelSpec& model, const BlochVector& v0, const IntegratorConfig& cfg,
                        const StepObserver& observer) {
  require_valid(model);
  validate_config(cfg);
  if (!v0.admissible()) {
    std::ostringstream msg;
    msg << "initial state has |v| = " << v0.norm() << " > 1";
    throw AdmissibilityViolation(msg.str());
  }

  auto rhs = [&model](double, const ode::State<3>& s) { return to_state(field(model, to_bloch(s))); };

  if (cfg.method == Method::RK4) {
    ode::integrate_rk4<3>(rhs, 0.0, to_state(v0), cfg.t_end, cfg.dt, cfg.max_steps,
                          [&](double t, const ode::State<3>& s) {
                            const BlochVector v = to_bloch(s);
                            check_admissible(t, v);
                            observer(t, v, field(model, v));
                          });
    return;
  }

  ode::AdaptiveOptions opt;
  opt.abs_tol = cfg.abs_tol;
  opt.rel_tol = cfg.rel_tol;
  opt.max_steps = cfg.max_steps;
  ode::integrate_dopri5<3>(rhs, 0.0, to_state(v0), cfg.t_end, opt,
                           [&](double t, const ode::State<3>& s, const ode::State<3>& ds) {
                             const BlochVector v = to_bloch(s);
                             check_admissible(t, v);
                             observer(t, v, Velocity{ds[0], ds[1], ds[2]});
                           });
}

Trajectory integrate(const ModelSpec& model, const BlochVector& v0, const IntegratorConfig& cfg) {
  Trajectory traj{{}, {}, model, cfg};
  integrate_observed(model, v0, cfg, [&traj](double t, const BlochVector& v, const Velocity&) {
    traj.times.push_back(t);
    traj.states.push_back(v);
  });
  return traj;
}

ClosedForm1D closed_form_1d(double h11, double h22, double gamma, double z0, cplx s0, double t) {
  const double total = h11 + h22;
  ClosedForm1D out;
  if (total == 0.0) {
    out.z = z0;
  } else {
    const double z_inf = (h11 - h22) / total;
    out.z = z_inf + (z0 - z_inf) * std::exp(-total * t);
  }
  out.s = s0 * std::exp(-gamma * t);
  return out;
}

double sample_boundary_flux(const ModelSpec& model, std::size_t n, std::uint64_t seed, Exec exec) {
  require_valid(model);
  const auto points = sample_sphere(n, seed);
  return exec == Exec::parallel ? kernels::max_outward_flux(model, points)
                                : kernels::serial::max_outward_flux(model, points);
}

}  // namespace lindblad
