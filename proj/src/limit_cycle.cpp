#include <cmath>
#include <numbers>
#include <sstream>

#include "lindblad/analysis.hpp"
#include "lindblad/dynamics.hpp"
#include "lindblad/errors.hpp"
#include "lindblad/ode.hpp"
#include "lindblad/solver.hpp"

namespace lindblad {

namespace {

struct Sample {
  double t;
  BlochVector v;
  Velocity f;
};

/// Cubic Hermite interpolant of one component on [a.t, b.t] at parameter s in [0, 1].
double hermite(double y0, double y1, double d0, double d1, double h, double s) {
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * d0 + (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * h * d1;
}

/// Root of the Hermite interpolant of x on the step, by bisection.
double crossing_fraction(const Sample& a, const Sample& b) {
  const double h = b.t - a.t;
  double lo = 0.0;
  double hi = 1.0;
  const bool lo_negative = a.v.x < 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double x = hermite(a.v.x, b.v.x, a.f.dx, b.f.dx, h, mid);
    if ((x < 0.0) == lo_negative) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

LimitCycle limit_cycle(const ModelSpec& model, const BlochVector& v0, const LimitCycleOptions& opt) {
  if (model.kind() != ModelKind::Hopf) {
    throw UnsupportedKind("limit_cycle applies to Hopf models, not " + std::string(to_string(model.kind())));
  }
  require_valid(model);
  if (opt.n_crossings < 2) throw DomainError("limit_cycle needs n_crossings >= 2");
  const double b = std::get<HopfParams>(model.params).b;
  if (b == 0.0) throw NoCycleDetected("b = 0: no rotation, no cycle");

  const double window = opt.max_time > 0.0 ? opt.max_time : 4.0 * opt.n_crossings * 2.0 * std::numbers::pi / std::abs(b);
  IntegratorConfig cfg;
  cfg.method = Method::RK45;
  cfg.abs_tol = opt.abs_tol;
  cfg.rel_tol = opt.rel_tol;
  cfg.t_end = opt.transient + window;

  std::vector<double> crossing_times;
  std::vector<double> crossing_radii;
  std::vector<Sample> on_cycle;
  Sample previous{};
  bool have_previous = false;

  integrate_observed(model, v0, cfg, [&](double t, const BlochVector& v, const Velocity& f) {
    const Sample current{t, v, f};
    if (t >= opt.transient && static_cast<int>(crossing_times.size()) < opt.n_crossings) {
      on_cycle.push_back(current);
      if (have_previous && previous.t >= opt.transient && (previous.v.x < 0.0) != (v.x < 0.0)) {
        const double s = crossing_fraction(previous, current);
        const double h = t - previous.t;
        const double z = hermite(previous.v.z, v.z, previous.f.dz, f.dz, h, s);
        if (z > 0.0) {
          crossing_times.push_back(previous.t + s * h);
          crossing_radii.push_back(z);
        }
      }
    }
    previous = current;
    have_previous = true;
  });

  std::ostringstream why;
  why.precision(6);
  if (static_cast<int>(crossing_times.size()) < opt.n_crossings) {
    why << "only " << crossing_times.size() << " of " << opt.n_crossings << " section crossings after t = "
        << opt.transient;
    throw NoCycleDetected(why.str());
  }
  for (std::size_t i = 0; i < crossing_radii.size(); ++i) {
    if (crossing_radii[i] < opt.min_radius) {
      why << "orbit collapsed to the fixed point (crossing radius " << crossing_radii[i] << ")";
      throw NoCycleDetected(why.str());
    }
    if (i > 0) {
      const double rel = std::abs(crossing_radii[i] - crossing_radii[i - 1]) / crossing_radii[i - 1];
      if (rel > opt.radius_tol) {
        why << "crossing radii still drifting (relative change " << rel << ")";
        throw NoCycleDetected(why.str());
      }
    }
  }

  LimitCycle cycle;
  cycle.crossing_times = crossing_times;
  cycle.period = (crossing_times.back() - crossing_times.front()) / static_cast<double>(crossing_times.size() - 1);
  double sum = 0.0;
  double sum2 = 0.0;
  for (const auto& s : on_cycle) {
    const double r = std::sqrt(s.v.x * s.v.x + s.v.z * s.v.z);
    sum += r;
    sum2 += r * r;
  }
  const auto n = static_cast<double>(on_cycle.size());
  cycle.radius_mean = sum / n;
  cycle.radius_stddev = std::sqrt(std::max(0.0, sum2 / n - cycle.radius_mean * cycle.radius_mean));
  return cycle;
}

}  // namespace lindblad
