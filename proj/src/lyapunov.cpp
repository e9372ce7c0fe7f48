#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include <Eigen/Core>

#include "lindblad/analysis.hpp"
#include "lindblad/dynamics.hpp"
#include "lindblad/errors.hpp"
#include "lindblad/ode.hpp"
#include "lindblad/solver.hpp"

namespace lindblad {

namespace {

// Layout: [state(3) | tangent 0 (3) | tangent 1 (3) | tangent 2 (3)].
using Augmented = ode::State<12>;

/// Modified Gram-Schmidt on the three tangent vectors; returns log stretch factors.
std::array<double, 3> orthonormalize(Augmented& s) {
  std::array<double, 3> logs{};
  for (int i = 0; i < 3; ++i) {
    double* wi = &s[static_cast<std::size_t>(3 + 3 * i)];
    for (int j = 0; j < i; ++j) {
      const double* wj = &s[static_cast<std::size_t>(3 + 3 * j)];
      const double proj = wi[0] * wj[0] + wi[1] * wj[1] + wi[2] * wj[2];
      for (int c = 0; c < 3; ++c) wi[c] -= proj * wj[c];
    }
    const double norm = std::sqrt(wi[0] * wi[0] + wi[1] * wi[1] + wi[2] * wi[2]);
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw DomainError("tangent vectors collapsed between renormalizations; shorten renorm_interval");
    }
    for (int c = 0; c < 3; ++c) wi[c] /= norm;
    logs[static_cast<std::size_t>(i)] = std::log(norm);
  }
  return logs;
}

}  // namespace

LyapunovSpectrum lyapunov_spectrum(const ModelSpec& model, const BlochVector& v0, const LyapunovOptions& opt) {
  require_valid(model);
  if (!(opt.dt > 0.0 && opt.renorm_interval > 0.0 && opt.total_time > 0.0 && opt.transient >= 0.0)) {
    throw DomainError("lyapunov_spectrum needs dt, renorm_interval, total_time > 0 and transient >= 0");
  }
  if (!v0.admissible()) throw AdmissibilityViolation("initial state outside the Bloch ball");

  const auto steps_per_renorm = std::max<long>(1, std::lround(opt.renorm_interval / opt.dt));
  const long transient_blocks = std::lround(opt.transient / (opt.dt * static_cast<double>(steps_per_renorm)));
  const long total_blocks = std::max<long>(1, std::lround(opt.total_time / (opt.dt * static_cast<double>(steps_per_renorm))));

  auto rhs = [&model](double, const Augmented& s) {
    const BlochVector v{s[0], s[1], s[2]};
    const Velocity f = field(model, v);
    const Eigen::Matrix3d J = jacobian(model, v);
    Augmented d;
    d[0] = f.dx;
    d[1] = f.dy;
    d[2] = f.dz;
    for (std::size_t k = 0; k < 3; ++k) {
      const Eigen::Vector3d w{s[3 + 3 * k], s[4 + 3 * k], s[5 + 3 * k]};
      const Eigen::Vector3d Jw = J * w;
      d[3 + 3 * k] = Jw[0];
      d[4 + 3 * k] = Jw[1];
      d[5 + 3 * k] = Jw[2];
    }
    return d;
  };

  Augmented s{};
  s[0] = v0.x;
  s[1] = v0.y;
  s[2] = v0.z;
  s[3] = s[7] = s[11] = 1.0;

  std::array<double, 3> sums{};
  double divergence_sum = 0.0;
  long divergence_samples = 0;
  double t = 0.0;
  for (long block = 0; block < transient_blocks + total_blocks; ++block) {
    const bool averaging = block >= transient_blocks;
    for (long k = 0; k < steps_per_renorm; ++k) {
      s = ode::rk4_step<12>(rhs, t, s, opt.dt);
      t += opt.dt;
      const BlochVector v{s[0], s[1], s[2]};
      if (v.norm() > 1.0 + kTrajectorySlack) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "state left the Bloch ball at t = " << t << ": |v| = " << v.norm();
        throw AdmissibilityViolation(msg.str());
      }
      if (averaging) {
        divergence_sum += jacobian(model, v).trace();
        ++divergence_samples;
      }
    }
    const auto logs = orthonormalize(s);
    if (averaging) {
      for (std::size_t i = 0; i < 3; ++i) sums[i] += logs[i];
    }
  }

  const double averaging_time = opt.dt * static_cast<double>(steps_per_renorm * total_blocks);
  LyapunovSpectrum out;
  for (std::size_t i = 0; i < 3; ++i) out.exponents[i] = sums[i] / averaging_time;
  std::sort(out.exponents.begin(), out.exponents.end(), std::greater<>());
  out.transient_discard = opt.dt * static_cast<double>(steps_per_renorm * transient_blocks);
  out.total_time = averaging_time;
  out.renorm_interval = opt.dt * static_cast<double>(steps_per_renorm);
  out.mean_divergence = divergence_sum / static_cast<double>(divergence_samples);
  return out;
}

}  // namespace lindblad
