#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "lindblad/analysis.hpp"
#include "lindblad/dynamics.hpp"
#include "lindblad/kernels.hpp"

namespace lindblad {

namespace {

Eigen::Vector3d as_vector(const Velocity& f) { return {f.dx, f.dy, f.dz}; }
Eigen::Vector3d as_vector(const BlochVector& v) { return {v.x, v.y, v.z}; }
BlochVector as_bloch(const Eigen::Vector3d& v) { return {v[0], v[1], v[2]}; }

double distance(const BlochVector& a, const BlochVector& b) {
  return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) + (a.z - b.z) * (a.z - b.z));
}

}  // namespace

Eigen::Matrix3d jacobian(const ModelSpec& model, const BlochVector& v) {
  Eigen::Matrix3d J;
  const Eigen::Vector3d base = as_vector(v);
  for (int j = 0; j < 3; ++j) {
    const double h = 1e-6 * std::max(1.0, std::abs(base[j]));
    Eigen::Vector3d plus = base;
    Eigen::Vector3d minus = base;
    plus[j] += h;
    minus[j] -= h;
    J.col(j) = (as_vector(field(model, as_bloch(plus))) - as_vector(field(model, as_bloch(minus)))) / (2.0 * h);
  }
  return J;
}

Eigenvalues eigenvalues(const Eigen::Matrix3d& m) {
  Eigen::EigenSolver<Eigen::Matrix3d> solver(m, /*computeEigenvectors=*/false);
  const auto& values = solver.eigenvalues();
  Eigenvalues out{values[0], values[1], values[2]};
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  return out;
}

std::string_view to_string(StabilityClass c) noexcept {
  switch (c) {
    case StabilityClass::StableNode: return "StableNode";
    case StabilityClass::StableSpiral: return "StableSpiral";
    case StabilityClass::UnstableNode: return "UnstableNode";
    case StabilityClass::UnstableSpiral: return "UnstableSpiral";
    case StabilityClass::Saddle: return "Saddle";
    case StabilityClass::Marginal: return "Marginal";
  }
  return "Unknown";
}

bool is_stable(StabilityClass c) noexcept {
  return c == StabilityClass::StableNode || c == StabilityClass::StableSpiral;
}

StabilityClass classify_eigenvalues(const Eigenvalues& eigs) noexcept {
  double radius = 0.0;
  for (const auto& e : eigs) radius = std::max(radius, std::abs(e));
  const double tol = 1e-6 * std::max(1.0, radius);

  int positive = 0;
  bool any_complex = false;
  bool unstable_complex = false;
  for (const auto& e : eigs) {
    if (std::abs(e.real()) <= tol) return StabilityClass::Marginal;
    const bool complex = std::abs(e.imag()) > tol;
    any_complex = any_complex || complex;
    if (e.real() > 0.0) {
      ++positive;
      unstable_complex = unstable_complex || complex;
    }
  }
  if (positive == 0) return any_complex ? StabilityClass::StableSpiral : StabilityClass::StableNode;
  if (positive == 3) return any_complex ? StabilityClass::UnstableSpiral : StabilityClass::UnstableNode;
  return unstable_complex ? StabilityClass::UnstableSpiral : StabilityClass::Saddle;
}

NewtonOutcome newton_solve(const ModelSpec& model, const BlochVector& start, const NewtonOptions& opt) {
  Eigen::Vector3d x = as_vector(start);
  for (int it = 0; it < opt.max_iterations; ++it) {
    const Eigen::Vector3d f = as_vector(field(model, as_bloch(x)));
    if (f.isZero(0.0)) break;
    const Eigen::FullPivLU<Eigen::Matrix3d> lu(jacobian(model, as_bloch(x)));
    if (!lu.isInvertible()) break;
    const Eigen::Vector3d step = lu.solve(f);
    x -= step;
    if (!x.allFinite() || x.norm() > opt.escape_radius) return {as_bloch(x), 0.0, false};
    if (step.norm() <= opt.step_tol * std::max(1.0, x.norm())) break;
  }
  NewtonOutcome out;
  out.location = as_bloch(x);
  out.residual = as_vector(field(model, out.location)).norm();
  const CoeffMatrix h = evaluate(model, out.location).h;
  const double scale = std::max(1.0, std::abs(h.h11) + std::abs(h.h22) + std::abs(h.h33));
  out.converged = std::isfinite(out.residual) && out.residual < opt.residual_tol * scale;
  return out;
}

std::vector<BlochVector> newton_starts(int grid_n) {
  std::vector<BlochVector> starts;
  if (grid_n < 1) return starts;
  auto centre = [grid_n](int i) { return -1.0 + (2.0 * i + 1.0) / grid_n; };
  for (int i = 0; i < grid_n; ++i) {
    for (int j = 0; j < grid_n; ++j) {
      for (int k = 0; k < grid_n; ++k) {
        const BlochVector v{centre(i), centre(j), centre(k)};
        if (v.norm() <= 1.0) starts.push_back(v);
      }
    }
  }
  // Pure states on the axes are common roots and the lattice never lands on them.
  starts.push_back({0.0, 0.0, 0.0});
  for (double s : {-1.0, 1.0}) {
    starts.push_back({s, 0.0, 0.0});
    starts.push_back({0.0, s, 0.0});
    starts.push_back({0.0, 0.0, s});
  }
  return starts;
}

FixedPoint make_fixed_point(const ModelSpec& model, const BlochVector& location, double residual) {
  FixedPoint fp;
  fp.location = location;
  fp.residual = residual;
  fp.eigenvalues = eigenvalues(jacobian(model, location));
  fp.stability = classify_eigenvalues(fp.eigenvalues);
  return fp;
}

std::vector<FixedPoint> find_fixed_points(const ModelSpec& model, const FixedPointOptions& opt, Exec exec) {
  require_valid(model);
  const auto starts = newton_starts(opt.grid_n);
  const auto outcomes = exec == Exec::parallel ? kernels::newton_multistart(model, starts, opt.newton)
                                               : kernels::serial::newton_multistart(model, starts, opt.newton);

  // Deduplicate in start order; a cluster keeps its lowest-residual member.
  std::vector<NewtonOutcome> unique;
  for (const auto& o : outcomes) {
    if (!o.converged) continue;
    auto hit = std::find_if(unique.begin(), unique.end(), [&](const NewtonOutcome& u) {
      return distance(u.location, o.location) <= opt.dedup_radius;
    });
    if (hit == unique.end()) {
      unique.push_back(o);
    } else if (o.residual < hit->residual) {
      *hit = o;
    }
  }

  std::vector<FixedPoint> points;
  points.reserve(unique.size());
  for (const auto& u : unique) points.push_back(make_fixed_point(model, u.location, u.residual));
  std::sort(points.begin(), points.end(), [](const FixedPoint& a, const FixedPoint& b) {
    const auto& p = a.location;
    const auto& q = b.location;
    if (p.z != q.z) return p.z < q.z;
    if (p.x != q.x) return p.x < q.x;
    return p.y < q.y;
  });
  return points;
}

}  // namespace lindblad
