#include "lindblad/dynamics.hpp"

#include "lindblad/errors.hpp"
#include "lindblad/kernels.hpp"
#include "lindblad/sampling.hpp"

namespace lindblad {

namespace {

Velocity one_dimensional(double zdot, double gamma, const BlochVector& v) {
  return {-gamma * v.x, -gamma * v.y, zdot};
}

Velocity normal_form(const ConstantHParams&, const BlochVector&) {
  throw UnsupportedKind("ConstantH has no normal form");
}

Velocity normal_form(const PitchforkParams& p, const BlochVector& v) {
  return one_dimensional(-v.z * (p.t + v.z * v.z), p.alpha + 0.5 * v.z * v.z, v);
}

Velocity normal_form(const SaddleNodeParams& p, const BlochVector& v) {
  return one_dimensional(-v.z * (p.t + v.z * v.z) + p.b, p.alpha + 0.5 * v.z * v.z, v);
}

Velocity normal_form(const TranscriticalParams& p, const BlochVector& v) {
  const double q = 0.5 * (v.z + 1.0);
  return one_dimensional(2.0 * p.c * q - 2.0 * q * q, 0.5 * (p.alpha + q), v);
}

Velocity normal_form(const HopfParams& p, const BlochVector& v) {
  const double r2 = v.x * v.x + v.z * v.z;
  return {p.epsilon * v.x + p.b * v.z - v.x * r2, -(0.5 * p.delta + r2) * v.y,
          p.epsilon * v.z - p.b * v.x - v.z * r2};
}

Velocity normal_form(const RoesslerParams& p, const BlochVector& v) {
  return {-p.M * (v.y + v.z), p.M * (v.x - p.epsilon + p.a * v.y),
          p.b - (p.c - p.M * (v.x - p.epsilon)) * p.M * v.z};
}

}  // namespace

Velocity assemble_rhs(const CoeffMatrix& h, const Hamiltonian2& H, const BlochVector& v) noexcept {
  const double gamma = h.gamma();
  const cplx sum = h.h23 + h.h13;
  const cplx diff = h.h23 - h.h13;
  const double splitting = H.H00 - H.H11;

  Velocity f;
  f.dz = (h.h11 - h.h22) - (h.h11 + h.h22) * v.z + sum.real() * v.x + diff.imag() * v.y +
         (-2.0 * H.H10.imag() * v.x + 2.0 * H.H10.real() * v.y);
  f.dx = 2.0 * diff.real() + sum.real() * v.z + (h.h12.real() - gamma) * v.x - h.h12.imag() * v.y +
         (2.0 * H.H10.imag() * v.z - splitting * v.y);
  f.dy = 2.0 * sum.imag() + diff.imag() * v.z - h.h12.imag() * v.x - (h.h12.real() + gamma) * v.y +
         (-2.0 * H.H10.real() * v.z + splitting * v.x);
  return f;
}

Velocity field(const ModelSpec& model, const BlochVector& v) noexcept {
  const ModelTerms terms = evaluate(model, v);
  return assemble_rhs(terms.h, terms.H, v);
}

Velocity normal_form_rhs(const ModelSpec& model, const BlochVector& v) {
  return std::visit([&](const auto& p) { return normal_form(p, v); }, model.params);
}

double consistency_check(const ModelSpec& model, std::size_t n_samples, std::uint64_t seed, Exec exec) {
  if (model.kind() == ModelKind::ConstantH) throw UnsupportedKind("ConstantH has no normal form");
  const auto states =
      model.kind() == ModelKind::Hopf ? sample_disk_y0(n_samples, seed) : sample_ball(n_samples, seed);
  return exec == Exec::parallel ? kernels::max_normal_form_deviation(model, states)
                                : kernels::serial::max_normal_form_deviation(model, states);
}

}  // namespace lindblad
