#include "lindblad/core.hpp"

#include <algorithm>
#include <sstream>

#include "lindblad/errors.hpp"

namespace lindblad {

double PsdReport::min_minor() const noexcept {
  return *std::min_element(minors.begin(), minors.end());
}

DensityMatrix2 bloch_to_density(const BlochVector& v) noexcept {
  return DensityMatrix2{0.5 * (1.0 + v.z), 0.5 * (1.0 - v.z), cplx{0.5 * v.x, -0.5 * v.y}};
}

BlochVector density_to_bloch(const DensityMatrix2& rho) {
  const double trace_error = rho.trace() - 1.0;
  if (std::abs(trace_error) > 1e-12) {
    std::ostringstream msg;
    msg << "density matrix trace deviates from 1 by " << trace_error;
    throw TraceViolation(msg.str());
  }
  return BlochVector{2.0 * rho.rho01.real(), -2.0 * rho.rho01.imag(), rho.rho00 - rho.rho11};
}

std::array<double, 2> eigenvalues(const DensityMatrix2& rho) noexcept {
  const double mean = 0.5 * (rho.rho00 + rho.rho11);
  const double half_gap = 0.5 * (rho.rho00 - rho.rho11);
  const double radius = std::sqrt(half_gap * half_gap + std::norm(rho.rho01));
  return {mean - radius, mean + radius};
}

double determinant_three_term(const CoeffMatrix& h) noexcept {
  return h.h11 * h.h22 * h.h33 - h.h22 * std::norm(h.h13) - h.h11 * std::norm(h.h23);
}

double determinant(const CoeffMatrix& h) noexcept {
  // det of a Hermitian 3x3: the cross term 2 Re(h12 h23 conj(h13)) is real.
  const double cross = 2.0 * (h.h12 * h.h23 * std::conj(h.h13)).real();
  return determinant_three_term(h) - h.h33 * std::norm(h.h12) + cross;
}

PsdReport psd_check(const CoeffMatrix& h, double tol) noexcept {
  PsdReport report;
  report.minors = {
      h.h11,
      h.h22,
      h.h33,
      h.h11 * h.h22 - std::norm(h.h12),
      h.h11 * h.h33 - std::norm(h.h13),
      h.h22 * h.h33 - std::norm(h.h23),
      determinant(h),
  };
  report.three_term_determinant = determinant_three_term(h);
  report.ok = report.min_minor() >= -tol;
  return report;
}

double occupation_probability(const BlochVector& v, int sign) {
  if (!v.admissible()) {
    std::ostringstream msg;
    msg << "Bloch vector norm " << v.norm() << " exceeds 1";
    throw AdmissibilityViolation(msg.str());
  }
  const double s = sign >= 0 ? 1.0 : -1.0;
  return 0.5 * (1.0 + s * v.z);
}

}  // namespace lindblad
