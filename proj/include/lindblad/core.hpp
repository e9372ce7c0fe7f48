#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

namespace lindblad {

using cplx = std::complex<double>;

/// Slack on |v| <= 1 granted to numerically produced states.
inline constexpr double kAdmissibilitySlack = 1e-9;
/// Default tolerance for principal-minor positivity.
inline constexpr double kPsdTolerance = 1e-12;

/// Bloch-ball coordinates of a qubit state, rho = (1 + x sx + y sy + z sz) / 2.
struct BlochVector {
  double x{0.0};
  double y{0.0};
  double z{0.0};

  [[nodiscard]] double norm2() const noexcept { return x * x + y * y + z * z; }
  [[nodiscard]] double norm() const noexcept { return std::sqrt(norm2()); }
  [[nodiscard]] bool admissible(double slack = kAdmissibilitySlack) const noexcept {
    return norm() <= 1.0 + slack;
  }

  friend bool operator==(const BlochVector&, const BlochVector&) = default;
};

/// Time derivative of a Bloch vector (inverse time units).
struct Velocity {
  double dx{0.0};
  double dy{0.0};
  double dz{0.0};

  friend bool operator==(const Velocity&, const Velocity&) = default;
};

[[nodiscard]] inline double dot(const BlochVector& v, const Velocity& f) noexcept {
  return v.x * f.dx + v.y * f.dy + v.z * f.dz;
}

[[nodiscard]] inline double max_abs_difference(const Velocity& a, const Velocity& b) noexcept {
  return std::max({std::abs(a.dx - b.dx), std::abs(a.dy - b.dy), std::abs(a.dz - b.dz)});
}

/// 2x2 density matrix; only the upper off-diagonal element is stored.
struct DensityMatrix2 {
  double rho00{0.5};
  double rho11{0.5};
  cplx rho01{0.0, 0.0};

  [[nodiscard]] cplx rho10() const noexcept { return std::conj(rho01); }
  [[nodiscard]] double trace() const noexcept { return rho00 + rho11; }
};

/// Hermitian 3x3 coefficient matrix of the dissipator in the (L1, L2, L3) basis.
struct CoeffMatrix {
  double h11{0.0};
  double h22{0.0};
  double h33{0.0};
  cplx h12{0.0, 0.0};
  cplx h13{0.0, 0.0};
  cplx h23{0.0, 0.0};

  /// Decay rate of the transverse components, (h11 + h22 + 4 h33) / 2.
  [[nodiscard]] double gamma() const noexcept { return 0.5 * (h11 + h22 + 4.0 * h33); }
};

/// Hermitian 2x2 Hamiltonian with hbar = 1.
struct Hamiltonian2 {
  double H00{0.0};
  double H11{0.0};
  cplx H10{0.0, 0.0};

  [[nodiscard]] cplx H01() const noexcept { return std::conj(H10); }
};

/// The seven principal-minor quantities, in the order h11, h22, h33,
/// h11h22-|h12|^2, h11h33-|h13|^2, h22h33-|h23|^2, det.
struct PsdReport {
  std::array<double, 7> minors{};
  /// The expansion without h12 terms. Informational; it can be negative for a PSD h.
  double three_term_determinant{0.0};
  bool ok{false};

  [[nodiscard]] double min_minor() const noexcept;
};

[[nodiscard]] DensityMatrix2 bloch_to_density(const BlochVector& v) noexcept;

/// Throws TraceViolation when |trace - 1| > 1e-12.
[[nodiscard]] BlochVector density_to_bloch(const DensityMatrix2& rho);

/// Eigenvalues of a 2x2 density matrix in ascending order.
[[nodiscard]] std::array<double, 2> eigenvalues(const DensityMatrix2& rho) noexcept;

/// Three-term determinant expansion h11 h22 h33 - h22 |h13|^2 - h11 |h23|^2.
[[nodiscard]] double determinant_three_term(const CoeffMatrix& h) noexcept;
[[nodiscard]] double determinant(const CoeffMatrix& h) noexcept;

/// ok requires all seven minors to be >= -tol.
[[nodiscard]] PsdReport psd_check(const CoeffMatrix& h, double tol = kPsdTolerance) noexcept;

/// (1 + sign z) / 2. Throws AdmissibilityViolation outside the ball.
[[nodiscard]] double occupation_probability(const BlochVector& v, int sign);

}  // namespace lindblad
