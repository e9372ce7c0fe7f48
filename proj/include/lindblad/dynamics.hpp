#pragma once

#include <cstdint>

#include "lindblad/core.hpp"
#include "lindblad/exec.hpp"
#include "lindblad/models.hpp"

namespace lindblad {

/// Right-hand side of the nonlinear Lindblad equation in Bloch coordinates
/// for a given coefficient matrix and Hamiltonian (hbar = 1).
[[nodiscard]] Velocity assemble_rhs(const CoeffMatrix& h, const Hamiltonian2& H,
                                    const BlochVector& v) noexcept;

/// assemble_rhs(evaluate(model, v), v).
[[nodiscard]] Velocity field(const ModelSpec& model, const BlochVector& v) noexcept;

/// Closed-form normal form each catalog model is built to reproduce.
///
/// Pitchfork / SaddleNode / Transcritical: the one-dimensional equation in z,
/// with x and y relaxing at the (hand-simplified) rate Gamma(z).
/// Hopf: zdot = eps z - b x - z r^2, xdot = eps x + b z - x r^2,
///       ydot = -(delta/2 + r^2) y, r^2 = x^2 + z^2.
/// Roessler: xdot = -M (y + z), ydot = M (x - eps + a y),
///           zdot = b - (c - M (x - eps)) M z.
///
/// Throws UnsupportedKind for ConstantH.
[[nodiscard]] Velocity normal_form_rhs(const ModelSpec& model, const BlochVector& v);

/// Largest componentwise gap between field() and normal_form_rhs() over
/// n_samples seeded uniform states (the y = 0 disk for Hopf, the ball otherwise).
[[nodiscard]] double consistency_check(const ModelSpec& model, std::size_t n_samples,
                                       std::uint64_t seed, Exec exec = Exec::parallel);

}  // namespace lindblad
