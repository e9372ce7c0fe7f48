#pragma once

// Explicit Runge-Kutta integrators over fixed-size real states.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>

#include "lindblad/errors.hpp"

namespace lindblad::ode {

template <std::size_t N>
using State = std::array<double, N>;

template <std::size_t N>
inline State<N> axpy(const State<N>& y, double h, const State<N>& k) {
  State<N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + h * k[i];
  return out;
}

/// One classical fourth-order step. rhs(t, y) returns dy/dt.
template <std::size_t N, class Rhs>
State<N> rk4_step(Rhs&& rhs, double t, const State<N>& y, double h) {
  const State<N> k1 = rhs(t, y);
  const State<N> k2 = rhs(t + 0.5 * h, axpy(y, 0.5 * h, k1));
  const State<N> k3 = rhs(t + 0.5 * h, axpy(y, 0.5 * h, k2));
  const State<N> k4 = rhs(t + h, axpy(y, h, k3));
  State<N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

/// Fixed-step RK4 from t0 to t_end using ceil((t_end - t0) / dt) equal steps.
/// observer(t, y) sees the initial state and every step.
template <std::size_t N, class Rhs, class Observer>
State<N> integrate_rk4(Rhs&& rhs, double t0, State<N> y, double t_end, double dt,
                       std::size_t max_steps, Observer&& observer) {
  const double span = t_end - t0;
  const auto n_steps = static_cast<std::size_t>(std::max(1.0, std::ceil(span / dt - 1e-9)));
  if (n_steps > max_steps) {
    throw StepLimitExceeded("RK4 needs " + std::to_string(n_steps) + " steps, max_steps is " +
                            std::to_string(max_steps));
  }
  const double h = span / static_cast<double>(n_steps);
  observer(t0, y);
  for (std::size_t i = 1; i <= n_steps; ++i) {
    y = rk4_step<N>(rhs, t0 + static_cast<double>(i - 1) * h, y, h);
    observer(i == n_steps ? t_end : t0 + static_cast<double>(i) * h, y);
  }
  return y;
}

struct AdaptiveOptions {
  double abs_tol{1e-9};
  double rel_tol{1e-9};
  std::size_t max_steps{10'000'000};
  double initial_step{0.0};  ///< 0 selects a step automatically
  double max_step{0.0};      ///< 0 means unbounded
  double safety{0.9};
  double min_factor{0.2};
  double max_factor{5.0};
};

struct AdaptiveStats {
  std::size_t accepted{0};
  std::size_t rejected{0};
};

/// Dormand-Prince 5(4) with FSAL and a PI step-size controller.
/// observer(t, y, dydt) sees the initial state and every accepted step.
template <std::size_t N, class Rhs, class Observer>
AdaptiveStats integrate_dopri5(Rhs&& rhs, double t0, State<N> y, double t_end,
                               const AdaptiveOptions& opt, Observer&& observer) {
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                   a76 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;
  constexpr double beta = 0.04;
  constexpr double expo = 0.2 - 0.75 * beta;

  AdaptiveStats stats;
  double t = t0;
  State<N> k1 = rhs(t, y);
  observer(t, y, k1);
  if (!(t_end > t0)) return stats;

  auto scaled_norm = [&](const State<N>& v, const State<N>& ref) {
    double sum = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sc = opt.abs_tol + opt.rel_tol * std::abs(ref[i]);
      sum += (v[i] / sc) * (v[i] / sc);
    }
    return std::sqrt(sum / static_cast<double>(N));
  };

  double h = opt.initial_step;
  if (h <= 0.0) {
    // Hairer's starting-step heuristic.
    const double d0 = scaled_norm(y, y);
    const double d1 = scaled_norm(k1, y);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, t_end - t0);
    const State<N> k2 = rhs(t + h0, axpy(y, h0, k1));
    State<N> dk;
    for (std::size_t i = 0; i < N; ++i) dk[i] = k2[i] - k1[i];
    const double d2 = scaled_norm(dk, y) / h0;
    const double dmax = std::max(d1, d2);
    const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
    h = std::min(100.0 * h0, h1);
  }
  if (opt.max_step > 0.0) h = std::min(h, opt.max_step);

  double err_old = 1e-4;
  bool last_rejected = false;
  while (t < t_end) {
    if (stats.accepted + stats.rejected >= opt.max_steps) {
      throw StepLimitExceeded("adaptive integration exceeded " + std::to_string(opt.max_steps) +
                              " steps at t = " + std::to_string(t));
    }
    bool final_step = false;
    if (t + h >= t_end) {
      h = t_end - t;
      final_step = true;
    }

    const State<N> k2 = rhs(t + c2 * h, axpy(y, h * a21, k1));
    State<N> tmp;
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    const State<N> k3 = rhs(t + c3 * h, tmp);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    const State<N> k4 = rhs(t + c4 * h, tmp);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    const State<N> k5 = rhs(t + c5 * h, tmp);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    const State<N> k6 = rhs(t + h, tmp);
    State<N> y_new;
    for (std::size_t i = 0; i < N; ++i)
      y_new[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    const State<N> k7 = rhs(t + h, y_new);

    State<N> err_vec;
    double sum = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      err_vec[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc = opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      sum += (err_vec[i] / sc) * (err_vec[i] / sc);
    }
    const double err = std::sqrt(sum / static_cast<double>(N));

    const double fac11 = std::pow(std::max(err, 1e-300), expo);
    if (err <= 1.0) {
      double fac = fac11 / std::pow(err_old, beta);
      fac = std::clamp(fac / opt.safety, 1.0 / opt.max_factor, 1.0 / opt.min_factor);
      double h_new = h / fac;
      if (last_rejected) h_new = std::min(h_new, h);
      err_old = std::max(err, 1e-4);
      t = final_step ? t_end : t + h;
      y = y_new;
      k1 = k7;
      ++stats.accepted;
      observer(t, y, k1);
      last_rejected = false;
      h = opt.max_step > 0.0 ? std::min(h_new, opt.max_step) : h_new;
    } else {
      h = h / std::min(1.0 / opt.min_factor, fac11 / opt.safety);
      ++stats.rejected;
      last_rejected = true;
    }
    if (!(h > 0.0) || t + h == t) {
      if (t < t_end) throw StepLimitExceeded("step size underflow at t = " + std::to_string(t));
    }
  }
  return stats;
}

}  // namespace lindblad::ode
