#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "nmosc/bath_kernels.hpp"

namespace nmosc {

// Uniform grid t_n = n * step, n = 0..steps.
struct TimeGrid {
  double step = 0.0;
  std::size_t steps = 0;

  std::size_t size() const { return steps + 1; }
  double time(std::size_t n) const { return step * static_cast<double>(n); }
  double horizon() const { return step * static_cast<double>(steps); }
  bool matches(const TimeGrid& o) const;
};

// Validates that horizon is an integral number of steps.
TimeGrid make_grid(double horizon, double step);

// Green's function u(t) of the reduced oscillator dynamics,
//   du/dt + i Omega u + integral_0^t eta(t-s) u(s) ds = 0,  u(0) = 1,
// together with du/dt taken from the equation itself (never from finite
// differences of u).
struct PropagatorTrajectory {
  TimeGrid grid;
  std::vector<std::complex<double>> u;
  std::vector<std::complex<double>> u_dot;
};

// Second-order product-integration trapezoid scheme: the memory integral at
// t_{n+1} is a trapezoid over past samples, and the implicit relation is
// linear in u_{n+1}. The kernel cache inside `kernels` is (re)built to
// cover lags 0..horizon on the same grid.
PropagatorTrajectory solve_u(BathKernels& kernels, double omega_sys, double horizon, double step);

// Tail-window fit of u(t) ~ r exp(-i w0 t): plateau modulus, rotation
// frequency from the unwrapped-phase slope, and whether the modulus has
// settled (relative spread below 1e-3).
struct LongTimeBehavior {
  double plateau_modulus = 0.0;
  double rotation_frequency = 0.0;
  bool is_dissipationless = false;
  double modulus_stddev = 0.0;
  std::size_t window_samples = 0;
};

LongTimeBehavior long_time_behavior(const PropagatorTrajectory& traj, double window);

}  // namespace nmosc
