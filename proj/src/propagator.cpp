#include "nmosc/propagator.hpp"

#include <cmath>

#include "nmosc/errors.hpp"

namespace nmosc {

namespace {
using cplx = std::complex<double>;
constexpr cplx kI(0.0, 1.0);
}  // namespace

bool TimeGrid::matches(const TimeGrid& o) const {
  return steps == o.steps && std::abs(step - o.step) <= 1e-12 * std::max(step, o.step);
}

TimeGrid make_grid(double horizon, double step) {
  if (!(step > 0.0)) throw DomainError("make_grid: step must be > 0");
  if (!(horizon > 0.0)) throw DomainError("make_grid: horizon must be > 0");
  const double ratio = horizon / step;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
    throw GridError("make_grid: horizon must be an integral number of steps");
  return TimeGrid{step, static_cast<std::size_t>(rounded)};
}

PropagatorTrajectory solve_u(BathKernels& kernels, double omega_sys, double horizon, double step) {
  PropagatorTrajectory traj;
  traj.grid = make_grid(horizon, step);
  const std::size_t n_steps = traj.grid.steps;
  const double h = step;

  TimeGrid cached{kernels.grid_step(), kernels.grid_steps()};
  if (!kernels.has_grid() || !cached.matches(traj.grid)) kernels.build_grid(h, n_steps);
  auto eta = kernels.eta_grid();
  const bool memory_free = kernels.memory_free();

  traj.u.assign(n_steps + 1, cplx(0.0, 0.0));
  traj.u_dot.assign(n_steps + 1, cplx(0.0, 0.0));
  traj.u[0] = 1.0;
  traj.u_dot[0] = -kI * omega_sys;  // memory integral vanishes at t = 0

  const cplx denom = 1.0 + 0.5 * h * (kI * omega_sys + 0.5 * h * eta[0]);
  if (std::abs(denom) < 1e-12)
    throw StepSizeError("solve_u: degenerate implicit step, reduce the step size");

  for (std::size_t n = 0; n < n_steps; ++n) {
    // trapezoid memory sum at t_{n+1}, without the (h/2) eta(0) u_{n+1} term
    cplx partial = 0.0;
    if (!memory_free) {
      cplx sum = 0.5 * eta[n + 1] * traj.u[0];
      for (std::size_t j = 1; j <= n; ++j) sum += eta[n + 1 - j] * traj.u[j];
      partial = h * sum;
    }
    traj.u[n + 1] = (traj.u[n] + 0.5 * h * (traj.u_dot[n] - partial)) / denom;
    traj.u_dot[n + 1] =
        -kI * omega_sys * traj.u[n + 1] - (partial + 0.5 * h * eta[0] * traj.u[n + 1]);
  }
  return traj;
}

LongTimeBehavior long_time_behavior(const PropagatorTrajectory& traj, double window) {
  if (!(window > 0.0 && window < 1.0)) throw DomainError("long_time_behavior: window in (0,1)");
  const std::size_t total = traj.u.size();
  const std::size_t n_tail = static_cast<std::size_t>(window * static_cast<double>(total));
  if (n_tail < 100)
    throw InsufficientDataError("long_time_behavior: tail window holds fewer than 100 samples");
  const std::size_t start = total - n_tail;

  LongTimeBehavior out;
  out.window_samples = n_tail;

  double mean = 0.0;
  for (std::size_t i = start; i < total; ++i) mean += std::abs(traj.u[i]);
  mean /= static_cast<double>(n_tail);
  double var = 0.0;
  for (std::size_t i = start; i < total; ++i) {
    const double d = std::abs(traj.u[i]) - mean;
    var += d * d;
  }
  out.plateau_modulus = mean;
  out.modulus_stddev = std::sqrt(var / static_cast<double>(n_tail));

  // unwrapped phase, least-squares slope
  std::vector<double> phase(n_tail, 0.0);
  phase[0] = std::arg(traj.u[start]);
  for (std::size_t i = 1; i < n_tail; ++i) {
    const cplx a = traj.u[start + i - 1];
    const cplx b = traj.u[start + i];
    const double inc = (a == 0.0 || b == 0.0) ? 0.0 : std::arg(b * std::conj(a));
    phase[i] = phase[i - 1] + inc;
  }
  const double h = traj.grid.step;
  double st = 0.0, sp = 0.0, stt = 0.0, stp = 0.0;
  for (std::size_t i = 0; i < n_tail; ++i) {
    const double t = h * static_cast<double>(i);
    st += t;
    sp += phase[i];
    stt += t * t;
    stp += t * phase[i];
  }
  const double nn = static_cast<double>(n_tail);
  const double slope = (nn * stp - st * sp) / (nn * stt - st * st);
  out.rotation_frequency = -slope;

  out.is_dissipationless =
      out.plateau_modulus > 1e-3 && out.modulus_stddev < 1e-3 * out.plateau_modulus;
  return out;
}

}  // namespace nmosc
