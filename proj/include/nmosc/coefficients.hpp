#pragma once

#include <vector>

#include "nmosc/bath_kernels.hpp"
#include "nmosc/propagator.hpp"

namespace nmosc {

// Exact master-equation coefficients on the trajectory grid:
//   i omega_tilde(t) + gamma(t) = -udot(t)/u(t)
//   gamma_n(t) = gamma(t) n_tilde(t) = xi_dot(t)/2 + gamma(t) xi(t).
// Samples where |u| drops below 1e-8 are masked invalid rather than fatal:
// the coefficients genuinely diverge at zeros of u.
struct CoefficientTrajectory {
  TimeGrid grid;
  std::vector<double> omega_tilde;
  std::vector<double> gamma;
  std::vector<double> xi;
  std::vector<double> xi_dot;
  std::vector<double> gamma_n;
  std::vector<char> valid;
};

// xi(t) = integral dw J(w) n(w) |I_w(t)|^2 with I_w(t) = integral_0^t
// u(tau) e^{-i w tau} dtau, accumulated incrementally by trapezoid in tau
// over the kernel module's frequency nodes (the bath modes themselves for a
// discrete density). Manifestly nonnegative. xi_dot comes from the
// analytic derivative 2 Re[u*(t) integral_0^t nu(t-tau) u(tau) dtau]
// evaluated in the same spectral form, not from differencing xi.
struct XiResult {
  std::vector<double> xi;
  std::vector<double> xi_dot;
};
XiResult compute_xi(const PropagatorTrajectory& traj, BathKernels& kernels);

CoefficientTrajectory compute_coefficients(const PropagatorTrajectory& traj, const XiResult& xi);

// Mean occupation two ways: the closed form |u(t)|^2 n0 + xi(t), and an
// integration of d<n>/dt = -2 gamma <n> + 2 gamma_n on the same grid
// (classical RK4 with interpolated midpoint coefficients). The maximum
// deviation between the two is a consistency measure of the whole chain.
struct OccupationResult {
  std::vector<double> n_mean;  // closed form
  std::vector<double> n_ode;   // integrated, truncated at the first invalid sample
  double max_deviation = 0.0;
  std::size_t compared_samples = 0;
};
OccupationResult mean_occupation(const PropagatorTrajectory& traj,
                                 const CoefficientTrajectory& coeffs, double n0);

}  // namespace nmosc
