#include "nmosc/coefficients.hpp"

#include <cmath>
#include <limits>

#include "nmosc/errors.hpp"

namespace nmosc {

namespace {
using cplx = std::complex<double>;
constexpr double kValidityThreshold = 1e-8;
}  // namespace

XiResult compute_xi(const PropagatorTrajectory& traj, BathKernels& kernels) {
  const std::size_t size = traj.u.size();
  XiResult out;
  out.xi.assign(size, 0.0);
  out.xi_dot.assign(size, 0.0);
  if (kernels.temperature() == 0.0) return out;
  if (kernels.density().is_discrete() && kernels.density().bath().empty()) return out;

  if (kernels.has_grid()) {
    TimeGrid cached{kernels.grid_step(), kernels.grid_steps()};
    if (!cached.matches(traj.grid))
      throw GridError("compute_xi: trajectory and kernel grids do not match");
  }

  const double h = traj.grid.step;
  auto nodes = kernels.frequency_nodes(traj.grid.horizon());

  struct NodeState {
    double weight;  // J-measure weight times Bose occupation
    cplx rotor;     // e^{-i w t_n}
    cplx step;      // e^{-i w h}
    cplx integral;  // trapezoid of u(tau) e^{-i w tau} up to t_n
  };
  std::vector<NodeState> states;
  states.reserve(nodes.size());
  for (const auto& node : nodes) {
    const double w = node.weight * kernels.bose_occupation(node.omega);
    if (w == 0.0) continue;
    states.push_back({w, cplx(1.0, 0.0), std::polar(1.0, -node.omega * h), cplx(0.0, 0.0)});
  }

  for (std::size_t n = 0; n + 1 < size; ++n) {
    double xi = 0.0;
    cplx convolution = 0.0;
    for (auto& s : states) {
      const cplx next_rotor = s.rotor * s.step;
      s.integral += 0.5 * h * (traj.u[n] * s.rotor + traj.u[n + 1] * next_rotor);
      s.rotor = next_rotor;
      xi += s.weight * std::norm(s.integral);
      // integral_0^t nu(t-tau) u(tau) dtau = sum_i W_i e^{+i w_i t} I_i(t)
      convolution += s.weight * std::conj(s.rotor) * s.integral;
    }
    out.xi[n + 1] = xi;
    out.xi_dot[n + 1] = 2.0 * std::real(std::conj(traj.u[n + 1]) * convolution);
  }
  return out;
}

CoefficientTrajectory compute_coefficients(const PropagatorTrajectory& traj, const XiResult& xi) {
  const std::size_t size = traj.u.size();
  if (xi.xi.size() != size || xi.xi_dot.size() != size)
    throw GridError("compute_coefficients: xi samples do not match the trajectory grid");

  CoefficientTrajectory out;
  out.grid = traj.grid;
  out.omega_tilde.assign(size, std::numeric_limits<double>::quiet_NaN());
  out.gamma.assign(size, std::numeric_limits<double>::quiet_NaN());
  out.gamma_n.assign(size, std::numeric_limits<double>::quiet_NaN());
  out.xi = xi.xi;
  out.xi_dot = xi.xi_dot;
  out.valid.assign(size, 0);

  for (std::size_t n = 0; n < size; ++n) {
    if (std::abs(traj.u[n]) < kValidityThreshold) continue;
    const cplx ratio = traj.u_dot[n] / traj.u[n];
    out.gamma[n] = -std::real(ratio);
    out.omega_tilde[n] = -std::imag(ratio);
    out.gamma_n[n] = 0.5 * xi.xi_dot[n] + out.gamma[n] * xi.xi[n];
    out.valid[n] = 1;
  }
  return out;
}

namespace {

// Value of the sampled array halfway between n and n+1; cubic (four-point)
// interpolation, one-sided at the ends.
double midpoint(const std::vector<double>& a, std::size_t n) {
  const std::size_t last = a.size() - 1;
  if (a.size() < 4) return 0.5 * (a[n] + a[n + 1]);
  if (n == 0) return (5.0 * a[0] + 15.0 * a[1] - 5.0 * a[2] + a[3]) / 16.0;
  if (n + 1 == last)
    return (5.0 * a[last] + 15.0 * a[last - 1] - 5.0 * a[last - 2] + a[last - 3]) / 16.0;
  return (9.0 * (a[n] + a[n + 1]) - (a[n - 1] + a[n + 2])) / 16.0;
}

}  // namespace

OccupationResult mean_occupation(const PropagatorTrajectory& traj,
                                 const CoefficientTrajectory& coeffs, double n0) {
  if (!(n0 >= 0.0)) throw DomainError("mean_occupation: n0 must be >= 0");
  if (!coeffs.grid.matches(traj.grid))
    throw GridError("mean_occupation: trajectory and coefficient grids do not match");

  const std::size_t size = traj.u.size();
  OccupationResult out;
  out.n_mean.resize(size);
  for (std::size_t n = 0; n < size; ++n)
    out.n_mean[n] = std::norm(traj.u[n]) * n0 + coeffs.xi[n];

  out.n_ode.assign(size, std::numeric_limits<double>::quiet_NaN());
  out.n_ode[0] = n0;
  out.max_deviation = 0.0;
  out.compared_samples = 1;

  const double h = traj.grid.step;
  double y = n0;
  for (std::size_t n = 0; n + 1 < size; ++n) {
    if (!coeffs.valid[n] || !coeffs.valid[n + 1]) break;
    const double g0 = coeffs.gamma[n];
    const double g1 = coeffs.gamma[n + 1];
    const double gm = midpoint(coeffs.gamma, n);
    const double p0 = coeffs.gamma_n[n];
    const double p1 = coeffs.gamma_n[n + 1];
    const double pm = midpoint(coeffs.gamma_n, n);

    const double k1 = -2.0 * g0 * y + 2.0 * p0;
    const double k2 = -2.0 * gm * (y + 0.5 * h * k1) + 2.0 * pm;
    const double k3 = -2.0 * gm * (y + 0.5 * h * k2) + 2.0 * pm;
    const double k4 = -2.0 * g1 * (y + h * k3) + 2.0 * p1;
    y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    out.n_ode[n + 1] = y;
    out.max_deviation = std::max(out.max_deviation, std::abs(y - out.n_mean[n + 1]));
    out.compared_samples = n + 2;
  }
  return out;
}

}  // namespace nmosc
