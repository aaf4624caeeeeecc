#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "nmosc/spectral_density.hpp"

namespace nmosc {

// Dissipation kernel eta(s) = integral J(w) exp(-i w s) dw over the bath
// spectrum, and the Bose-weighted noise kernel
// nu(s) = integral J(w) exp(+i w s) / (exp(w/T) - 1) dw. Both reduce to
// plain sums over modes for a discrete bath. Closed forms are used for the
// power-law family, adaptive quadrature otherwise; both paths are exposed
// so tests can compare them.
std::complex<double> dissipation_kernel(const SpectralDensity& j, double t);
std::complex<double> noise_kernel(const SpectralDensity& j, double temperature, double t);

// Quadrature-route dissipation kernel, available for every continuum
// variant including the power-law family (cross-check path).
std::complex<double> dissipation_kernel_quadrature(const SpectralDensity& j, double t);

// Holds a spectral density and temperature together with the caches the
// propagator and coefficient computations need: the kernel sampled on the
// simulation time grid, and a frequency-node discretization of the
// J(w)-weighted integrals. The caches are built once, single threaded, and
// read only afterwards.
class BathKernels {
public:
  BathKernels(SpectralDensity j, double temperature);

  const SpectralDensity& density() const { return j_; }
  double temperature() const { return temperature_; }

  std::complex<double> eta(double t) const { return dissipation_kernel(j_, t); }
  std::complex<double> nu(double t) const { return noise_kernel(j_, temperature_, t); }

  // Mean thermal occupation 1/(exp(w/T)-1); zero at T = 0.
  double bose_occupation(double omega) const;

  // Cache eta at lags 0, h, ..., steps*h.
  void build_grid(double step, std::size_t steps);
  bool has_grid() const { return !eta_grid_.empty(); }
  double grid_step() const { return step_; }
  std::size_t grid_steps() const { return steps_; }
  std::span<const std::complex<double>> eta_grid() const { return eta_grid_; }
  // True when the cached kernel vanishes identically (decoupled bath).
  bool memory_free() const { return zero_eta_; }

  // Frequency nodes with weights such that
  //   integral J(w) f(w) dw  ~=  sum_i weight_i f(omega_i)
  // for f smooth on the scale the nodes resolve. Panel widths are chosen so
  // that phases up to exp(i w t_max) stay resolved. For a discrete bath the
  // nodes are the modes themselves with weight lambda_k^2.
  struct Node {
    double omega;
    double weight;
  };
  std::span<const Node> frequency_nodes(double t_max);

private:
  SpectralDensity j_;
  double temperature_;
  double step_ = 0.0;
  std::size_t steps_ = 0;
  std::vector<std::complex<double>> eta_grid_;
  bool zero_eta_ = true;
  double nodes_t_max_ = -1.0;
  std::vector<Node> nodes_;
};

}  // namespace nmosc
