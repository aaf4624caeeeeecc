#pragma once

#include <optional>
#include <vector>

#include "nmosc/spectral_density.hpp"

namespace nmosc {

// A purely imaginary pole of the Green's function's Laplace transform:
// u(t) -> residue * exp(-i omega0 t) at long times. omega0 < 0 for the
// below-threshold bound state, omega0 > 0 inside a band gap.
struct BoundStatePole {
  double omega0 = 0.0;
  double residue = 0.0;  // 1 / (1 + integral J(w)/(w - omega0)^2 dw), in (0, 1]
};

// Root of g(x) = Omega + x - integral J(w)/(w + x) dw for x = |omega0| > 0.
// g is strictly increasing with g(0) = Omega + delta_omega, so the root
// exists iff the margin is negative and is unique. Returns nothing for
// margin >= 0 (the marginal case counts as no pole).
std::optional<BoundStatePole> negative_pole(const SpectralDensity& j, double omega_sys);

// The same g, exposed for monotonicity and consistency checks (x > 0).
double pole_function(const SpectralDensity& j, double omega_sys, double x);

// In-gap root scan of h(x) = x - Omega - integral J(w)/(x - w) dw over
// (lo, hi). h may be non-monotone; 256 subinterval midpoints are scanned
// for sign changes and each bracket is polished by bisection. The root
// closest to Omega is returned; all roots found are listed for diagnostics.
struct GapPoleScan {
  std::optional<BoundStatePole> pole;
  std::vector<double> all_roots;
};
GapPoleScan gap_pole(const SpectralDensity& j, double omega_sys);

// Bound-state energy E < 0 of E = Omega + sum_k lambda_k^2/(E - omega_k),
// by bisection on a guaranteed bracket; exists iff Omega - sum lambda^2/omega < 0.
std::optional<double> discrete_bound_energy(const DiscreteBath& bath, double omega_sys);

// delta_omega, margin = Omega + delta_omega, and the pole analysis. The
// total Hamiltonian is unbounded from below exactly when margin < 0, which
// is also exactly when a negative-frequency pole exists.
struct StabilityReport {
  double delta_omega = 0.0;
  double margin = 0.0;
  bool unbounded = false;
  std::optional<BoundStatePole> pole;        // negative pole, or in-gap pole if only that exists
  std::optional<BoundStatePole> in_gap_pole; // band-gap variants only
  std::vector<double> gap_roots;
  std::optional<double> discrete_energy;     // discrete variants only
};

StabilityReport stability_report(const SpectralDensity& j, double omega_sys);

// Quantum-Brownian-motion analogue: oscillator with spring constant kappa
// bilinearly coupled (c_k x q_k) to bath oscillators (m_k, omega_k).
struct QbmMode {
  double mass = 0.0;
  double omega = 0.0;
  double coupling = 0.0;
};

// delta_kappa = -sum c_k^2/(m_k omega_k^2); the renormalized spring
// constant kappa + delta_kappa is negative exactly when the total potential
// is indefinite.
struct QbmReport {
  double delta_kappa = 0.0;
  double kappa_renormalized = 0.0;
  bool unstable = false;
};

QbmReport qbm_stability(double kappa, const std::vector<QbmMode>& bath);

}  // namespace nmosc
