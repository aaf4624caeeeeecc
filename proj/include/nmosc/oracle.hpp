#pragma once

#include <cstddef>
#include <vector>

#include "nmosc/bound_state.hpp"
#include "nmosc/propagator.hpp"
#include "nmosc/spectral_density.hpp"

// Brute-force ground truth for discrete-bath models: exact diagonalization
// in the single-excitation sector, multi-excitation ladder verification,
// and the quadratic-potential check of the Brownian-motion analogue. Kept
// free of the time-stepping and quadrature code paths it validates.
namespace nmosc::oracle {

// Arrowhead Hamiltonian of the single-excitation sector:
// H[0][0] = Omega, H[k][k] = omega_k, H[0][k] = H[k][0] = lambda_k.
struct SingleExcitationModel {
  std::size_t dimension = 0;
  std::vector<double> hamiltonian;  // row-major dimension x dimension

  static SingleExcitationModel build(const DiscreteBath& bath, double omega_sys);
};

// u(t) = sum_j |<s|E_j>|^2 exp(-i E_j t) from the eigendecomposition; exact
// up to eigensolver precision, no time-stepping error.
PropagatorTrajectory exact_u(const DiscreteBath& bath, double omega_sys, const TimeGrid& grid);

// Lowest single-excitation eigenvalue and the squared system overlap of its
// eigenvector.
struct BoundStateEigen {
  double energy = 0.0;
  double system_weight = 0.0;
};
BoundStateEigen bound_state_eigen(const DiscreteBath& bath, double omega_sys);

// Verifies that (C^dagger)^n applied to the vacuum, with C^dagger built from
// the lowest single-excitation eigenvector, is an eigenvector of the
// n-excitation sector with eigenvalue n*E, and that n*E appears in the
// sector spectrum. With E < 0 this exhibits the spectrum marching to
// negative infinity.
struct LadderSector {
  std::size_t excitations = 0;
  std::size_t dimension = 0;
  double min_eigenvalue = 0.0;
  double ladder_residual = 0.0;        // ||H v - nE v|| for the normalized ladder vector
  double nearest_eigenvalue_gap = 0.0; // min_j |E_j - nE|
};
struct LadderReport {
  double single_energy = 0.0;
  std::vector<LadderSector> sectors;
  bool ladder_confirmed = false;  // all residuals and gaps below 1e-10
};
LadderReport ladder_check(const DiscreteBath& bath, double omega_sys, std::size_t n_max);

// xi(t) = sum_k lambda_k^2 n(omega_k) |integral_0^t u(tau) e^{-i omega_k tau} dtau|^2
// with the inner integral done by trapezoid on the trajectory grid. A
// deliberately separate implementation from the coefficient module's
// accumulation.
std::vector<double> exact_xi_discrete(const DiscreteBath& bath, double temperature,
                                      const PropagatorTrajectory& traj);

// Definiteness of the quadratic potential of the Brownian-motion model in
// the coordinates (x, q_1..q_K). The Schur complement of the bath block is
// exactly the renormalized spring constant; the eigenvalue sign must agree.
struct QbmHessianCheck {
  double schur_complement = 0.0;
  double min_eigenvalue = 0.0;
  bool consistent = false;
};
QbmHessianCheck qbm_hessian_check(double kappa, const std::vector<QbmMode>& bath);

}  // namespace nmosc::oracle
