#include "nmosc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>

#include "nmosc/errors.hpp"
#include "nmosc/sym_eigen.hpp"

namespace nmosc::oracle {

namespace {
using cplx = std::complex<double>;
constexpr cplx kI(0.0, 1.0);
}  // namespace

SingleExcitationModel SingleExcitationModel::build(const DiscreteBath& bath, double omega_sys) {
  if (bath.empty()) throw DomainError("SingleExcitationModel: bath must be nonempty");
  SingleExcitationModel model;
  const std::size_t n = bath.size() + 1;
  model.dimension = n;
  model.hamiltonian.assign(n * n, 0.0);
  model.hamiltonian[0] = omega_sys;
  for (std::size_t k = 1; k < n; ++k) {
    const auto& m = bath.modes()[k - 1];
    model.hamiltonian[k * n + k] = m.omega;
    model.hamiltonian[k * n + 0] = m.lambda;
    model.hamiltonian[0 * n + k] = m.lambda;
  }
  return model;
}

PropagatorTrajectory exact_u(const DiscreteBath& bath, double omega_sys, const TimeGrid& grid) {
  auto model = SingleExcitationModel::build(bath, omega_sys);
  auto eig = sym_eigen(model.hamiltonian, model.dimension, true);

  const std::size_t n = model.dimension;
  std::vector<double> weight(n), energy(n);
  for (std::size_t jj = 0; jj < n; ++jj) {
    const double c = eig.vectors[0 + n * jj];
    weight[jj] = c * c;
    energy[jj] = eig.values[jj];
  }

  PropagatorTrajectory traj;
  traj.grid = grid;
  traj.u.assign(grid.size(), cplx(0.0, 0.0));
  traj.u_dot.assign(grid.size(), cplx(0.0, 0.0));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid.time(i);
    cplx u = 0.0, udot = 0.0;
    for (std::size_t jj = 0; jj < n; ++jj) {
      const cplx phase = std::polar(weight[jj], -energy[jj] * t);
      u += phase;
      udot += -kI * energy[jj] * phase;
    }
    traj.u[i] = u;
    traj.u_dot[i] = udot;
  }
  return traj;
}

BoundStateEigen bound_state_eigen(const DiscreteBath& bath, double omega_sys) {
  auto model = SingleExcitationModel::build(bath, omega_sys);
  auto eig = sym_eigen(model.hamiltonian, model.dimension, true);
  const double c = eig.vectors[0];  // component 0 of the lowest eigenvector
  return BoundStateEigen{eig.values[0], c * c};
}

namespace {

// occupation vectors (n_s, n_1..n_K) with sum n, lexicographic
void enumerate_occupations(std::size_t sites, std::size_t total,
                           std::vector<std::size_t>& scratch,
                           std::vector<std::vector<std::size_t>>& out) {
  if (scratch.size() == sites - 1) {
    scratch.push_back(total);
    out.push_back(scratch);
    scratch.pop_back();
    return;
  }
  for (std::size_t v = 0; v <= total; ++v) {
    scratch.push_back(v);
    enumerate_occupations(sites, total - v, scratch, out);
    scratch.pop_back();
  }
}

}  // namespace

LadderReport ladder_check(const DiscreteBath& bath, double omega_sys, std::size_t n_max) {
  if (bath.empty()) throw DomainError("ladder_check: bath must be nonempty");
  if (bath.size() > 6) throw DomainError("ladder_check: bath too large (K <= 6)");
  if (n_max < 1 || n_max > 3) throw DomainError("ladder_check: n_max must be in 1..3");

  const std::size_t sites = bath.size() + 1;
  auto model = SingleExcitationModel::build(bath, omega_sys);
  auto single = sym_eigen(model.hamiltonian, sites, true);
  std::vector<double> c(sites);
  for (std::size_t i = 0; i < sites; ++i) c[i] = single.vectors[i];  // lowest eigenvector

  LadderReport report;
  report.single_energy = single.values[0];
  report.ladder_confirmed = true;

  std::vector<double> site_energy(sites);
  site_energy[0] = omega_sys;
  for (std::size_t k = 1; k < sites; ++k) site_energy[k] = bath.modes()[k - 1].omega;

  for (std::size_t n = 1; n <= n_max; ++n) {
    std::vector<std::vector<std::size_t>> basis;
    std::vector<std::size_t> scratch;
    enumerate_occupations(sites, n, scratch, basis);
    const std::size_t dim = basis.size();
    std::map<std::vector<std::size_t>, std::size_t> index;
    for (std::size_t b = 0; b < dim; ++b) index[basis[b]] = b;

    std::vector<double> h(dim * dim, 0.0);
    for (std::size_t b = 0; b < dim; ++b) {
      const auto& occ = basis[b];
      double diag = 0.0;
      for (std::size_t i = 0; i < sites; ++i)
        diag += site_energy[i] * static_cast<double>(occ[i]);
      h[b * dim + b] = diag;
      // lambda_k (a^dagger b_k): moves one quantum from mode k to the system
      for (std::size_t k = 1; k < sites; ++k) {
        if (occ[k] == 0) continue;
        auto moved = occ;
        moved[k] -= 1;
        moved[0] += 1;
        const std::size_t b2 = index.at(moved);
        const double amp = bath.modes()[k - 1].lambda *
                           std::sqrt(static_cast<double>(occ[k]) *
                                     static_cast<double>(occ[0] + 1));
        h[b2 * dim + b] += amp;
        h[b * dim + b2] += amp;
      }
    }

    auto eig = sym_eigen(h, dim, false);

    // (C^dagger)^n |0>: amplitude n! prod c_i^{occ_i} / sqrt(prod occ_i!)
    std::vector<double> v(dim, 0.0);
    double norm_sq = 0.0;
    double nfact = 1.0;
    for (std::size_t i = 2; i <= n; ++i) nfact *= static_cast<double>(i);
    for (std::size_t b = 0; b < dim; ++b) {
      double amp = nfact;
      for (std::size_t i = 0; i < sites; ++i) {
        for (std::size_t p = 0; p < basis[b][i]; ++p) amp *= c[i];
        double fact = 1.0;
        for (std::size_t p = 2; p <= basis[b][i]; ++p) fact *= static_cast<double>(p);
        amp /= std::sqrt(fact);
      }
      v[b] = amp;
      norm_sq += amp * amp;
    }
    const double norm = std::sqrt(norm_sq);
    for (auto& x : v) x /= norm;

    const double target = static_cast<double>(n) * report.single_energy;
    double residual_sq = 0.0;
    for (std::size_t b = 0; b < dim; ++b) {
      double hv = 0.0;
      for (std::size_t b2 = 0; b2 < dim; ++b2) hv += h[b * dim + b2] * v[b2];
      const double r = hv - target * v[b];
      residual_sq += r * r;
    }

    double gap = std::abs(eig.values[0] - target);
    for (double e : eig.values) gap = std::min(gap, std::abs(e - target));

    LadderSector sector;
    sector.excitations = n;
    sector.dimension = dim;
    sector.min_eigenvalue = eig.values[0];
    sector.ladder_residual = std::sqrt(residual_sq);
    sector.nearest_eigenvalue_gap = gap;
    if (sector.ladder_residual > 1e-10 || sector.nearest_eigenvalue_gap > 1e-10)
      report.ladder_confirmed = false;
    report.sectors.push_back(sector);
  }
  return report;
}

std::vector<double> exact_xi_discrete(const DiscreteBath& bath, double temperature,
                                      const PropagatorTrajectory& traj) {
  if (temperature < 0.0) throw DomainError("exact_xi_discrete: temperature must be >= 0");
  const std::size_t size = traj.u.size();
  std::vector<double> xi(size, 0.0);
  if (temperature == 0.0 || bath.empty()) return xi;

  const double h = traj.grid.step;
  for (const auto& m : bath.modes()) {
    const double weight = m.lambda * m.lambda / std::expm1(m.omega / temperature);
    // fresh trapezoid of u(tau) e^{-i omega tau} for every output time
    for (std::size_t n = 1; n < size; ++n) {
      cplx integral = 0.5 * traj.u[0];
      for (std::size_t i = 1; i < n; ++i)
        integral += traj.u[i] * std::polar(1.0, -m.omega * traj.grid.time(i));
      integral += 0.5 * traj.u[n] * std::polar(1.0, -m.omega * traj.grid.time(n));
      integral *= h;
      xi[n] += weight * std::norm(integral);
    }
  }
  return xi;
}

QbmHessianCheck qbm_hessian_check(double kappa, const std::vector<QbmMode>& bath) {
  const std::size_t n = bath.size() + 1;
  std::vector<double> potential(n * n, 0.0);
  potential[0] = kappa;
  for (std::size_t k = 1; k < n; ++k) {
    const auto& m = bath[k - 1];
    if (!(m.mass > 0.0 && m.omega > 0.0))
      throw DomainError("qbm_hessian_check: masses and frequencies must be > 0");
    potential[k * n + k] = m.mass * m.omega * m.omega;
    potential[k * n + 0] = m.coupling;
    potential[0 * n + k] = m.coupling;
  }

  QbmHessianCheck check;
  // eliminate the (diagonal) bath block: A00 - A01 A11^-1 A10
  check.schur_complement = potential[0];
  for (std::size_t k = 1; k < n; ++k)
    check.schur_complement -= potential[k * n] * potential[k * n] / potential[k * n + k];

  auto eig = sym_eigen(potential, n, false);
  check.min_eigenvalue = eig.values[0];

  double scale = std::abs(kappa);
  for (std::size_t k = 1; k < n; ++k)
    scale = std::max({scale, potential[k * n + k], std::abs(potential[k * n])});
  const double tol = 1e-10 * std::max(scale, 1.0);
  const bool psd = check.min_eigenvalue >= -tol;
  check.consistent = psd == (check.schur_complement >= -tol);
  return check;
}

}  // namespace nmosc::oracle
