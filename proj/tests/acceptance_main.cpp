// Acceptance suite: one line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "nmosc/bath_kernels.hpp"
#include "nmosc/bound_state.hpp"
#include "nmosc/coefficients.hpp"
#include "nmosc/oracle.hpp"
#include "nmosc/pipeline.hpp"
#include "nmosc/propagator.hpp"
#include "nmosc/run_config.hpp"
#include "nmosc/spectral_density.hpp"
#include "nmosc/text_io.hpp"

using namespace nmosc;
using cplx = std::complex<double>;
namespace fs = std::filesystem;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool condition, const std::string& what) {
    if (!condition) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += "FAILED: " + what;
    }
  }
  void note(const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

double max_oracle_error(const DiscreteBath& bath, double omega_sys, double horizon, double step) {
  BathKernels kernels(SpectralDensity::discrete(bath), 0.0);
  auto numeric = solve_u(kernels, omega_sys, horizon, step);
  auto exact = oracle::exact_u(bath, omega_sys, numeric.grid);
  double worst = 0.0;
  for (std::size_t n = 0; n < numeric.u.size(); ++n)
    worst = std::max(worst, std::abs(numeric.u[n] - exact.u[n]));
  return worst;
}

DiscreteBath criterion_bath() {
  return discretize(SpectralDensity::power_law(1.0, 1.0, 1.0), 20, 5.0);
}

// 1. solver vs exact diagonalization on the K=20 discretized ohmic bath
Check criterion_oracle_equivalence() {
  Check check;
  const auto start = std::chrono::steady_clock::now();
  const double err = max_oracle_error(criterion_bath(), 1.0, 10.0, 0.005);
  const double elapsed = seconds_since(start);
  check.require(err < 1e-4, "max error " + fmt(err) + " >= 1e-4");
  check.require(elapsed < 5.0, "runtime " + fmt(elapsed) + "s >= 5s");
  check.note("max_err=" + fmt(err) + " tol=1e-4, " + fmt(elapsed) + "s");
  return check;
}

// 2. halving h cuts the error by ~4 (second-order scheme)
Check criterion_convergence_order() {
  Check check;
  const auto bath = criterion_bath();
  const double coarse = max_oracle_error(bath, 1.0, 10.0, 0.01);
  const double fine = max_oracle_error(bath, 1.0, 10.0, 0.005);
  const double ratio = coarse / fine;
  check.require(ratio >= 3.5 && ratio <= 4.5,
                "error ratio " + fmt(ratio) + " outside [3.5, 4.5]");
  check.note("ratio=" + fmt(ratio));
  return check;
}

// 3. pole existence flips exactly where the margin changes sign
Check criterion_iff_sweep() {
  Check check;
  const auto start = std::chrono::steady_clock::now();
  const std::size_t count = 100;
  const double lo = 0.01, hi = 3.0;
  const double grid_step = (hi - lo) / static_cast<double>(count - 1);
  double flip_alpha = 0.0;
  std::size_t flips = 0;
  bool prev = false;
  for (std::size_t i = 0; i < count; ++i) {
    const double alpha = lo + grid_step * static_cast<double>(i);
    auto j = SpectralDensity::power_law(alpha, 1.0, 1.0);
    const double margin = 1.0 + frequency_shift(j);
    const bool has_pole = negative_pole(j, 1.0).has_value();
    check.require(has_pole == (margin < 0.0),
                  "pole/margin disagree at alpha=" + fmt(alpha));
    if (i > 0 && has_pole != prev) {
      ++flips;
      flip_alpha = alpha;
    }
    prev = has_pole;
  }
  const double elapsed = seconds_since(start);
  check.require(flips == 1, "expected exactly one flip, saw " + std::to_string(flips));
  check.require(std::abs(flip_alpha - 1.0) <= grid_step + 1e-12,
                "flip at alpha=" + fmt(flip_alpha) + " not within one grid step of 1");
  check.require(elapsed < 10.0, "runtime " + fmt(elapsed) + "s >= 10s");
  check.note("flip at alpha=" + fmt(flip_alpha) + ", " + fmt(elapsed) + "s");
  return check;
}

// 4. bisection energy vs minimum eigenvalue on random discrete baths
Check criterion_bound_state_energy() {
  Check check;
  std::mt19937 rng(20240811);
  std::uniform_int_distribution<std::size_t> kdist(1, 10);
  std::uniform_real_distribution<double> wdist(0.2, 5.0);
  std::uniform_real_distribution<double> ldist(0.1, 1.2);
  std::size_t bound_cases = 0, free_cases = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t k = kdist(rng);
    std::vector<double> omegas(k);
    for (auto& w : omegas) w = wdist(rng);
    std::sort(omegas.begin(), omegas.end());
    std::vector<BathMode> modes;
    double prev_w = 0.0;
    for (double w : omegas) {
      if (w - prev_w < 1e-6) w = prev_w + 1e-6;  // keep strictly increasing
      modes.push_back(BathMode{w, ldist(rng)});
      prev_w = w;
    }
    DiscreteBath bath(modes);
    double margin = 1.0;
    for (const auto& m : bath.modes()) margin -= m.lambda * m.lambda / m.omega;

    auto root = discrete_bound_energy(bath, 1.0);
    auto eigen = oracle::bound_state_eigen(bath, 1.0);
    if (margin < 0.0) {
      ++bound_cases;
      check.require(root.has_value(), "margin < 0 but no bisection root");
      if (root) {
        const double gap = std::abs(*root - eigen.energy);
        worst = std::max(worst, gap);
        check.require(gap < 1e-10, "bisection vs eigenvalue gap " + fmt(gap));
        check.require(eigen.energy < 0.0, "margin < 0 but min eigenvalue nonnegative");
      }
    } else {
      ++free_cases;
      check.require(!root.has_value(), "margin > 0 but bisection found a root");
      check.require(eigen.energy > 0.0, "margin > 0 but min eigenvalue negative");
    }
  }
  check.require(bound_cases >= 3 && free_cases >= 3, "sample covers only one margin sign");
  check.note(std::to_string(bound_cases) + " bound / " + std::to_string(free_cases) +
             " free, worst gap=" + fmt(worst));
  return check;
}

// 5. the (C^dagger)^n ladder exhibits eigenvalues nE down to n=3
Check criterion_ladder() {
  Check check;
  DiscreteBath bath({BathMode{1.0, 2.0}});
  auto report = oracle::ladder_check(bath, 1.0, 3);
  check.require(std::abs(report.single_energy + 1.0) < 1e-10, "single-excitation energy != -1");
  check.require(report.sectors.size() == 3, "missing sectors");
  for (const auto& sector : report.sectors) {
    const double target = static_cast<double>(sector.excitations) * report.single_energy;
    check.require(sector.nearest_eigenvalue_gap < 1e-10,
                  "sector " + std::to_string(sector.excitations) + " spectrum misses " + fmt(target));
    check.require(sector.ladder_residual < 1e-10,
                  "sector " + std::to_string(sector.excitations) + " ladder vector not an eigenvector");
  }
  if (report.sectors.size() == 3) {
    check.require(report.sectors[1].dimension == 3, "2-excitation sector dimension != 3");
    check.require(std::abs(report.sectors[1].min_eigenvalue + 2.0) < 1e-10,
                  "2-excitation sector misses -2");
  }
  check.note("energies -1, -2, -3 confirmed");
  return check;
}

// 6. sub-ohmic dissipationless regime: damping dies, frequency and plateau
//    match the pole data
Check criterion_dissipationless() {
  Check check;
  const auto start = std::chrono::steady_clock::now();
  auto j = SpectralDensity::power_law(2.0, 0.5, 1.0);
  auto pole = negative_pole(j, 1.0);
  const double margin = 1.0 + frequency_shift(j);
  check.require(margin < 0.0, "configuration not in the unbounded regime");
  check.require(pole.has_value(), "no negative pole");
  if (!pole) return check;

  BathKernels kernels(j, 0.0);
  auto traj = solve_u(kernels, 1.0, 200.0, 0.005);
  auto coeffs = compute_coefficients(traj, compute_xi(traj, kernels));
  auto tail = long_time_behavior(traj, 0.25);

  double gamma_max = 0.0, omega_dev = 0.0;
  for (std::size_t n = traj.u.size() - tail.window_samples; n < traj.u.size(); ++n) {
    gamma_max = std::max(gamma_max, std::abs(coeffs.gamma[n]));
    omega_dev = std::max(omega_dev, std::abs(coeffs.omega_tilde[n] - pole->omega0));
  }
  const double elapsed = seconds_since(start);
  check.require(gamma_max < 1e-3, "late-time |gamma| " + fmt(gamma_max) + " >= 1e-3");
  check.require(omega_dev <= 0.01 * std::abs(pole->omega0),
                "omega_tilde deviates " + fmt(omega_dev) + " from omega0");
  check.require(std::abs(tail.plateau_modulus - pole->residue) <= 0.01 * pole->residue,
                "plateau " + fmt(tail.plateau_modulus) + " vs residue " + fmt(pole->residue));
  check.require(tail.is_dissipationless, "tail not flagged dissipationless");
  check.require(elapsed < 60.0, "runtime " + fmt(elapsed) + "s >= 60s");
  check.note("omega0=" + fmt(pole->omega0) + " r=" + fmt(pole->residue) + ", max|gamma|=" +
             fmt(gamma_max) + ", " + fmt(elapsed) + "s");
  return check;
}

// 7. xi stays nonnegative and the first-moment equation closes
Check criterion_moment_consistency() {
  Check check;
  auto bath = criterion_bath();
  BathKernels kernels(SpectralDensity::discrete(bath), 1.0);
  auto traj = solve_u(kernels, 1.0, 10.0, 0.005);
  auto xi = compute_xi(traj, kernels);
  double xi_min = 0.0;
  for (double v : xi.xi) xi_min = std::min(xi_min, v);
  check.require(xi_min >= -1e-10, "xi dips to " + fmt(xi_min));

  auto coeffs = compute_coefficients(traj, xi);
  double worst = 0.0;
  for (double n0 : {0.0, 1.0, 5.0}) {
    auto occ = mean_occupation(traj, coeffs, n0);
    check.require(occ.compared_samples == traj.u.size(), "ODE integration truncated");
    check.require(occ.max_deviation < 1e-4,
                  "n0=" + fmt(n0) + " deviation " + fmt(occ.max_deviation) + " >= 1e-4");
    worst = std::max(worst, occ.max_deviation);
  }
  check.note("worst deviation=" + fmt(worst));
  return check;
}

// 8. Schur complement of the potential matrix equals kappa + delta_kappa and
//    decides definiteness
Check criterion_qbm_schur() {
  Check check;
  std::mt19937 rng(77);
  std::uniform_int_distribution<std::size_t> kdist(1, 6);
  std::uniform_real_distribution<double> kappadist(0.2, 3.0);
  std::uniform_real_distribution<double> mdist(0.3, 2.0);
  std::uniform_real_distribution<double> wdist(0.3, 3.0);
  std::uniform_real_distribution<double> cdist(0.0, 1.5);
  std::size_t stable = 0, unstable = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const double kappa = kappadist(rng);
    std::vector<QbmMode> modes(kdist(rng));
    for (auto& m : modes) m = QbmMode{mdist(rng), wdist(rng), cdist(rng)};

    const auto report = qbm_stability(kappa, modes);
    const auto hessian = oracle::qbm_hessian_check(kappa, modes);
    const double gap = std::abs(hessian.schur_complement - report.kappa_renormalized);
    worst = std::max(worst, gap);
    check.require(gap < 1e-12, "schur vs kappa_R gap " + fmt(gap));
    check.require(hessian.consistent, "eigenvalue sign disagrees with the Schur complement");
    const bool psd = hessian.min_eigenvalue >= -1e-10;
    check.require(psd == (report.kappa_renormalized >= 0.0),
                  "definiteness does not match kappa_R sign");
    (report.unstable ? unstable : stable)++;
  }
  check.require(stable >= 3 && unstable >= 3, "sample covers only one stability class");
  check.note(std::to_string(stable) + " stable / " + std::to_string(unstable) +
             " unstable, worst gap=" + fmt(worst));
  return check;
}

// 9. kernel symmetry and the closed-form/quadrature agreement
Check criterion_kernel_symmetry() {
  Check check;
  std::mt19937 rng(5150);
  std::uniform_real_distribution<double> tdist(-10.0, 10.0);
  std::vector<SpectralDensity> family = {
      SpectralDensity::power_law(1.0, 1.0, 1.0),
      SpectralDensity::power_law(2.0, 0.5, 1.0),
      SpectralDensity::power_law(0.3, 2.0, 1.7),
  };
  double worst_sym = 0.0, worst_rel = 0.0;
  for (const auto& j : family) {
    for (int i = 0; i < 100; ++i) {
      const double t = tdist(rng);
      const double eta_gap = std::abs(dissipation_kernel(j, -t) - std::conj(dissipation_kernel(j, t)));
      const double nu_gap = std::abs(noise_kernel(j, 0.7, -t) - std::conj(noise_kernel(j, 0.7, t)));
      worst_sym = std::max({worst_sym, eta_gap, nu_gap});
    }
    for (int i = 0; i < 20; ++i) {
      const double t = tdist(rng);
      const cplx closed = dissipation_kernel(j, t);
      const cplx quad = dissipation_kernel_quadrature(j, t);
      worst_rel = std::max(worst_rel, std::abs(closed - quad) / std::abs(closed));
    }
  }
  check.require(worst_sym < 1e-10, "symmetry violation " + fmt(worst_sym));
  check.require(worst_rel <= 1e-7, "closed vs quadrature relative gap " + fmt(worst_rel));
  check.note("worst symmetry=" + fmt(worst_sym) + ", worst rel=" + fmt(worst_rel));
  return check;
}

// 10. identical configs produce byte-identical CSV files
Check criterion_determinism() {
  Check check;
  const std::string text =
      "system.Omega = 1.0\n"
      "system.n0 = 1.0\n"
      "bath.variant = power_law\n"
      "bath.alpha = 0.8\n"
      "bath.s = 1.0\n"
      "bath.omega_c = 1.0\n"
      "temperature.T = 0.5\n"
      "grid.horizon = 5.0\n"
      "grid.step = 0.01\n"
      "discretization.K = 30\n"
      "discretization.omega_max = 6.0\n";
  auto config = parse_config(text, ".", "acceptance");
  const fs::path base = fs::temp_directory_path() / "nmosc_acceptance_det";
  fs::remove_all(base);
  auto first = run_simulate(config, base / "a");
  auto second = run_simulate(config, base / "b");
  check.require(read_text_file(first.propagator_csv) == read_text_file(second.propagator_csv),
                "propagator.csv differs between runs");
  check.require(read_text_file(first.coefficients_csv) == read_text_file(second.coefficients_csv),
                "coefficients.csv differs between runs");
  check.note("propagator.csv and coefficients.csv byte-identical");
  return check;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* label;
    std::function<Check()> fn;
  };
  const std::vector<Criterion> criteria = {
      {1, "oracle equivalence (solver vs exact diagonalization)", criterion_oracle_equivalence},
      {2, "second-order convergence under step halving", criterion_convergence_order},
      {3, "pole exists iff the margin is negative (alpha sweep)", criterion_iff_sweep},
      {4, "bound-state energy matches the minimum eigenvalue", criterion_bound_state_energy},
      {5, "multi-excitation ladder reaches n*E", criterion_ladder},
      {6, "sub-ohmic dissipationless regime matches the pole data", criterion_dissipationless},
      {7, "xi positivity and first-moment consistency", criterion_moment_consistency},
      {8, "QBM Schur complement identity and definiteness", criterion_qbm_schur},
      {9, "kernel symmetry and quadrature agreement", criterion_kernel_symmetry},
      {10, "byte-identical CSV output for identical configs", criterion_determinism},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    Check result;
    try {
      result = criterion.fn();
    } catch (const std::exception& e) {
      result.ok = false;
      result.detail = std::string("exception: ") + e.what();
    }
    if (!result.ok) ++failures;
    std::printf("criterion %2d [%s] %s%s%s\n", criterion.id, result.ok ? "PASS" : "FAIL",
                criterion.label, result.detail.empty() ? "" : " -- ", result.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures;
}
