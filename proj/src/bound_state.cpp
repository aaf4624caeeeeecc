#include "nmosc/bound_state.hpp"

#include <cmath>
#include <limits>

#include "nmosc/errors.hpp"
#include "nmosc/quadrature.hpp"

namespace nmosc {

namespace {

// integral J(w) f(w) dw with the variant-appropriate rule: adaptive
// Gauss-Kronrod over the continuum support, the trapezoid convention on
// tabulated grids, exact sums for discrete baths. origin_limit is
// lim_{w->0} w f(w); it feeds the tabulated rule's first sample when the
// table starts at w = 0 (where J(0) = 0 contributes its slope).
template <class F>
double integrate_against_density(const SpectralDensity& j, F&& f, double origin_limit) {
  if (j.is_discrete()) {
    double acc = 0.0;
    for (const auto& m : j.bath().modes()) acc += m.lambda * m.lambda * f(m.omega);
    return acc;
  }
  if (j.is_tabulated()) {
    const auto& t = j.table();
    double acc = 0.0;
    std::vector<double> vals(t.omega.size());
    for (std::size_t i = 0; i < t.omega.size(); ++i) {
      if (t.omega[i] == 0.0) {
        if (t.j[i] > 0.0 && origin_limit != 0.0)
          throw DivergenceError("spectral integral diverges: tabulated J(0) > 0");
        const double slope = (t.j[1] - t.j[0]) / (t.omega[1] - t.omega[0]);
        vals[i] = slope * origin_limit;
      } else {
        vals[i] = t.j[i] * f(t.omega[i]);
      }
    }
    for (std::size_t i = 0; i + 1 < vals.size(); ++i)
      acc += 0.5 * (vals[i] + vals[i + 1]) * (t.omega[i + 1] - t.omega[i]);
    return acc;
  }

  QuadratureOptions opt;
  opt.rel_tol = 1e-13;
  opt.abs_tol = 1e-300;
  opt.max_panels = 200000;
  double acc = 0.0;
  for (const auto& [a, b] : support_intervals(j)) {
    acc += adaptive_integrate<double>([&](double w) { return j.evaluate(w) * f(w); },
                                      std::vector<double>{a, b}, opt, "spectral integral");
  }
  return acc;
}

double residue_at(const SpectralDensity& j, double omega0) {
  const double s = integrate_against_density(
      j, [omega0](double w) { return 1.0 / ((w - omega0) * (w - omega0)); }, 0.0);
  return 1.0 / (1.0 + s);
}

}  // namespace

namespace {

// g(x) = Omega + x - integral J/(w+x)
//      = margin + x * (1 + integral J/(w (w+x))),
// which pins g(0) to the margin exactly and makes monotonicity manifest.
double pole_function_with_margin(const SpectralDensity& j, double margin, double x) {
  const double r = integrate_against_density(
      j, [x](double w) { return 1.0 / (w * (w + x)); }, 1.0 / x);
  return margin + x * (1.0 + r);
}

}  // namespace

double pole_function(const SpectralDensity& j, double omega_sys, double x) {
  if (!(x > 0.0)) throw DomainError("pole_function: x must be > 0");
  return pole_function_with_margin(j, omega_sys + frequency_shift(j), x);
}

std::optional<BoundStatePole> negative_pole(const SpectralDensity& j, double omega_sys) {
  const double margin = omega_sys + frequency_shift(j);
  if (!(margin < 0.0)) return std::nullopt;  // marginal case: no pole

  // g(0) = margin < 0 and g grows at least linearly, so [0, hi] brackets
  // the unique root once g(hi) > 0.
  double lo = 0.0;
  double hi = std::max(1.0, -margin);
  for (int i = 0; i < 200 && pole_function_with_margin(j, margin, hi) <= 0.0; ++i) hi *= 2.0;

  const double tol = 1e-12 * std::max(1.0, std::abs(omega_sys));
  double mid = 0.5 * (lo + hi);
  bool converged = false;
  for (int i = 0; i < 200; ++i) {
    mid = 0.5 * (lo + hi);
    const double g = pole_function_with_margin(j, margin, mid);
    if (std::abs(g) < tol) {
      converged = true;
      break;
    }
    (g < 0.0 ? lo : hi) = mid;
    if (hi - lo <= 1e-16 * hi) {
      converged = true;
      break;
    }
  }
  if (!converged) throw NumericError("negative_pole: bisection did not converge");
  return BoundStatePole{-mid, residue_at(j, -mid)};
}

GapPoleScan gap_pole(const SpectralDensity& j, double omega_sys) {
  if (!j.is_band_gap()) throw UnsupportedVariantError("gap_pole: density has no band gap");
  const auto& gap = j.band_gap_parameters();

  auto h = [&](double x) {
    const double integral = integrate_against_density(
        j, [x](double w) { return 1.0 / (x - w); }, 0.0);
    return x - omega_sys - integral;
  };

  // Scan subinterval midpoints: h diverges at the gap edges, so roots
  // hugging an edge closer than half a scan cell are deliberately not
  // chased.
  constexpr int kScan = 256;
  const double width = gap.hi - gap.lo;
  GapPoleScan out;
  double prev_x = 0.0, prev_h = 0.0;
  for (int i = 0; i < kScan; ++i) {
    const double x = gap.lo + (static_cast<double>(i) + 0.5) * width / kScan;
    const double hx = h(x);
    if (i > 0 && std::signbit(hx) != std::signbit(prev_h)) {
      double a = prev_x, b = x, fa = prev_h;
      for (int it = 0; it < 100; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = h(m);
        if (std::signbit(fm) == std::signbit(fa)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
        if (b - a < 1e-13 * width) break;
      }
      out.all_roots.push_back(0.5 * (a + b));
    }
    prev_x = x;
    prev_h = hx;
  }

  if (!out.all_roots.empty()) {
    double best = out.all_roots.front();
    for (double r : out.all_roots)
      if (std::abs(r - omega_sys) < std::abs(best - omega_sys)) best = r;
    out.pole = BoundStatePole{best, residue_at(j, best)};
  }
  return out;
}

std::optional<double> discrete_bound_energy(const DiscreteBath& bath, double omega_sys) {
  if (bath.empty()) throw DomainError("discrete_bound_energy: bath must be nonempty");
  double shift_sum = 0.0;
  for (const auto& m : bath.modes()) shift_sum += m.lambda * m.lambda / m.omega;
  if (!(omega_sys - shift_sum < 0.0)) return std::nullopt;

  auto f = [&](double e) {
    double acc = e - omega_sys;
    for (const auto& m : bath.modes()) acc -= m.lambda * m.lambda / (e - m.omega);
    return acc;
  };

  // f(0-) = -(margin) > 0 and f(-B) < 0 since the sum is bounded by
  // sum lambda^2/omega for E < 0.
  const double bound = std::abs(omega_sys) + shift_sum + 1.0;
  double lo = -bound, hi = 0.0;
  double mid = 0.5 * (lo + hi);
  for (int i = 0; i < 300; ++i) {
    mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (std::abs(fm) < 1e-12) break;
    (fm < 0.0 ? lo : hi) = mid;
  }
  return mid;
}

StabilityReport stability_report(const SpectralDensity& j, double omega_sys) {
  StabilityReport report;
  report.delta_omega = frequency_shift(j);
  report.margin = omega_sys + report.delta_omega;
  report.unbounded = report.margin < 0.0;
  report.pole = negative_pole(j, omega_sys);

  if (report.pole.has_value() != report.unbounded)
    throw NumericError("stability_report: pole existence disagrees with the margin sign");

  if (j.is_band_gap()) {
    auto scan = gap_pole(j, omega_sys);
    report.in_gap_pole = scan.pole;
    report.gap_roots = std::move(scan.all_roots);
    if (!report.pole && report.in_gap_pole) report.pole = report.in_gap_pole;
  }
  if (j.is_discrete() && !j.bath().empty())
    report.discrete_energy = discrete_bound_energy(j.bath(), omega_sys);
  return report;
}

QbmReport qbm_stability(double kappa, const std::vector<QbmMode>& bath) {
  QbmReport report;
  for (const auto& m : bath) {
    if (!(m.mass > 0.0)) throw DomainError("qbm_stability: masses must be > 0");
    if (!(m.omega > 0.0)) throw DomainError("qbm_stability: frequencies must be > 0");
    report.delta_kappa -= m.coupling * m.coupling / (m.mass * m.omega * m.omega);
  }
  report.kappa_renormalized = kappa + report.delta_kappa;
  report.unstable = report.kappa_renormalized < 0.0;
  return report;
}

}  // namespace nmosc
