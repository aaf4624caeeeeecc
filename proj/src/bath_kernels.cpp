#include "nmosc/bath_kernels.hpp"

#include <cmath>
#include <numbers>

#include "nmosc/errors.hpp"
#include "nmosc/quadrature.hpp"

namespace nmosc {

namespace {

using cplx = std::complex<double>;

constexpr double kKernelRelTol = 1e-8;

// integral_0^inf w^s exp(-w/wc) exp(-i w t) dw = Gamma(s+1) (1/wc + i t)^-(s+1)
cplx power_law_eta(const PowerLawExpCutoff& p, double t) {
  const cplx base(1.0 / p.omega_c, t);
  return p.alpha * std::pow(p.omega_c, 1.0 - p.s) * std::tgamma(p.s + 1.0) *
         std::pow(base, -(p.s + 1.0));
}

double oscillatory_width(double t) {
  // initial panels at most a quarter half-period wide
  return t == 0.0 ? 0.0 : std::numbers::pi / (4.0 * std::abs(t));
}

std::vector<double> interval_breaks(const std::vector<std::pair<double, double>>& segs) {
  std::vector<double> breaks;
  for (const auto& [a, b] : segs) {
    if (breaks.empty() || breaks.back() != a) breaks.push_back(a);
    breaks.push_back(b);
  }
  return breaks;
}

cplx quadrature_over_support(const SpectralDensity& j, double t, auto phase_weight,
                             const char* label) {
  // Integrate segment by segment so band gaps and tabulated kinks land on
  // panel boundaries and the integrand stays smooth inside each panel.
  QuadratureOptions opt;
  opt.rel_tol = kKernelRelTol;
  opt.abs_tol = 1e-300;
  opt.max_panels = 200000;
  opt.max_initial_width = oscillatory_width(t);
  cplx acc = 0.0;
  for (const auto& [a, b] : support_intervals(j)) {
    acc += adaptive_integrate<cplx>(
        [&](double w) { return j.evaluate(w) * phase_weight(w); }, std::vector<double>{a, b}, opt,
        label);
  }
  return acc;
}

// Power-law parameters governing the integrand near omega = 0, when the
// variant (or a band-gap wrapper around it) is of that family.
const PowerLawExpCutoff* origin_power_law(const SpectralDensity& j) {
  if (j.is_power_law()) return &j.power_law_parameters();
  if (j.is_band_gap()) {
    const auto& base = *j.band_gap_parameters().base;
    if (base.is_power_law()) return &base.power_law_parameters();
  }
  return nullptr;
}

}  // namespace

std::complex<double> dissipation_kernel_quadrature(const SpectralDensity& j, double t) {
  if (j.is_discrete())
    throw UnsupportedVariantError("dissipation_kernel_quadrature: discrete bath has an exact sum");
  return quadrature_over_support(
      j, t, [t](double w) { return std::polar(1.0, -w * t); }, "dissipation kernel");
}

std::complex<double> dissipation_kernel(const SpectralDensity& j, double t) {
  if (j.is_discrete()) {
    cplx acc = 0.0;
    for (const auto& m : j.bath().modes())
      acc += m.lambda * m.lambda * std::polar(1.0, -m.omega * t);
    return acc;
  }
  if (j.is_power_law()) return power_law_eta(j.power_law_parameters(), t);
  if (j.is_band_gap()) {
    // closed-form base minus the gap segment, when the base has a closed
    // form; only the gap integral needs quadrature then
    const auto& g = j.band_gap_parameters();
    if (g.base->is_power_law()) {
      const SpectralDensity& base = *g.base;
      QuadratureOptions opt;
      opt.rel_tol = kKernelRelTol;
      opt.abs_tol = 1e-300;
      opt.max_panels = 200000;
      opt.max_initial_width = oscillatory_width(t);
      const cplx gap_part = adaptive_integrate<cplx>(
          [&base, t](double w) { return base.evaluate(w) * std::polar(1.0, -w * t); },
          std::vector<double>{g.lo, g.hi}, opt, "dissipation kernel gap");
      return power_law_eta(base.power_law_parameters(), t) - gap_part;
    }
  }
  return dissipation_kernel_quadrature(j, t);
}

std::complex<double> noise_kernel(const SpectralDensity& j, double temperature, double t) {
  if (temperature < 0.0) throw DomainError("noise_kernel: temperature must be >= 0");
  if (temperature == 0.0) return 0.0;
  const double T = temperature;

  if (j.is_discrete()) {
    cplx acc = 0.0;
    for (const auto& m : j.bath().modes())
      acc += m.lambda * m.lambda / std::expm1(m.omega / T) * std::polar(1.0, m.omega * t);
    return acc;
  }

  // expm1 keeps J(w)/(exp(w/T)-1) -> J(w) T / w stable as w -> 0.
  auto bose_weight = [T, t](double w) { return std::polar(1.0, w * t) / std::expm1(w / T); };

  if (j.is_tabulated()) {
    const auto& tab = j.table();
    if (tab.omega.front() == 0.0 && tab.j.front() > 0.0)
      throw DivergenceError("noise_kernel: tabulated J(0) > 0 makes the thermal integral diverge");
  }

  const PowerLawExpCutoff* pl = origin_power_law(j);
  if (pl == nullptr || pl->s >= 1.0 || pl->alpha == 0.0) {
    return quadrature_over_support(j, t, bose_weight, "noise kernel");
  }

  // Sub-ohmic: the integrand behaves like w^(s-1) near zero. Substitute
  // u = w^s on a leading panel [0, a] so the transformed integrand is
  // regular, and integrate the remainder directly.
  const double s = pl->s;
  auto segs = support_intervals(j);
  const double a = std::min(segs.front().second, pl->omega_c);

  QuadratureOptions head_opt;
  head_opt.rel_tol = kKernelRelTol;
  head_opt.abs_tol = 1e-300;
  head_opt.max_panels = 200000;
  const double phase_rate_u = std::abs(t) / s * std::pow(a, 1.0 - s);
  head_opt.max_initial_width =
      phase_rate_u == 0.0 ? 0.0 : std::numbers::pi / (4.0 * phase_rate_u);
  cplx acc = adaptive_integrate<cplx>(
      [&](double u) {
        const double w = std::pow(u, 1.0 / s);
        return (1.0 / s) * std::pow(w, 1.0 - s) * j.evaluate(w) * bose_weight(w);
      },
      0.0, std::pow(a, s), head_opt, "noise kernel head");

  QuadratureOptions tail_opt;
  tail_opt.rel_tol = kKernelRelTol;
  tail_opt.abs_tol = 1e-300;
  tail_opt.max_panels = 200000;
  tail_opt.max_initial_width = oscillatory_width(t);
  std::vector<double> breaks;
  breaks.push_back(a);
  for (const auto& [lo, hi] : segs) {
    if (hi <= a) continue;
    if (lo > breaks.back()) breaks.push_back(lo);
    breaks.push_back(hi);
  }
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    acc += adaptive_integrate<cplx>(
        [&](double w) { return j.evaluate(w) * bose_weight(w); },
        std::vector<double>{breaks[i], breaks[i + 1]}, tail_opt, "noise kernel");
  }
  return acc;
}

BathKernels::BathKernels(SpectralDensity j, double temperature)
    : j_(std::move(j)), temperature_(temperature) {
  if (temperature < 0.0) throw DomainError("BathKernels: temperature must be >= 0");
}

double BathKernels::bose_occupation(double omega) const {
  if (temperature_ == 0.0) return 0.0;
  if (!(omega > 0.0)) throw DomainError("bose_occupation: omega must be > 0");
  return 1.0 / std::expm1(omega / temperature_);
}

void BathKernels::build_grid(double step, std::size_t steps) {
  if (!(step > 0.0)) throw DomainError("build_grid: step must be > 0");
  step_ = step;
  steps_ = steps;
  eta_grid_.resize(steps + 1);
  zero_eta_ = true;
  for (std::size_t n = 0; n <= steps; ++n) {
    eta_grid_[n] = eta(step * static_cast<double>(n));
    if (eta_grid_[n] != 0.0) zero_eta_ = false;
  }
}

std::span<const BathKernels::Node> BathKernels::frequency_nodes(double t_max) {
  if (!(t_max > 0.0)) throw DomainError("frequency_nodes: t_max must be > 0");
  if (nodes_t_max_ == t_max) return nodes_;
  nodes_.clear();
  nodes_t_max_ = t_max;

  if (j_.is_discrete()) {
    for (const auto& m : j_.bath().modes()) nodes_.push_back({m.omega, m.lambda * m.lambda});
    return nodes_;
  }

  // Composite Gauss-Legendre panels; keep the phase advance w*t_max below
  // ~3 radians per panel so a 12-point rule resolves every oscillation of
  // the accumulated integrals it will be used for.
  static const GaussLegendreRule rule = gauss_legendre(12);
  const double max_width = 3.0 / t_max;
  constexpr std::size_t kMaxNodes = 2000000;

  auto add_panels = [&](double a, double b, auto&& node_of) {
    if (!(b > a)) return;
    std::size_t pieces = static_cast<std::size_t>(std::ceil((b - a) / max_width));
    pieces = std::max<std::size_t>(pieces, 4);
    if (nodes_.size() + pieces * rule.nodes.size() > kMaxNodes)
      throw AccuracyError("frequency_nodes: grid would exceed the node budget");
    const double w = (b - a) / static_cast<double>(pieces);
    for (std::size_t p = 0; p < pieces; ++p) {
      const double lo = a + w * static_cast<double>(p);
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double x = lo + 0.5 * w * (1.0 + rule.nodes[q]);
        node_of(x, 0.5 * w * rule.weights[q]);
      }
    }
  };

  auto segs = support_intervals(j_);
  const PowerLawExpCutoff* pl = origin_power_law(j_);
  double start = segs.empty() ? 0.0 : segs.front().first;

  if (pl != nullptr && pl->s < 1.0 && pl->alpha > 0.0 && !segs.empty() &&
      segs.front().first == 0.0) {
    // Leading sub-ohmic panel via u = w^s, so J*n(w) ~ w^(s-1) integrates
    // with regular weights.
    const double s = pl->s;
    const double a = std::min(segs.front().second, pl->omega_c);
    const double phase_rate_u = t_max / s * std::pow(a, 1.0 - s);
    const double head_width = 3.0 / phase_rate_u;
    std::size_t pieces =
        std::max<std::size_t>(4, static_cast<std::size_t>(std::ceil(std::pow(a, s) / head_width)));
    const double wu = std::pow(a, s) / static_cast<double>(pieces);
    for (std::size_t p = 0; p < pieces; ++p) {
      const double lo = wu * static_cast<double>(p);
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double u = lo + 0.5 * wu * (1.0 + rule.nodes[q]);
        const double w = std::pow(u, 1.0 / s);
        const double jac = (1.0 / s) * std::pow(w, 1.0 - s);
        nodes_.push_back({w, 0.5 * wu * rule.weights[q] * jac * j_.evaluate(w)});
      }
    }
    start = a;
  }

  for (const auto& [a, b] : segs) {
    const double lo = std::max(a, start);
    if (!(b > lo)) continue;
    add_panels(lo, b, [&](double w, double weight) {
      nodes_.push_back({w, weight * j_.evaluate(w)});
    });
  }
  return nodes_;
}

}  // namespace nmosc
