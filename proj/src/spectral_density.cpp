#include "nmosc/spectral_density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nmosc/errors.hpp"
#include "nmosc/quadrature.hpp"

namespace nmosc {

DiscreteBath::DiscreteBath(std::vector<BathMode> modes) : modes_(std::move(modes)) {
  double last = 0.0;
  for (const auto& m : modes_) {
    if (!(m.omega > 0.0)) throw DomainError("DiscreteBath: mode frequencies must be positive");
    if (!(m.omega > last)) throw DomainError("DiscreteBath: mode frequencies must be strictly increasing");
    if (!(m.lambda > 0.0)) throw DomainError("DiscreteBath: couplings must be positive");
    last = m.omega;
  }
}

SpectralDensity SpectralDensity::power_law(double alpha, double s, double omega_c) {
  if (!(alpha >= 0.0)) throw DomainError("power_law: alpha must be >= 0");
  if (!(s > 0.0)) throw DomainError("power_law: exponent s must be > 0");
  if (!(omega_c > 0.0)) throw DomainError("power_law: cutoff omega_c must be > 0");
  return SpectralDensity(PowerLawExpCutoff{alpha, s, omega_c});
}

SpectralDensity SpectralDensity::band_gap(SpectralDensity base, double lo, double hi) {
  if (base.is_discrete()) throw UnsupportedVariantError("band_gap: base must be a continuum density");
  if (!(0.0 < lo && lo < hi)) throw DomainError("band_gap: need 0 < lo < hi");
  BandGapDensity g;
  g.base = std::make_shared<SpectralDensity>(std::move(base));
  g.lo = lo;
  g.hi = hi;
  return SpectralDensity(std::move(g));
}

SpectralDensity SpectralDensity::tabulated(std::vector<double> omega, std::vector<double> j) {
  if (omega.size() != j.size() || omega.size() < 2)
    throw DomainError("tabulated: need at least two (omega, J) samples");
  for (std::size_t i = 0; i < omega.size(); ++i) {
    if (!(omega[i] >= 0.0)) throw DomainError("tabulated: omega samples must be >= 0");
    if (i > 0 && !(omega[i] > omega[i - 1]))
      throw DomainError("tabulated: omega samples must be strictly increasing");
    if (!(j[i] >= 0.0)) throw DomainError("tabulated: J samples must be >= 0");
  }
  return SpectralDensity(TabulatedDensity{std::move(omega), std::move(j)});
}

SpectralDensity SpectralDensity::discrete(DiscreteBath bath) {
  return SpectralDensity(DiscreteDensity{std::move(bath)});
}

const DiscreteBath& SpectralDensity::bath() const {
  if (const auto* d = std::get_if<DiscreteDensity>(&v_)) return d->bath;
  throw UnsupportedVariantError("SpectralDensity: not a discrete density");
}

const PowerLawExpCutoff& SpectralDensity::power_law_parameters() const {
  if (const auto* p = std::get_if<PowerLawExpCutoff>(&v_)) return *p;
  throw UnsupportedVariantError("SpectralDensity: not a power-law density");
}

const BandGapDensity& SpectralDensity::band_gap_parameters() const {
  if (const auto* g = std::get_if<BandGapDensity>(&v_)) return *g;
  throw UnsupportedVariantError("SpectralDensity: not a band-gap density");
}

const TabulatedDensity& SpectralDensity::table() const {
  if (const auto* t = std::get_if<TabulatedDensity>(&v_)) return *t;
  throw UnsupportedVariantError("SpectralDensity: not a tabulated density");
}

namespace {

double evaluate_table(const TabulatedDensity& t, double omega) {
  if (omega < t.omega.front() || omega > t.omega.back()) return 0.0;
  auto it = std::upper_bound(t.omega.begin(), t.omega.end(), omega);
  if (it == t.omega.begin()) return t.j.front();
  std::size_t hi = static_cast<std::size_t>(it - t.omega.begin());
  if (hi == t.omega.size()) return t.j.back();
  const std::size_t lo = hi - 1;
  const double w = (omega - t.omega[lo]) / (t.omega[hi] - t.omega[lo]);
  return t.j[lo] + w * (t.j[hi] - t.j[lo]);
}

}  // namespace

double SpectralDensity::evaluate(double omega) const {
  if (omega < 0.0) throw DomainError("evaluate: omega must be >= 0");
  return std::visit(
      [omega](const auto& v) -> double {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, PowerLawExpCutoff>) {
          if (omega == 0.0) return 0.0;  // omega^s with s > 0
          return v.alpha * std::pow(omega, v.s) * std::pow(v.omega_c, 1.0 - v.s) *
                 std::exp(-omega / v.omega_c);
        } else if constexpr (std::is_same_v<V, BandGapDensity>) {
          if (omega >= v.lo && omega <= v.hi) return 0.0;
          return v.base->evaluate(omega);
        } else if constexpr (std::is_same_v<V, TabulatedDensity>) {
          return evaluate_table(v, omega);
        } else {
          throw UnsupportedVariantError("evaluate: discrete densities have no pointwise value");
        }
      },
      v_);
}

double truncation_frequency(const SpectralDensity& j) {
  return std::visit(
      [](const auto& v) -> double {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, PowerLawExpCutoff>) {
          // exp(-40) ~ 4e-18: tail below 1e-16 of the peak.
          return v.omega_c * (40.0 + 10.0 * v.s);
        } else if constexpr (std::is_same_v<V, BandGapDensity>) {
          return truncation_frequency(*v.base);
        } else if constexpr (std::is_same_v<V, TabulatedDensity>) {
          return v.omega.back();
        } else {
          return v.bath.empty() ? 0.0 : v.bath.modes().back().omega;
        }
      },
      j.variant());
}

std::vector<std::pair<double, double>> support_intervals(const SpectralDensity& j) {
  if (j.is_discrete())
    throw UnsupportedVariantError("support_intervals: discrete density has no continuum support");

  std::vector<std::pair<double, double>> out;
  if (j.is_band_gap()) {
    const auto& g = j.band_gap_parameters();
    auto base = support_intervals(*g.base);
    for (const auto& [a, b] : base) {
      // subtract [lo, hi] from [a, b]
      if (b <= g.lo || a >= g.hi) {
        out.emplace_back(a, b);
        continue;
      }
      if (a < g.lo) out.emplace_back(a, g.lo);
      if (b > g.hi) out.emplace_back(g.hi, b);
    }
    return out;
  }
  if (j.is_tabulated()) {
    const auto& t = j.table();
    for (std::size_t i = 0; i + 1 < t.omega.size(); ++i) out.emplace_back(t.omega[i], t.omega[i + 1]);
    return out;
  }
  out.emplace_back(0.0, truncation_frequency(j));
  return out;
}

namespace {

// -integral J/omega for the tabulated variant: trapezoid on the sample grid.
// A first sample at omega = 0 contributes its linear-interpolation limit
// J'(0) when J(0) = 0 and signals divergence when J(0) > 0.
double table_shift(const TabulatedDensity& t) {
  std::vector<double> f(t.omega.size());
  for (std::size_t i = 0; i < t.omega.size(); ++i) {
    if (t.omega[i] == 0.0) {
      if (t.j[i] > 0.0)
        throw DivergenceError("frequency_shift: tabulated J(0) > 0 makes the integral diverge");
      f[i] = (t.j[1] - t.j[0]) / (t.omega[1] - t.omega[0]);
    } else {
      f[i] = t.j[i] / t.omega[i];
    }
  }
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < f.size(); ++i)
    acc += 0.5 * (f[i] + f[i + 1]) * (t.omega[i + 1] - t.omega[i]);
  return -acc;
}

}  // namespace

double frequency_shift(const SpectralDensity& j) {
  return std::visit(
      [&j](const auto& v) -> double {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, PowerLawExpCutoff>) {
          // integral alpha omega^(s-1) omega_c^(1-s) exp(-omega/omega_c)
          //   = alpha Gamma(s) omega_c, exactly.
          return -v.alpha * std::tgamma(v.s) * v.omega_c;
        } else if constexpr (std::is_same_v<V, BandGapDensity>) {
          // remove the gap's share from the base shift
          const SpectralDensity& base = *v.base;
          QuadratureOptions opt;
          opt.rel_tol = 1e-13;
          opt.abs_tol = 1e-300;
          const double gap_part = adaptive_integrate<double>(
              [&base](double w) { return base.evaluate(w) / w; }, v.lo, v.hi, opt,
              "frequency_shift gap");
          return frequency_shift(base) + gap_part;
        } else if constexpr (std::is_same_v<V, TabulatedDensity>) {
          return table_shift(v);
        } else {
          double acc = 0.0;
          for (const auto& m : v.bath.modes()) acc += m.lambda * m.lambda / m.omega;
          return -acc;
        }
      },
      j.variant());
}

DiscreteBath discretize(const SpectralDensity& j, std::size_t k, double omega_max) {
  if (j.is_discrete()) throw UnsupportedVariantError("discretize: density is already discrete");
  if (k < 1) throw DomainError("discretize: need at least one bin");
  if (!(omega_max > 0.0)) throw DomainError("discretize: omega_max must be > 0");

  const double domega = omega_max / static_cast<double>(k);
  std::vector<BathMode> modes;
  modes.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double omega = (static_cast<double>(i) + 0.5) * domega;
    const double lambda_sq = j.evaluate(omega) * domega;
    if (lambda_sq <= 0.0) continue;  // gap bins and vanishing coupling are dropped
    modes.push_back(BathMode{omega, std::sqrt(lambda_sq)});
  }
  return DiscreteBath(std::move(modes));
}

}  // namespace nmosc
