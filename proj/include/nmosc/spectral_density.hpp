#pragma once

#include <cstddef>
#include <memory>
#include <utility>
#include <variant>
#include <vector>

namespace nmosc {

// One bath oscillator: frequency omega, coupling lambda. Units use
// hbar = k_B = 1; frequencies, energies and temperatures share one unit,
// time is its inverse.
struct BathMode {
  double omega = 0.0;
  double lambda = 0.0;
};

// Validated list of bath modes, strictly increasing in omega with positive
// couplings. An empty bath is the decoupled limit (all couplings dropped),
// which shows up naturally when discretizing a vanishing density.
class DiscreteBath {
public:
  DiscreteBath() = default;
  explicit DiscreteBath(std::vector<BathMode> modes);

  const std::vector<BathMode>& modes() const { return modes_; }
  std::size_t size() const { return modes_.size(); }
  bool empty() const { return modes_.empty(); }

private:
  std::vector<BathMode> modes_;
};

// J(omega) = alpha * omega^s * omega_c^(1-s) * exp(-omega/omega_c).
// s < 1 sub-ohmic, s = 1 ohmic, s > 1 super-ohmic.
struct PowerLawExpCutoff {
  double alpha = 0.0;
  double s = 1.0;
  double omega_c = 1.0;
};

// Linear interpolation between strictly increasing samples; zero outside
// the sampled range.
struct TabulatedDensity {
  std::vector<double> omega;
  std::vector<double> j;
};

class SpectralDensity;

// base(omega) outside [lo, hi], exactly zero inside.
struct BandGapDensity {
  std::shared_ptr<const SpectralDensity> base;
  double lo = 0.0;
  double hi = 0.0;
};

struct DiscreteDensity {
  DiscreteBath bath;
};

// Bath coupling weight per frequency. Continuum variants evaluate
// pointwise; the discrete variant is a sum of delta weights lambda_k^2 at
// omega_k and cannot be evaluated pointwise.
class SpectralDensity {
public:
  using Variant = std::variant<PowerLawExpCutoff, BandGapDensity, TabulatedDensity, DiscreteDensity>;

  static SpectralDensity power_law(double alpha, double s, double omega_c);
  static SpectralDensity band_gap(SpectralDensity base, double lo, double hi);
  static SpectralDensity tabulated(std::vector<double> omega, std::vector<double> j);
  static SpectralDensity discrete(DiscreteBath bath);

  bool is_discrete() const { return std::holds_alternative<DiscreteDensity>(v_); }
  bool is_band_gap() const { return std::holds_alternative<BandGapDensity>(v_); }
  bool is_power_law() const { return std::holds_alternative<PowerLawExpCutoff>(v_); }
  bool is_tabulated() const { return std::holds_alternative<TabulatedDensity>(v_); }

  const Variant& variant() const { return v_; }
  const DiscreteBath& bath() const;            // discrete variant only
  const PowerLawExpCutoff& power_law_parameters() const;
  const BandGapDensity& band_gap_parameters() const;
  const TabulatedDensity& table() const;

  // Pointwise J(omega) for continuum variants; omega must be >= 0.
  double evaluate(double omega) const;

private:
  explicit SpectralDensity(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

// delta_omega = -integral J(omega)/omega domega (continuum) or
// -sum lambda_k^2/omega_k (discrete); always <= 0. The stability margin of
// the coupled model is Omega + delta_omega.
double frequency_shift(const SpectralDensity& j);

// Midpoint-rule discretization on [0, omega_max] with K bins:
// omega_k = (k - 1/2) * domega, lambda_k^2 = J(omega_k) * domega.
// Bins with vanishing weight (band gaps, zero coupling) are dropped.
DiscreteBath discretize(const SpectralDensity& j, std::size_t k, double omega_max);

// Frequency beyond which the continuum tail is numerically negligible
// (below 1e-16 of the peak for the exponential-cutoff family).
double truncation_frequency(const SpectralDensity& j);

// Contiguous intervals covering the continuum support up to the truncation
// frequency, with band gaps removed and tabulated breakpoints included.
std::vector<std::pair<double, double>> support_intervals(const SpectralDensity& j);

}  // namespace nmosc
