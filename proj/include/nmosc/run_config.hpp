#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nmosc/spectral_density.hpp"

namespace nmosc {

// Configuration file grammar: one `section.key = value` assignment per
// line; blank lines and text after '#' are ignored.
//
//   system.Omega   = 1.0        oscillator frequency (required)
//   system.n0      = 0.0        initial occupation (optional, default 0)
//
//   bath.variant   = power_law | band_gap | tabulated | discrete
//   bath.alpha, bath.s, bath.omega_c    power-law parameters (power_law,
//                                       and the base of band_gap)
//   bath.gap_lo, bath.gap_hi            band gap edges (band_gap)
//   bath.csv       = path               two-column (omega, J) CSV, relative
//                                       to the config file (tabulated, or
//                                       the base of band_gap)
//   bath.modes     = (w1,l1) (w2,l2)    explicit mode list (discrete)
//
//   temperature.T  = 0.0        bath temperature (>= 0)
//
//   grid.horizon   = 10.0       total integration time
//   grid.step      = 0.005      step size; horizon/step must be integral
//
//   discretization.K         = 200      optional; replace a continuum bath
//   discretization.omega_max = 10.0     by K midpoint modes on [0, omega_max]
//
//   outputs.directory  = out    output directory
//   outputs.emit_plots = false  also write SVG line plots
//
//   qbm.kappa = 1.0             optional Brownian-motion analogue block
//   qbm.modes = (m1,w1,c1) ...  (bound-state command only)
struct BathSpec {
  std::string variant;
  double alpha = 0.0;
  double s = 1.0;
  double omega_c = 1.0;
  double gap_lo = 0.0;
  double gap_hi = 0.0;
  std::string csv;
  std::vector<BathMode> modes;
};

struct QbmSpec {
  double kappa = 0.0;
  std::vector<double> masses;
  std::vector<double> omegas;
  std::vector<double> couplings;
};

struct RunConfig {
  double omega_sys = 0.0;
  double n0 = 0.0;
  BathSpec bath_spec;
  SpectralDensity bath = SpectralDensity::power_law(0.0, 1.0, 1.0);
  double temperature = 0.0;
  double horizon = 0.0;
  double step = 0.0;
  std::optional<std::size_t> discretization_modes;
  double discretization_omega_max = 0.0;
  std::string output_directory = "out";
  bool emit_plots = false;
  std::optional<QbmSpec> qbm;
};

// `base_dir` resolves relative bath.csv paths. Reports offending line
// numbers and fields in the error message.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir,
                       const std::string& source_name);
RunConfig parse_config_file(const std::filesystem::path& path);

// Emits a config file that parses back to the same semantic fields.
std::string serialize_config(const RunConfig& config);

}  // namespace nmosc
