#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "nmosc/run_config.hpp"

namespace nmosc {

// simulate: solve u(t), derive the master-equation coefficients, analyze
// the long-time behavior and stability, and write
//   propagator.csv    t, Re u, Im u, |u|, Re udot, Im udot
//   coefficients.csv  t, omega_tilde, gamma, xi, gamma_n, n_mean, valid
//   report.txt        flat key: value block
//   report.json       the same report, structured
//   gamma.svg, omega_tilde.svg   when outputs.emit_plots is set
// Identical configs produce byte-identical CSV files.
struct SimulateArtifacts {
  std::filesystem::path propagator_csv;
  std::filesystem::path coefficients_csv;
  std::filesystem::path report_txt;
  std::filesystem::path report_json;
  std::vector<std::filesystem::path> plots;
};
SimulateArtifacts run_simulate(const RunConfig& config, const std::filesystem::path& out_dir);

// bound-state: stability report (and in-gap pole scan / Brownian-motion
// block when configured); with a sweep, one report row per parameter value
// in sweep.csv.
struct SweepSpec {
  std::string parameter;  // alpha | s | omega_c | Omega
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
};
SweepSpec parse_sweep(const std::string& text);

struct BoundStateArtifacts {
  std::filesystem::path report_txt;
  std::filesystem::path report_json;
  std::optional<std::filesystem::path> sweep_csv;
};
BoundStateArtifacts run_bound_state(const RunConfig& config, const std::optional<SweepSpec>& sweep,
                                    const std::filesystem::path& out_dir);

// oracle-compare: time-stepped u against the exact-diagonalization u on a
// discrete bath, across step sizes {4h, 2h, h}; writes the error table and
// requires it to shrink with h (up to the machine-precision floor).
struct OracleCompareArtifacts {
  std::filesystem::path table_csv;
  std::filesystem::path report_txt;
  std::vector<double> steps;
  std::vector<double> max_errors;
};
OracleCompareArtifacts run_oracle_compare(const RunConfig& config,
                                          const std::filesystem::path& out_dir);

}  // namespace nmosc
