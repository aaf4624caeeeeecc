#include "nmosc/pipeline.hpp"

#include <cmath>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "nmosc/bath_kernels.hpp"
#include "nmosc/bound_state.hpp"
#include "nmosc/coefficients.hpp"
#include "nmosc/errors.hpp"
#include "nmosc/oracle.hpp"
#include "nmosc/propagator.hpp"
#include "nmosc/text_io.hpp"

namespace nmosc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kLongTimeWindow = 0.25;

SpectralDensity dynamics_density(const RunConfig& config) {
  if (config.discretization_modes)
    return SpectralDensity::discrete(
        discretize(config.bath, *config.discretization_modes, config.discretization_omega_max));
  return config.bath;
}

std::string describe_bath(const BathSpec& spec) {
  std::ostringstream out;
  out << spec.variant;
  if (spec.variant == "power_law" || (spec.variant == "band_gap" && spec.csv.empty()))
    out << " alpha=" << format_g17(spec.alpha) << " s=" << format_g17(spec.s)
        << " omega_c=" << format_g17(spec.omega_c);
  if (spec.variant == "band_gap")
    out << " gap=[" << format_g17(spec.gap_lo) << "," << format_g17(spec.gap_hi) << "]";
  if (!spec.csv.empty()) out << " csv=" << spec.csv;
  if (spec.variant == "discrete") out << " modes=" << spec.modes.size();
  return out.str();
}

void append_stability(std::ostringstream& txt, json& js, const StabilityReport& report) {
  txt << "delta_omega: " << format_g17(report.delta_omega) << "\n";
  txt << "margin: " << format_g17(report.margin) << "\n";
  txt << "unbounded: " << (report.unbounded ? "true" : "false") << "\n";
  js["delta_omega"] = report.delta_omega;
  js["margin"] = report.margin;
  js["unbounded"] = report.unbounded;
  if (report.pole) {
    txt << "pole.omega0: " << format_g17(report.pole->omega0) << "\n";
    txt << "pole.residue: " << format_g17(report.pole->residue) << "\n";
    js["pole"] = {{"omega0", report.pole->omega0}, {"residue", report.pole->residue}};
  } else {
    txt << "pole: none\n";
    js["pole"] = nullptr;
  }
  if (report.in_gap_pole) {
    txt << "gap_pole.omega0: " << format_g17(report.in_gap_pole->omega0) << "\n";
    txt << "gap_pole.residue: " << format_g17(report.in_gap_pole->residue) << "\n";
    js["gap_pole"] = {{"omega0", report.in_gap_pole->omega0},
                      {"residue", report.in_gap_pole->residue}};
    js["gap_roots"] = report.gap_roots;
  }
  if (report.discrete_energy) {
    txt << "discrete_energy: " << format_g17(*report.discrete_energy) << "\n";
    js["discrete_energy"] = *report.discrete_energy;
  }
}

}  // namespace

SimulateArtifacts run_simulate(const RunConfig& config, const fs::path& out_dir) {
  fs::create_directories(out_dir);

  const SpectralDensity density = dynamics_density(config);
  BathKernels kernels(density, config.temperature);
  PropagatorTrajectory traj = solve_u(kernels, config.omega_sys, config.horizon, config.step);
  XiResult xi = compute_xi(traj, kernels);
  CoefficientTrajectory coeffs = compute_coefficients(traj, xi);
  OccupationResult occupation = mean_occupation(traj, coeffs, config.n0);
  StabilityReport stability = stability_report(density, config.omega_sys);

  std::optional<LongTimeBehavior> tail;
  try {
    tail = long_time_behavior(traj, kLongTimeWindow);
  } catch (const InsufficientDataError&) {
    // short trajectories simply have no long-time section
  }

  SimulateArtifacts artifacts;

  {
    std::ostringstream csv;
    csv << "t,re_u,im_u,abs_u,re_udot,im_udot\n";
    for (std::size_t n = 0; n < traj.u.size(); ++n) {
      csv << format_g17(traj.grid.time(n)) << ',' << format_g17(traj.u[n].real()) << ','
          << format_g17(traj.u[n].imag()) << ',' << format_g17(std::abs(traj.u[n])) << ','
          << format_g17(traj.u_dot[n].real()) << ',' << format_g17(traj.u_dot[n].imag()) << '\n';
    }
    artifacts.propagator_csv = out_dir / "propagator.csv";
    atomic_write_file(artifacts.propagator_csv, csv.str());
  }

  {
    std::ostringstream csv;
    csv << "t,omega_tilde,gamma,xi,gamma_n,n_mean,valid\n";
    for (std::size_t n = 0; n < traj.u.size(); ++n) {
      csv << format_g17(traj.grid.time(n)) << ',' << format_g17(coeffs.omega_tilde[n]) << ','
          << format_g17(coeffs.gamma[n]) << ',' << format_g17(coeffs.xi[n]) << ','
          << format_g17(coeffs.gamma_n[n]) << ',' << format_g17(occupation.n_mean[n]) << ','
          << (coeffs.valid[n] ? '1' : '0') << '\n';
    }
    artifacts.coefficients_csv = out_dir / "coefficients.csv";
    atomic_write_file(artifacts.coefficients_csv, csv.str());
  }

  std::ostringstream txt;
  json js;
  txt << "command: simulate\n";
  txt << "omega_sys: " << format_g17(config.omega_sys) << "\n";
  txt << "temperature: " << format_g17(config.temperature) << "\n";
  txt << "bath: " << describe_bath(config.bath_spec) << "\n";
  if (config.discretization_modes) {
    txt << "discretization.K: " << *config.discretization_modes << "\n";
    txt << "discretization.omega_max: " << format_g17(config.discretization_omega_max) << "\n";
  }
  txt << "grid.horizon: " << format_g17(config.horizon) << "\n";
  txt << "grid.step: " << format_g17(config.step) << "\n";
  js["command"] = "simulate";
  js["omega_sys"] = config.omega_sys;
  js["temperature"] = config.temperature;
  js["bath"] = describe_bath(config.bath_spec);
  js["grid"] = {{"horizon", config.horizon}, {"step", config.step}};

  append_stability(txt, js, stability);

  if (tail) {
    txt << "long_time.window: " << format_g17(kLongTimeWindow) << "\n";
    txt << "long_time.plateau_modulus: " << format_g17(tail->plateau_modulus) << "\n";
    txt << "long_time.rotation_frequency: " << format_g17(tail->rotation_frequency) << "\n";
    txt << "long_time.modulus_stddev: " << format_g17(tail->modulus_stddev) << "\n";
    txt << "long_time.is_dissipationless: " << (tail->is_dissipationless ? "true" : "false")
        << "\n";
    js["long_time"] = {{"window", kLongTimeWindow},
                       {"plateau_modulus", tail->plateau_modulus},
                       {"rotation_frequency", tail->rotation_frequency},
                       {"modulus_stddev", tail->modulus_stddev},
                       {"is_dissipationless", tail->is_dissipationless}};
  } else {
    txt << "long_time: insufficient samples\n";
    js["long_time"] = nullptr;
  }
  txt << "occupation.n0: " << format_g17(config.n0) << "\n";
  txt << "occupation.max_ode_deviation: " << format_g17(occupation.max_deviation) << "\n";
  js["occupation"] = {{"n0", config.n0}, {"max_ode_deviation", occupation.max_deviation}};

  artifacts.report_txt = out_dir / "report.txt";
  atomic_write_file(artifacts.report_txt, txt.str());
  artifacts.report_json = out_dir / "report.json";
  atomic_write_file(artifacts.report_json, js.dump(2) + "\n");

  if (config.emit_plots) {
    std::vector<double> times(traj.u.size());
    for (std::size_t n = 0; n < times.size(); ++n) times[n] = traj.grid.time(n);
    const fs::path gamma_svg = out_dir / "gamma.svg";
    write_svg_line_plot(gamma_svg, "damping rate", "t", "gamma(t)", times, coeffs.gamma);
    const fs::path omega_svg = out_dir / "omega_tilde.svg";
    write_svg_line_plot(omega_svg, "renormalized frequency", "t", "omega_tilde(t)", times,
                        coeffs.omega_tilde);
    artifacts.plots = {gamma_svg, omega_svg};
  }
  return artifacts;
}

SweepSpec parse_sweep(const std::string& text) {
  // parameter=lo:hi:n
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw ConfigError("sweep: expected parameter=lo:hi:n");
  SweepSpec spec;
  spec.parameter = text.substr(0, eq);
  const std::string rest = text.substr(eq + 1);
  const auto c1 = rest.find(':');
  const auto c2 = rest.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw ConfigError("sweep: expected parameter=lo:hi:n");
  try {
    spec.lo = std::stod(rest.substr(0, c1));
    spec.hi = std::stod(rest.substr(c1 + 1, c2 - c1 - 1));
    const long n = std::stol(rest.substr(c2 + 1));
    if (n < 2) throw ConfigError("sweep: need at least 2 points");
    spec.count = static_cast<std::size_t>(n);
  } catch (const std::logic_error&) {
    throw ConfigError("sweep: malformed numbers in '" + text + "'");
  }
  if (spec.parameter != "alpha" && spec.parameter != "s" && spec.parameter != "omega_c" &&
      spec.parameter != "Omega")
    throw ConfigError("sweep: parameter must be alpha, s, omega_c or Omega");
  return spec;
}

namespace {

struct SweepPoint {
  double value = 0.0;
  StabilityReport report;
};

SweepPoint sweep_point(const RunConfig& config, const SweepSpec& spec, double value) {
  double omega_sys = config.omega_sys;
  SpectralDensity density = config.bath;
  if (spec.parameter == "Omega") {
    omega_sys = value;
  } else {
    if (!config.bath.is_power_law())
      throw ConfigError("sweep: bath parameter sweeps need a power_law bath");
    auto p = config.bath.power_law_parameters();
    if (spec.parameter == "alpha") p.alpha = value;
    if (spec.parameter == "s") p.s = value;
    if (spec.parameter == "omega_c") p.omega_c = value;
    density = SpectralDensity::power_law(p.alpha, p.s, p.omega_c);
  }
  return SweepPoint{value, stability_report(density, omega_sys)};
}

}  // namespace

BoundStateArtifacts run_bound_state(const RunConfig& config, const std::optional<SweepSpec>& sweep,
                                    const fs::path& out_dir) {
  fs::create_directories(out_dir);
  BoundStateArtifacts artifacts;

  std::ostringstream txt;
  json js;
  txt << "command: bound-state\n";
  txt << "omega_sys: " << format_g17(config.omega_sys) << "\n";
  txt << "bath: " << describe_bath(config.bath_spec) << "\n";
  js["command"] = "bound-state";
  js["omega_sys"] = config.omega_sys;
  js["bath"] = describe_bath(config.bath_spec);

  StabilityReport report = stability_report(config.bath, config.omega_sys);
  append_stability(txt, js, report);

  if (config.qbm) {
    std::vector<QbmMode> modes;
    for (std::size_t i = 0; i < config.qbm->masses.size(); ++i)
      modes.push_back(
          QbmMode{config.qbm->masses[i], config.qbm->omegas[i], config.qbm->couplings[i]});
    const QbmReport qbm = qbm_stability(config.qbm->kappa, modes);
    const auto hessian = oracle::qbm_hessian_check(config.qbm->kappa, modes);
    // the formula reads the Hamiltonian's couplings c_k for its lambda_k
    txt << "qbm.kappa: " << format_g17(config.qbm->kappa) << "\n";
    txt << "qbm.delta_kappa: " << format_g17(qbm.delta_kappa) << "\n";
    txt << "qbm.kappa_renormalized: " << format_g17(qbm.kappa_renormalized) << "\n";
    txt << "qbm.unstable: " << (qbm.unstable ? "true" : "false") << "\n";
    txt << "qbm.schur_complement: " << format_g17(hessian.schur_complement) << "\n";
    txt << "qbm.min_eigenvalue: " << format_g17(hessian.min_eigenvalue) << "\n";
    js["qbm"] = {{"kappa", config.qbm->kappa},
                 {"delta_kappa", qbm.delta_kappa},
                 {"kappa_renormalized", qbm.kappa_renormalized},
                 {"unstable", qbm.unstable},
                 {"schur_complement", hessian.schur_complement},
                 {"min_eigenvalue", hessian.min_eigenvalue}};
  }

  if (sweep) {
    std::ostringstream csv;
    csv << "value,delta_omega,margin,unbounded,pole_omega0,pole_residue\n";
    std::optional<double> flip_at;
    bool prev_unbounded = false;
    for (std::size_t i = 0; i < sweep->count; ++i) {
      const double value =
          sweep->lo + (sweep->hi - sweep->lo) * static_cast<double>(i) /
                          static_cast<double>(sweep->count - 1);
      const SweepPoint point = sweep_point(config, *sweep, value);
      csv << format_g17(value) << ',' << format_g17(point.report.delta_omega) << ','
          << format_g17(point.report.margin) << ',' << (point.report.unbounded ? '1' : '0') << ',';
      if (point.report.pole)
        csv << format_g17(point.report.pole->omega0) << ','
            << format_g17(point.report.pole->residue);
      else
        csv << "nan,nan";
      csv << '\n';
      if (i > 0 && point.report.unbounded != prev_unbounded && !flip_at) flip_at = value;
      prev_unbounded = point.report.unbounded;
    }
    artifacts.sweep_csv = out_dir / "sweep.csv";
    atomic_write_file(*artifacts.sweep_csv, csv.str());
    txt << "sweep.parameter: " << sweep->parameter << "\n";
    txt << "sweep.points: " << sweep->count << "\n";
    if (flip_at) txt << "sweep.flip_at: " << format_g17(*flip_at) << "\n";
    js["sweep"] = {{"parameter", sweep->parameter}, {"points", sweep->count}};
    if (flip_at) js["sweep"]["flip_at"] = *flip_at;
  }

  artifacts.report_txt = out_dir / "report.txt";
  atomic_write_file(artifacts.report_txt, txt.str());
  artifacts.report_json = out_dir / "report.json";
  atomic_write_file(artifacts.report_json, js.dump(2) + "\n");
  return artifacts;
}

OracleCompareArtifacts run_oracle_compare(const RunConfig& config, const fs::path& out_dir) {
  fs::create_directories(out_dir);

  DiscreteBath bath;
  if (config.bath.is_discrete()) {
    bath = config.bath.bath();
  } else if (config.discretization_modes) {
    bath = discretize(config.bath, *config.discretization_modes, config.discretization_omega_max);
  } else {
    throw ConfigError("oracle-compare: needs a discrete bath or a discretization block");
  }

  const double h = config.step;
  const std::vector<double> steps = {4.0 * h, 2.0 * h, h};
  for (double step : steps) {
    const double ratio = config.horizon / step;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio))
      throw ConfigError("oracle-compare: horizon must be an integral number of all compared steps");
  }

  OracleCompareArtifacts artifacts;
  artifacts.steps = steps;
  const SpectralDensity density = SpectralDensity::discrete(bath);
  for (double step : steps) {
    BathKernels kernels(density, config.temperature);
    PropagatorTrajectory numeric = solve_u(kernels, config.omega_sys, config.horizon, step);
    PropagatorTrajectory exact = (bath.empty())
                                     ? numeric
                                     : oracle::exact_u(bath, config.omega_sys, numeric.grid);
    double max_err = 0.0;
    if (bath.empty()) {
      // decoupled limit: compare against free evolution directly
      for (std::size_t n = 0; n < numeric.u.size(); ++n) {
        const std::complex<double> free =
            std::polar(1.0, -config.omega_sys * numeric.grid.time(n));
        max_err = std::max(max_err, std::abs(numeric.u[n] - free));
      }
    } else {
      for (std::size_t n = 0; n < numeric.u.size(); ++n)
        max_err = std::max(max_err, std::abs(numeric.u[n] - exact.u[n]));
    }
    artifacts.max_errors.push_back(max_err);
  }

  for (std::size_t i = 0; i + 1 < artifacts.max_errors.size(); ++i) {
    const bool floor = artifacts.max_errors[i] < 1e-12;  // machine-precision regime
    if (!floor && artifacts.max_errors[i + 1] > artifacts.max_errors[i])
      throw NumericError("oracle-compare: error table is not monotone decreasing in h");
  }

  std::ostringstream csv;
  csv << "step,max_error,ratio_to_previous\n";
  for (std::size_t i = 0; i < steps.size(); ++i) {
    csv << format_g17(steps[i]) << ',' << format_g17(artifacts.max_errors[i]) << ',';
    if (i == 0)
      csv << "nan";
    else
      csv << format_g17(artifacts.max_errors[i - 1] / artifacts.max_errors[i]);
    csv << '\n';
  }
  artifacts.table_csv = out_dir / "oracle_compare.csv";
  atomic_write_file(artifacts.table_csv, csv.str());

  std::ostringstream txt;
  txt << "command: oracle-compare\n";
  txt << "bath_modes: " << bath.size() << "\n";
  for (std::size_t i = 0; i < steps.size(); ++i)
    txt << "max_error[h=" << format_g17(steps[i]) << "]: " << format_g17(artifacts.max_errors[i])
        << "\n";
  artifacts.report_txt = out_dir / "report.txt";
  atomic_write_file(artifacts.report_txt, txt.str());
  return artifacts;
}

}  // namespace nmosc
