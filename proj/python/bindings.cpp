#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nmosc/bath_kernels.hpp"
#include "nmosc/bound_state.hpp"
#include "nmosc/coefficients.hpp"
#include "nmosc/errors.hpp"
#include "nmosc/oracle.hpp"
#include "nmosc/propagator.hpp"
#include "nmosc/spectral_density.hpp"

namespace py = pybind11;
using namespace nmosc;

namespace {

DiscreteBath bath_from_pairs(const std::vector<std::pair<double, double>>& pairs) {
  std::vector<BathMode> modes;
  modes.reserve(pairs.size());
  for (const auto& [w, l] : pairs) modes.push_back(BathMode{w, l});
  return DiscreteBath(std::move(modes));
}

std::vector<double> grid_times(const TimeGrid& grid) {
  std::vector<double> t(grid.size());
  for (std::size_t n = 0; n < t.size(); ++n) t[n] = grid.time(n);
  return t;
}

}  // namespace

PYBIND11_MODULE(_nmosc, m) {
  m.doc() = "exact reduced dynamics of an oscillator coupled to a bosonic bath";

  py::register_exception<Error>(m, "NmoscError", PyExc_RuntimeError);

  py::class_<SpectralDensity>(m, "SpectralDensity")
      .def_static("power_law", &SpectralDensity::power_law, py::arg("alpha"), py::arg("s"),
                  py::arg("omega_c"))
      .def_static("band_gap", &SpectralDensity::band_gap, py::arg("base"), py::arg("lo"),
                  py::arg("hi"))
      .def_static("tabulated", &SpectralDensity::tabulated, py::arg("omega"), py::arg("j"))
      .def_static(
          "discrete",
          [](const std::vector<std::pair<double, double>>& modes) {
            return SpectralDensity::discrete(bath_from_pairs(modes));
          },
          py::arg("modes"))
      .def("evaluate", &SpectralDensity::evaluate, py::arg("omega"))
      .def_property_readonly("is_discrete", &SpectralDensity::is_discrete);

  m.def("frequency_shift", &frequency_shift, py::arg("density"));
  m.def(
      "discretize",
      [](const SpectralDensity& j, std::size_t k, double omega_max) {
        const DiscreteBath bath = discretize(j, k, omega_max);
        std::vector<std::pair<double, double>> out;
        for (const auto& mode : bath.modes()) out.emplace_back(mode.omega, mode.lambda);
        return out;
      },
      py::arg("density"), py::arg("k"), py::arg("omega_max"));

  m.def("dissipation_kernel", &dissipation_kernel, py::arg("density"), py::arg("t"));
  m.def("noise_kernel", &noise_kernel, py::arg("density"), py::arg("temperature"), py::arg("t"));

  py::class_<PropagatorTrajectory>(m, "PropagatorTrajectory")
      .def_property_readonly("times", [](const PropagatorTrajectory& t) { return grid_times(t.grid); })
      .def_property_readonly("step", [](const PropagatorTrajectory& t) { return t.grid.step; })
      .def_readonly("u", &PropagatorTrajectory::u)
      .def_readonly("u_dot", &PropagatorTrajectory::u_dot);

  py::class_<LongTimeBehavior>(m, "LongTimeBehavior")
      .def_readonly("plateau_modulus", &LongTimeBehavior::plateau_modulus)
      .def_readonly("rotation_frequency", &LongTimeBehavior::rotation_frequency)
      .def_readonly("is_dissipationless", &LongTimeBehavior::is_dissipationless)
      .def_readonly("modulus_stddev", &LongTimeBehavior::modulus_stddev);

  m.def(
      "solve_u",
      [](const SpectralDensity& j, double temperature, double omega_sys, double horizon,
         double step) {
        BathKernels kernels(j, temperature);
        return solve_u(kernels, omega_sys, horizon, step);
      },
      py::arg("density"), py::arg("temperature"), py::arg("omega_sys"), py::arg("horizon"),
      py::arg("step"));
  m.def("long_time_behavior", &long_time_behavior, py::arg("trajectory"), py::arg("window"));

  py::class_<CoefficientTrajectory>(m, "CoefficientTrajectory")
      .def_readonly("omega_tilde", &CoefficientTrajectory::omega_tilde)
      .def_readonly("gamma", &CoefficientTrajectory::gamma)
      .def_readonly("xi", &CoefficientTrajectory::xi)
      .def_readonly("xi_dot", &CoefficientTrajectory::xi_dot)
      .def_readonly("gamma_n", &CoefficientTrajectory::gamma_n)
      .def_property_readonly("valid", [](const CoefficientTrajectory& c) {
        std::vector<bool> v(c.valid.begin(), c.valid.end());
        return v;
      });

  m.def(
      "compute_coefficients",
      [](const PropagatorTrajectory& traj, const SpectralDensity& j, double temperature) {
        BathKernels kernels(j, temperature);
        XiResult xi = compute_xi(traj, kernels);
        return compute_coefficients(traj, xi);
      },
      py::arg("trajectory"), py::arg("density"), py::arg("temperature"));

  m.def(
      "mean_occupation",
      [](const PropagatorTrajectory& traj, const CoefficientTrajectory& coeffs, double n0) {
        auto occ = mean_occupation(traj, coeffs, n0);
        return py::make_tuple(occ.n_mean, occ.max_deviation);
      },
      py::arg("trajectory"), py::arg("coefficients"), py::arg("n0"));

  py::class_<BoundStatePole>(m, "BoundStatePole")
      .def_readonly("omega0", &BoundStatePole::omega0)
      .def_readonly("residue", &BoundStatePole::residue);

  py::class_<StabilityReport>(m, "StabilityReport")
      .def_readonly("delta_omega", &StabilityReport::delta_omega)
      .def_readonly("margin", &StabilityReport::margin)
      .def_readonly("unbounded", &StabilityReport::unbounded)
      .def_readonly("pole", &StabilityReport::pole)
      .def_readonly("in_gap_pole", &StabilityReport::in_gap_pole)
      .def_readonly("discrete_energy", &StabilityReport::discrete_energy);

  m.def("stability_report", &stability_report, py::arg("density"), py::arg("omega_sys"));
  m.def("negative_pole", &negative_pole, py::arg("density"), py::arg("omega_sys"));
  m.def(
      "discrete_bound_energy",
      [](const std::vector<std::pair<double, double>>& modes, double omega_sys) {
        return discrete_bound_energy(bath_from_pairs(modes), omega_sys);
      },
      py::arg("modes"), py::arg("omega_sys"));

  py::class_<QbmReport>(m, "QbmReport")
      .def_readonly("delta_kappa", &QbmReport::delta_kappa)
      .def_readonly("kappa_renormalized", &QbmReport::kappa_renormalized)
      .def_readonly("unstable", &QbmReport::unstable);

  m.def(
      "qbm_stability",
      [](double kappa, const std::vector<std::tuple<double, double, double>>& modes) {
        std::vector<QbmMode> bath;
        for (const auto& [mass, omega, coupling] : modes)
          bath.push_back(QbmMode{mass, omega, coupling});
        return qbm_stability(kappa, bath);
      },
      py::arg("kappa"), py::arg("modes"));

  auto oracle_mod = m.def_submodule("oracle", "exact-diagonalization ground truth");
  oracle_mod.def(
      "exact_u",
      [](const std::vector<std::pair<double, double>>& modes, double omega_sys, double horizon,
         double step) {
        return oracle::exact_u(bath_from_pairs(modes), omega_sys, make_grid(horizon, step));
      },
      py::arg("modes"), py::arg("omega_sys"), py::arg("horizon"), py::arg("step"));
  oracle_mod.def(
      "bound_state_eigen",
      [](const std::vector<std::pair<double, double>>& modes, double omega_sys) {
        auto r = oracle::bound_state_eigen(bath_from_pairs(modes), omega_sys);
        return py::make_tuple(r.energy, r.system_weight);
      },
      py::arg("modes"), py::arg("omega_sys"));
  oracle_mod.def(
      "ladder_check",
      [](const std::vector<std::pair<double, double>>& modes, double omega_sys, std::size_t n_max) {
        auto report = oracle::ladder_check(bath_from_pairs(modes), omega_sys, n_max);
        py::list sectors;
        for (const auto& s : report.sectors) {
          py::dict d;
          d["excitations"] = s.excitations;
          d["dimension"] = s.dimension;
          d["min_eigenvalue"] = s.min_eigenvalue;
          d["ladder_residual"] = s.ladder_residual;
          d["nearest_eigenvalue_gap"] = s.nearest_eigenvalue_gap;
          sectors.append(d);
        }
        py::dict out;
        out["single_energy"] = report.single_energy;
        out["ladder_confirmed"] = report.ladder_confirmed;
        out["sectors"] = sectors;
        return out;
      },
      py::arg("modes"), py::arg("omega_sys"), py::arg("n_max"));
  oracle_mod.def(
      "qbm_hessian_check",
      [](double kappa, const std::vector<std::tuple<double, double, double>>& modes) {
        std::vector<QbmMode> bath;
        for (const auto& [mass, omega, coupling] : modes)
          bath.push_back(QbmMode{mass, omega, coupling});
        auto check = oracle::qbm_hessian_check(kappa, bath);
        return py::make_tuple(check.schur_complement, check.min_eigenvalue, check.consistent);
      },
      py::arg("kappa"), py::arg("modes"));
}
