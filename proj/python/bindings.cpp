#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "axygate/io.hpp"

namespace py = pybind11;
using namespace axygate;

namespace {

/// Fidelity between the brute-force evolution and the closed-form prediction
/// for one schedule, starting from |++> x |n1 n2>.
double oracle_fidelity(const PulseSchedule& schedule,
                       const std::array<double, 2>& mode_freqs,
                       const CouplingMatrix& couplings, int cutoff, int n1,
                       int n2, bool resolved) {
  Eigen::Vector4cd amps;
  amps << 0.5, 0.5, 0.5, 0.5;
  FockConfig config;
  config.cutoff_per_mode = cutoff;
  config.resolved_pulses = resolved;
  const FockState evolved = brute_force_propagator(
      schedule, mode_freqs, couplings, config,
      fock_initial(cutoff, amps, n1, n2));
  const FockState predicted =
      analytic_prediction(schedule, mode_freqs, couplings, cutoff, amps, n1, n2);
  return state_fidelity(evolved, predicted);
}

}  // namespace

PYBIND11_MODULE(_axygate, m) {
  m.doc() = "AXY conditional-phase gate designer and simulator";
  m.attr("__version__") = AXYGATE_VERSION;

  py::register_exception<InvalidParameter>(m, "InvalidParameter",
                                           PyExc_ValueError);
  py::register_exception<ScheduleInfeasible>(m, "ScheduleInfeasible",
                                             PyExc_RuntimeError);
  py::register_exception<TruncationError>(m, "TruncationError",
                                          PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DegenerateFit>(m, "DegenerateFit", PyExc_RuntimeError);
  py::register_exception<UnsupportedPath>(m, "UnsupportedPath",
                                          PyExc_RuntimeError);

  py::class_<IonCrystal>(m, "IonCrystal")
      .def_readonly("ion_mass", &IonCrystal::ion_mass)
      .def_readonly("axial_com_freq", &IonCrystal::axial_com_freq)
      .def_readonly("mode_freqs", &IonCrystal::mode_freqs)
      .def_readonly("mode_vectors", &IonCrystal::mode_vectors)
      .def_readonly("zero_point_lengths", &IonCrystal::zero_point_lengths);

  py::class_<QubitParams>(m, "QubitParams")
      .def_readonly("freq_gradient", &QubitParams::freq_gradient)
      .def_readonly("rabi_freq", &QubitParams::rabi_freq);

  py::class_<CouplingMatrix>(m, "CouplingMatrix")
      .def_readonly("delta", &CouplingMatrix::delta);

  py::class_<AxyParams>(m, "AxyParams")
      .def(py::init<>())
      .def_readwrite("tau", &AxyParams::tau)
      .def_readwrite("tau_a", &AxyParams::tau_a)
      .def_readwrite("tau_b", &AxyParams::tau_b)
      .def_readwrite("m", &AxyParams::m)
      .def_readwrite("r", &AxyParams::r);

  py::class_<Pulse>(m, "Pulse")
      .def_readonly("center", &Pulse::center)
      .def_readonly("duration", &Pulse::duration)
      .def_readonly("phase", &Pulse::phase)
      .def_readonly("angle", &Pulse::angle)
      .def_readonly("channel", &Pulse::channel);

  py::class_<PulseSchedule>(m, "PulseSchedule")
      .def_readonly("pulses", &PulseSchedule::pulses)
      .def_readonly("total_time", &PulseSchedule::total_time)
      .def("flip_times", &PulseSchedule::flip_times);

  py::class_<GateSystem>(m, "GateSystem")
      .def_readonly("crystal", &GateSystem::crystal)
      .def_readonly("qubits", &GateSystem::qubits)
      .def_readonly("couplings", &GateSystem::couplings);

  py::class_<DesignSpec>(m, "DesignSpec")
      .def_readwrite("target_phi", &DesignSpec::target_phi)
      .def_readwrite("m", &DesignSpec::m)
      .def_readwrite("r_min", &DesignSpec::r_min)
      .def_readwrite("r_max", &DesignSpec::r_max)
      .def_readwrite("tolerance_alpha", &DesignSpec::tolerance_alpha)
      .def_readwrite("tolerance_phi", &DesignSpec::tolerance_phi)
      .def_readwrite("grid_points", &DesignSpec::grid_points);

  py::class_<GateSolution>(m, "GateSolution")
      .def_readonly("params", &GateSolution::params)
      .def_readonly("residual_alpha", &GateSolution::residual_alpha)
      .def_readonly("phi_achieved", &GateSolution::phi_achieved)
      .def_readonly("gate_time", &GateSolution::gate_time)
      .def_readonly("diagnostics", &GateSolution::diagnostics);

  py::class_<ErrorModel>(m, "ErrorModel")
      .def(py::init<>())
      .def_readwrite("nbar", &ErrorModel::nbar)
      .def_readwrite("trap_freq_offset", &ErrorModel::trap_freq_offset)
      .def_readwrite("area_error", &ErrorModel::area_error)
      .def_readwrite("timing_error", &ErrorModel::timing_error);

  py::class_<FockConfig>(m, "FockConfig")
      .def(py::init<>())
      .def_readwrite("cutoff_per_mode", &FockConfig::cutoff_per_mode)
      .def_readwrite("integrator_step", &FockConfig::integrator_step)
      .def_readwrite("resolved_pulses", &FockConfig::resolved_pulses);

  py::enum_<SimPath>(m, "SimPath")
      .value("analytic", SimPath::analytic)
      .value("oracle", SimPath::oracle);

  py::class_<FringeScan>(m, "FringeScan")
      .def(py::init<>())
      .def_readwrite("phases", &FringeScan::phases)
      .def_readwrite("populations", &FringeScan::populations)
      .def_readwrite("control_state", &FringeScan::control_state)
      .def_readwrite("shots", &FringeScan::shots);

  py::class_<BasisCounts>(m, "BasisCounts")
      .def_readonly("basis", &BasisCounts::basis)
      .def_readonly("counts", &BasisCounts::counts)
      .def_readonly("shots", &BasisCounts::shots)
      .def_readonly("probs", &BasisCounts::probs)
      .def_readonly("warning", &BasisCounts::warning);

  py::class_<FringeFit>(m, "FringeFit")
      .def_readonly("contrast", &FringeFit::contrast)
      .def_readonly("phase", &FringeFit::phase)
      .def_readonly("offset", &FringeFit::offset)
      .def_readonly("covariance", &FringeFit::covariance)
      .def_readonly("residual_rms", &FringeFit::residual_rms);

  py::class_<Expectation>(m, "Expectation")
      .def_readonly("value", &Expectation::value)
      .def_readonly("sigma", &Expectation::sigma);

  py::class_<EntanglementReport>(m, "EntanglementReport")
      .def_readonly("xx", &EntanglementReport::xx)
      .def_readonly("yy", &EntanglementReport::yy)
      .def_readonly("zz", &EntanglementReport::zz)
      .def_readonly("fidelity", &EntanglementReport::fidelity)
      .def_readonly("neg_bound", &EntanglementReport::neg_bound);

  py::class_<SweepRow>(m, "SweepRow")
      .def_readonly("axis", &SweepRow::axis)
      .def_readonly("value", &SweepRow::value)
      .def_readonly("control_state", &SweepRow::control_state)
      .def_readonly("contrast", &SweepRow::contrast)
      .def_readonly("phase_rad", &SweepRow::phase_rad)
      .def_readonly("normalized_contrast", &SweepRow::normalized_contrast)
      .def_readonly("normalized_phase", &SweepRow::normalized_phase);

  py::class_<RunConfig>(m, "RunConfig")
      .def_readonly("target_phi", &RunConfig::target_phi)
      .def_readonly("shots", &RunConfig::shots)
      .def_readonly("seed", &RunConfig::seed)
      .def_readonly("hash_hex", &RunConfig::hash_hex);

  m.def("make_crystal", &make_crystal, py::arg("nu1"),
        py::arg("ion_mass") = constants::yb171_mass);
  m.def("make_qubits", &make_qubits, py::arg("rabi"),
        py::arg("zeeman_sensitivity"), py::arg("field_gradient"));
  m.def("coupling_constants", &coupling_constants);
  m.def("commensurate_tau", &commensurate_tau);
  m.def("build_axy", &build_axy, py::arg("params"), py::arg("qubits"),
        py::arg("channels") = std::vector<int>{0, 1});
  m.def("modulation_function", &modulation_function);
  m.def("apply_area_error", &apply_area_error);
  m.def("apply_timing_error", &apply_timing_error);
  m.def("displacement_alpha", &displacement_alpha);
  m.def(
      "accumulated_phase",
      [](const PulseSchedule& s, const CouplingMatrix& c,
         const std::array<double, 2>& nus, double t) {
        const GatePhase p = accumulated_phase(s, c, nus, t);
        return std::make_pair(p.phi, p.phi_observed);
      },
      py::arg("schedule"), py::arg("couplings"), py::arg("mode_freqs"),
      py::arg("t"));
  m.def("thermal_weights", &thermal_weights, py::arg("nbar"), py::arg("cutoff"),
        py::arg("tail_budget") = 1e-6);
  m.def("optimize_block", &optimize_block,
        py::call_guard<py::gil_scoped_release>());
  m.def("solution_schedule", &solution_schedule);
  m.def("oracle_fidelity", &oracle_fidelity, py::arg("schedule"),
        py::arg("mode_freqs"), py::arg("couplings"), py::arg("cutoff") = 20,
        py::arg("n1") = 0, py::arg("n2") = 0, py::arg("resolved") = false,
        py::call_guard<py::gil_scoped_release>());
  m.def("simulate_ramsey", &simulate_ramsey, py::arg("solution"),
        py::arg("system"), py::arg("control_state"), py::arg("error"),
        py::arg("phases"), py::arg("shots") = 0,
        py::arg("path") = SimPath::analytic, py::arg("seed") = 0,
        py::arg("fock") = FockConfig{},
        py::call_guard<py::gil_scoped_release>());
  m.def("simulate_bell", &simulate_bell, py::arg("solution"), py::arg("system"),
        py::arg("error"), py::arg("shots") = 0,
        py::arg("path") = SimPath::analytic, py::arg("seed") = 0,
        py::arg("fock") = FockConfig{},
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "sweep",
      [](const GateSolution& sol, const GateSystem& sys, const ErrorModel& err,
         const std::string& axis, const std::vector<double>& values, int shots,
         SimPath path, std::uint64_t seed, const FockConfig& fock) {
        return sweep(sol, sys, err, sweep_axis_from_name(axis), values, shots,
                     path, seed, fock);
      },
      py::arg("solution"), py::arg("system"), py::arg("error"), py::arg("axis"),
      py::arg("values"), py::arg("shots") = 0,
      py::arg("path") = SimPath::analytic, py::arg("seed") = 0,
      py::arg("fock") = FockConfig{}, py::call_guard<py::gil_scoped_release>());
  m.def("fit_fringe", &fit_fringe);
  m.def("expectation_value", &expectation_value);
  m.def("bell_fidelity",
        [](double xx, double yy, double zz) { return bell_fidelity(xx, yy, zz); });
  m.def("negativity_bound", &negativity_bound);
  m.def("entanglement_report", &entanglement_report);
  m.def("parse_config", &parse_config);
  m.def("make_system", &make_system);
  m.def("make_design_spec", &make_design_spec);
  m.def("solution_to_json",
        [](const GateSolution& sol, double target, const PulseSchedule& sched) {
          return solution_to_json(sol, target, sched, OutputMeta{});
        });
  m.def("solution_from_json", &solution_from_json);
}
