#include "axygate/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "axygate/analysis.hpp"

namespace axygate {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

int branch_s1(int b) { return b < 2 ? 1 : -1; }
int branch_s2(int b) { return b % 2 == 0 ? 1 : -1; }

Eigen::Matrix4cd kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Eigen::Matrix4cd out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    }
  }
  return out;
}

Eigen::Vector4cd kron2v(const Eigen::Vector2cd& a, const Eigen::Vector2cd& b) {
  Eigen::Vector4cd out;
  out << a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1);
  return out;
}

std::mt19937_64 point_rng(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(seed * 0x9e3779b97f4a7c15ULL + index + 1);
}

struct EffectiveSystem {
  std::array<double, 2> mode_freqs{};
  CouplingMatrix couplings;
  PulseSchedule schedule;
};

EffectiveSystem make_effective(const GateSolution& solution,
                               const GateSystem& system,
                               const ErrorModel& error) {
  EffectiveSystem eff;
  if (error.trap_freq_offset != 0.0) {
    const IonCrystal actual =
        make_crystal(system.crystal.axial_com_freq * (1.0 + error.trap_freq_offset),
                     system.crystal.ion_mass);
    eff.mode_freqs = actual.mode_freqs;
    eff.couplings = coupling_constants(actual, system.qubits);
  } else {
    eff.mode_freqs = system.crystal.mode_freqs;
    eff.couplings = system.couplings;
  }
  eff.schedule = solution_schedule(solution, system.qubits);
  if (error.area_error != 0.0) {
    eff.schedule = apply_area_error(eff.schedule, error.area_error);
  }
  if (error.timing_error != 0.0) {
    eff.schedule = apply_timing_error(eff.schedule, error.timing_error);
  }
  return eff;
}

/// Reduced two-qubit density matrix after the gate schedule, motion traced
/// out over the thermal state.
Eigen::Matrix4cd gate_spin_density(const EffectiveSystem& eff,
                                   const ErrorModel& error,
                                   const Eigen::Vector4cd& spin_amps,
                                   SimPath path, FockConfig fock) {
  if (path == SimPath::analytic) {
    if (error.has_pulse_errors()) {
      throw UnsupportedPath(
          "analytic path cannot represent pulse area/timing errors; use the "
          "oracle path");
    }
    const double t = eff.schedule.total_time;
    std::array<std::array<std::complex<double>, 2>, 2> alpha;
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        alpha[j][k] = displacement_alpha(eff.schedule, j, eff.couplings.delta(j, k),
                                         eff.mode_freqs[k], t);
      }
    }
    const double phi =
        accumulated_phase(eff.schedule, eff.couplings, eff.mode_freqs, t).phi;

    Eigen::Matrix4cd rho;
    for (int b = 0; b < 4; ++b) {
      for (int bp = 0; bp < 4; ++bp) {
        const int s1 = branch_s1(b), s2 = branch_s2(b);
        const int p1 = branch_s1(bp), p2 = branch_s2(bp);
        std::complex<double> val = spin_amps(b) * std::conj(spin_amps(bp)) *
                                   std::exp(kI * phi * double(s1 * s2 - p1 * p2));
        for (int k = 0; k < 2; ++k) {
          const std::complex<double> g =
              double(s1) * alpha[0][k] + double(s2) * alpha[1][k];
          const std::complex<double> gp =
              double(p1) * alpha[0][k] + double(p2) * alpha[1][k];
          val *= std::exp(-0.5 * std::norm(g - gp) * (2.0 * error.nbar[k] + 1.0));
          val *= std::exp(-kI * std::imag(gp * std::conj(g)));
        }
        rho(b, bp) = val;
      }
    }
    std::array<Eigen::Matrix2cd, 2> p_chan{Eigen::Matrix2cd::Identity(),
                                           Eigen::Matrix2cd::Identity()};
    for (const auto& p : eff.schedule.pulses) {
      p_chan[p.channel] = qubit_rotation(p.angle, p.phase) * p_chan[p.channel];
    }
    const Eigen::Matrix4cd p4 = kron2(p_chan[0], p_chan[1]);
    return p4 * rho * p4.adjoint();
  }

  // oracle path
  const bool thermal = error.nbar[0] > 0.0 || error.nbar[1] > 0.0;
  if (!thermal) {
    const FockState out = brute_force_propagator(
        eff.schedule, eff.mode_freqs, eff.couplings, fock,
        fock_initial(fock.cutoff_per_mode, spin_amps, 0, 0));
    return spin_density(out);
  }
  if (!fock.resolved_pulses && error.area_error == 0.0) {
    const BranchPropagator prop =
        branch_propagators(eff.schedule, eff.mode_freqs, eff.couplings, fock);
    return thermal_spin_density(prop, spin_amps, error.nbar);
  }
  // thermal average with pulse errors: explicit sum over initial Fock states
  const int cutoff = fock.cutoff_per_mode;
  const auto w1 = thermal_weights(error.nbar[0], cutoff);
  const auto w2 = thermal_weights(error.nbar[1], cutoff);
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  for (int n1 = 0; n1 < cutoff; ++n1) {
    for (int n2 = 0; n2 < cutoff; ++n2) {
      const double w = w1[n1] * w2[n2];
      if (w < 1e-9) continue;
      const FockState out = brute_force_propagator(
          eff.schedule, eff.mode_freqs, eff.couplings, fock,
          fock_initial(cutoff, spin_amps, n1, n2));
      rho += w * spin_density(out);
    }
  }
  return rho / rho.trace().real();
}

std::array<double, 4> joint_probs(const Eigen::Matrix4cd& rho) {
  std::array<double, 4> p{};
  double sum = 0.0;
  for (int b = 0; b < 4; ++b) {
    p[b] = std::max(0.0, rho(b, b).real());
    sum += p[b];
  }
  for (auto& v : p) v /= sum;
  return p;
}

}  // namespace

void ErrorModel::validate() const {
  if (nbar[0] < 0.0 || nbar[1] < 0.0) {
    throw InvalidParameter("ErrorModel: nbar must be >= 0");
  }
  if (!(trap_freq_offset > -1.0)) {
    throw InvalidParameter("ErrorModel: trap_freq_offset must exceed -1");
  }
  if (!(area_error > -1.0) || !(timing_error > -1.0)) {
    throw InvalidParameter("ErrorModel: pulse errors must exceed -1");
  }
  for (const auto& c : readout_confusion) {
    for (int i = 0; i < 2; ++i) {
      if (c(i, 0) < 0.0 || c(i, 1) < 0.0 ||
          std::abs(c(i, 0) + c(i, 1) - 1.0) > 1e-9) {
        throw InvalidParameter("ErrorModel: confusion rows must sum to 1");
      }
    }
  }
}

Eigen::Matrix2d confusion_from_fidelities(double dark, double bright) {
  if (dark <= 0.0 || dark > 1.0 || bright <= 0.0 || bright > 1.0) {
    throw InvalidParameter("confusion_from_fidelities: fidelities in (0, 1]");
  }
  Eigen::Matrix2d c;
  c << dark, 1.0 - dark, 1.0 - bright, bright;
  return c;
}

FringeScan simulate_ramsey(const GateSolution& solution, const GateSystem& system,
                           int control_state, const ErrorModel& error,
                           const std::vector<double>& phases, int shots,
                           SimPath path, std::uint64_t seed, FockConfig fock) {
  error.validate();
  if (control_state != 0 && control_state != 1) {
    throw InvalidParameter("simulate_ramsey: control_state must be 0 or 1");
  }
  const EffectiveSystem eff = make_effective(solution, system, error);

  Eigen::Vector2cd control = Eigen::Vector2cd::Zero();
  control(control_state) = 1.0;
  const Eigen::Vector2cd target =
      qubit_rotation(constants::pi / 2.0, 0.0) * Eigen::Vector2cd(1.0, 0.0);
  const Eigen::Matrix4cd rho =
      gate_spin_density(eff, error, kron2v(control, target), path, fock);

  FringeScan scan;
  scan.phases = phases;
  scan.control_state = control_state;
  scan.shots = shots;
  scan.populations.reserve(phases.size());
  const Eigen::Matrix2d& conf = error.readout_confusion[1];
  for (std::size_t i = 0; i < phases.size(); ++i) {
    const Eigen::Matrix4cd analyze = kron2(
        Eigen::Matrix2cd::Identity(), qubit_rotation(constants::pi / 2.0, phases[i]));
    const auto p = joint_probs(analyze * rho * analyze.adjoint());
    const double p1 = p[1] + p[3];  // target excited
    double observed = (1.0 - p1) * conf(0, 1) + p1 * conf(1, 1);
    if (shots > 0) {
      auto rng = point_rng(seed, i);
      std::binomial_distribution<int> dist(shots, observed);
      observed = double(dist(rng)) / shots;
    }
    scan.populations.push_back(observed);
  }
  return scan;
}

std::array<BasisCounts, 3> simulate_bell(const GateSolution& solution,
                                         const GateSystem& system,
                                         const ErrorModel& error, int shots,
                                         SimPath path, std::uint64_t seed,
                                         FockConfig fock) {
  error.validate();
  std::string warning;
  if (std::abs(solution.phi_achieved - constants::pi / 4.0) > 1e-3) {
    std::ostringstream w;
    w << "solution phase " << solution.phi_achieved
      << " differs from pi/4; Bell protocol assumes a pi/4 gate";
    warning = w.str();
  }
  const EffectiveSystem eff = make_effective(solution, system, error);

  const Eigen::Vector2cd zero(1.0, 0.0);
  const Eigen::Vector2cd control =
      qubit_rotation(constants::pi / 2.0, constants::pi / 2.0) * zero;
  const Eigen::Vector2cd target = qubit_rotation(constants::pi / 2.0, 0.0) * zero;
  Eigen::Matrix4cd rho =
      gate_spin_density(eff, error, kron2v(control, target), path, fock);

  // closing pulse on the target completes the CNOT framing
  const Eigen::Matrix4cd close = kron2(
      Eigen::Matrix2cd::Identity(),
      qubit_rotation(constants::pi / 2.0, 3.0 * constants::pi / 2.0));
  rho = close * rho * close.adjoint();

  const Eigen::Matrix4d k4 =
      kron2(error.readout_confusion[0].cast<std::complex<double>>(),
            error.readout_confusion[1].cast<std::complex<double>>())
          .real();

  const std::array<char, 3> names{'x', 'y', 'z'};
  const std::array<double, 2> basis_phase{constants::pi / 4.0,
                                          3.0 * constants::pi / 4.0};
  std::array<BasisCounts, 3> out;
  for (int s = 0; s < 3; ++s) {
    Eigen::Matrix4cd rho_m = rho;
    if (s < 2) {
      const Eigen::Matrix2cd r = qubit_rotation(constants::pi / 2.0, basis_phase[s]);
      const Eigen::Matrix4cd m = kron2(r, r);
      rho_m = m * rho * m.adjoint();
    }
    auto p = joint_probs(rho_m);
    std::array<double, 4> observed{};
    for (int j = 0; j < 4; ++j) {
      for (int i = 0; i < 4; ++i) observed[j] += p[i] * k4(i, j);
    }
    BasisCounts bc;
    bc.basis = names[s];
    bc.shots = shots;
    bc.probs = observed;
    bc.warning = warning;
    if (shots > 0) {
      auto rng = point_rng(seed, std::uint64_t(s) + 1000);
      std::int64_t remaining = shots;
      double mass = 1.0;
      for (int j = 0; j < 3; ++j) {
        const double pj = mass > 0.0 ? std::clamp(observed[j] / mass, 0.0, 1.0) : 0.0;
        std::binomial_distribution<std::int64_t> dist(remaining, pj);
        bc.counts[j] = dist(rng);
        remaining -= bc.counts[j];
        mass -= observed[j];
      }
      bc.counts[3] = remaining;
    }
    out[s] = bc;
  }
  return out;
}

SweepAxis sweep_axis_from_name(const std::string& name) {
  if (name == "nbar") return SweepAxis::nbar;
  if (name == "trap_freq_offset") return SweepAxis::trap_freq_offset;
  if (name == "area_error") return SweepAxis::area_error;
  if (name == "timing_error") return SweepAxis::timing_error;
  throw InvalidParameter("unknown sweep axis: " + name);
}

std::string sweep_axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::nbar: return "nbar";
    case SweepAxis::trap_freq_offset: return "trap_freq_offset";
    case SweepAxis::area_error: return "area_error";
    case SweepAxis::timing_error: return "timing_error";
  }
  throw InvalidParameter("unknown sweep axis");
}

std::vector<SweepRow> sweep(const GateSolution& solution, const GateSystem& system,
                            const ErrorModel& base_error, SweepAxis axis,
                            const std::vector<double>& values, int shots,
                            SimPath path, std::uint64_t seed, FockConfig fock) {
  auto with_value = [&](double v) {
    ErrorModel e = base_error;
    switch (axis) {
      case SweepAxis::nbar: e.nbar = {v, v}; break;
      case SweepAxis::trap_freq_offset: e.trap_freq_offset = v; break;
      case SweepAxis::area_error: e.area_error = v; break;
      case SweepAxis::timing_error: e.timing_error = v; break;
    }
    return e;
  };

  std::vector<double> phases;
  for (int i = 0; i < 12; ++i) phases.push_back(constants::two_pi * i / 12.0);

  auto measure = [&](const ErrorModel& e, int control, std::uint64_t pt_seed) {
    return fit_fringe(simulate_ramsey(solution, system, control, e, phases, shots,
                                      path, pt_seed, fock));
  };

  std::array<FringeFit, 2> ref;
  for (int c = 0; c < 2; ++c) ref[c] = measure(with_value(0.0), c, seed);

  std::vector<SweepRow> rows;
  const std::string axis_name = sweep_axis_name(axis);
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (int c = 0; c < 2; ++c) {
      const FringeFit fit =
          measure(with_value(values[i]), c, seed + 2 * (i + 1) + c);
      SweepRow row;
      row.axis = axis_name;
      row.value = values[i];
      row.control_state = c;
      row.contrast = fit.contrast;
      row.contrast_err = std::sqrt(std::max(0.0, fit.covariance(1, 1)));
      row.phase_rad = fit.phase;
      row.phase_err = std::sqrt(std::max(0.0, fit.covariance(2, 2)));
      row.normalized_contrast =
          ref[c].contrast > 0.0 ? fit.contrast / ref[c].contrast : 0.0;
      row.normalized_phase =
          ref[c].phase != 0.0 ? fit.phase / ref[c].phase : 0.0;
      rows.push_back(row);
    }
  }
  return rows;
}

std::string solution_report(const GateSolution& solution,
                            const GateSystem& system) {
  std::ostringstream out;
  out << "gate time " << solution.gate_time * 1e3 << " ms, phase "
      << solution.phi_achieved << " rad\n";
  out << "axis,value,control_state,contrast,phase_rad,normalized_contrast,"
         "normalized_phase\n";
  const ErrorModel base;
  auto emit = [&](SweepAxis axis, const std::vector<double>& values) {
    for (const auto& row :
         sweep(solution, system, base, axis, values, 0, SimPath::analytic)) {
      out << row.axis << ',' << row.value << ',' << row.control_state << ','
          << row.contrast << ',' << row.phase_rad << ','
          << row.normalized_contrast << ',' << row.normalized_phase << '\n';
    }
  };
  emit(SweepAxis::nbar, {0.0, 1.0, 2.0, 5.0, 10.0, 20.0});
  emit(SweepAxis::trap_freq_offset, {-0.1, -0.05, -0.02, 0.0, 0.02, 0.05, 0.1});
  return out.str();
}

}  // namespace axygate
