#ifndef AXYGATE_FOCK_HPP
#define AXYGATE_FOCK_HPP

#include <complex>

#include <Eigen/Dense>

#include "axygate/dynamics.hpp"

namespace axygate {

struct FockConfig {
  int cutoff_per_mode = 20;
  double integrator_step = 0.0;  // s; 0 picks min(2 pi / nu_2, t_p) / 50
  std::array<double, 2> thermal_nbar{0.0, 0.0};
  bool resolved_pulses = false;  // integrate carrier drive over pulse widths
  double leakage_tolerance = 1e-6;
};

/// Joint state of two qubits and two truncated modes. Spin branches are
/// indexed b = 2 i1 + i2 with qubit basis |q1 q2>, q = 0 <-> sigma_z = +1;
/// psi[b](n1, n2) are the motional amplitudes.
struct FockState {
  std::array<Eigen::MatrixXcd, 4> psi;

  double norm() const;
  std::complex<double> overlap(const FockState& other) const;
};

/// R(theta, phi) = exp(-i (theta/2) (cos(phi) sigma_x - sin(phi) sigma_y)).
Eigen::Matrix2cd qubit_rotation(double angle, double phase);

/// Product initial state: given spin amplitudes and Fock numbers per mode.
FockState fock_initial(int cutoff, const Eigen::Vector4cd& spin_amps, int n1,
                       int n2);

/// Brute-force interaction-picture evolution of the bare spin-motion coupling
/// with pulses applied as qubit rotations: instantaneous kicks at pulse
/// centers by default, or carrier driving resolved over the pulse duration
/// (Strang splitting) when config.resolved_pulses is set. Throws
/// TruncationError if the top Fock level of either mode exceeds
/// config.leakage_tolerance.
FockState brute_force_propagator(const PulseSchedule& schedule,
                                 const std::array<double, 2>& mode_freqs,
                                 const CouplingMatrix& couplings,
                                 const FockConfig& config,
                                 const FockState& initial);

/// Closed-form prediction for the same evolution: per-branch displacement by
/// alpha_jk(T), conditional phase Phi, then the time-ordered product of the
/// pulse rotations.
FockState analytic_prediction(const PulseSchedule& schedule,
                              const std::array<double, 2>& mode_freqs,
                              const CouplingMatrix& couplings, int cutoff,
                              const Eigen::Vector4cd& spin_amps, int n1,
                              int n2);

/// |<a|b>|^2 with both states normalized.
double state_fidelity(const FockState& a, const FockState& b);

/// Reduced 4x4 spin density matrix, motion traced out.
Eigen::Matrix4cd spin_density(const FockState& state);

/// Propagator decomposition valid for schedules whose pulses are all exact
/// instantaneous pi rotations: kicks then permute spin branches, so the full
/// propagator restricted to initial branch b is
///   |final_branch[b]><b| (x) spin_phase[b] motion[b][0] (x) motion[b][1].
/// Lets thermal motional averages be taken by traces instead of per-Fock-state
/// runs.
struct BranchPropagator {
  std::array<int, 4> final_branch{};
  std::array<std::complex<double>, 4> spin_phase{};
  std::array<std::array<Eigen::MatrixXcd, 2>, 4> motion;
};

BranchPropagator branch_propagators(const PulseSchedule& schedule,
                                    const std::array<double, 2>& mode_freqs,
                                    const CouplingMatrix& couplings,
                                    const FockConfig& config);

/// Spin density matrix after evolving spin amplitudes against thermal motion,
/// using branch_propagators (exact-pi schedules only).
Eigen::Matrix4cd thermal_spin_density(const BranchPropagator& prop,
                                      const Eigen::Vector4cd& spin_amps,
                                      const std::array<double, 2>& nbar,
                                      double tail_budget = 1e-6);

}  // namespace axygate

#endif
