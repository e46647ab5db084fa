#include "axygate/physics.hpp"

#include <cmath>

namespace axygate {

std::pair<std::array<double, 2>, Eigen::Matrix2d> axial_modes(double nu1) {
  if (!(nu1 > 0.0)) {
    throw InvalidParameter("axial_modes: COM frequency must be positive");
  }
  // Hessian of the axial potential in mass-scaled coordinates, in units of
  // nu1^2. At the equilibrium spacing the Coulomb curvature equals the trap
  // curvature, giving diagonal 2 and off-diagonal -1.
  Eigen::Matrix2d hessian;
  hessian << 2.0, -1.0,
            -1.0, 2.0;
  hessian *= nu1 * nu1;

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(hessian);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("axial_modes: eigensolver failed");
  }
  std::array<double, 2> freqs{std::sqrt(solver.eigenvalues()(0)),
                              std::sqrt(solver.eigenvalues()(1))};
  Eigen::Matrix2d vectors = solver.eigenvectors();
  // Fix the sign convention: first ion's component positive in every mode.
  for (int k = 0; k < 2; ++k) {
    if (vectors(0, k) < 0.0) vectors.col(k) *= -1.0;
  }
  return {freqs, vectors};
}

IonCrystal make_crystal(double nu1, double ion_mass) {
  if (!(ion_mass > 0.0)) {
    throw InvalidParameter("make_crystal: ion mass must be positive");
  }
  IonCrystal crystal;
  crystal.ion_mass = ion_mass;
  crystal.axial_com_freq = nu1;
  auto [freqs, vectors] = axial_modes(nu1);
  crystal.mode_freqs = freqs;
  crystal.mode_vectors = vectors;
  for (int k = 0; k < 2; ++k) {
    crystal.zero_point_lengths[k] =
        std::sqrt(constants::hbar / (2.0 * ion_mass * freqs[k]));
  }
  return crystal;
}

CouplingMatrix coupling_constants(const IonCrystal& crystal, const QubitParams& qubits) {
  for (int k = 0; k < 2; ++k) {
    if (!(crystal.mode_freqs[k] > 0.0) || !(crystal.zero_point_lengths[k] > 0.0)) {
      throw InvalidParameter("coupling_constants: invalid crystal");
    }
  }
  for (int j = 0; j < 2; ++j) {
    if (!std::isfinite(qubits.freq_gradient[j])) {
      throw InvalidParameter("coupling_constants: non-finite frequency gradient");
    }
  }
  CouplingMatrix out;
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      out.delta(j, k) = 0.5 * qubits.freq_gradient[j] * crystal.mode_vectors(j, k) *
                        crystal.zero_point_lengths[k];
    }
  }
  return out;
}

QubitParams make_qubits(double rabi, double zeeman_sensitivity, double field_gradient) {
  if (!(rabi > 0.0)) {
    throw InvalidParameter("make_qubits: Rabi frequency must be positive");
  }
  QubitParams q;
  for (int j = 0; j < 2; ++j) {
    q.rabi_freq[j] = rabi;
    q.freq_gradient[j] = zeeman_sensitivity * field_gradient;
  }
  return q;
}

}  // namespace axygate
