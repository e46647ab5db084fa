#ifndef AXYGATE_PHYSICS_HPP
#define AXYGATE_PHYSICS_HPP

#include <array>
#include <stdexcept>

#include <Eigen/Dense>

namespace axygate {

namespace constants {
inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double amu = 1.66053906660e-27;       // kg
inline constexpr double yb171_mass = 171.0 * amu;      // kg
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;
}  // namespace constants

struct InvalidParameter : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Two-ion crystal: axial normal modes (COM and breathing) plus the
/// per-mode zero-point lengths. All frequencies are angular (rad/s).
struct IonCrystal {
  double ion_mass = constants::yb171_mass;
  int ion_count = 2;
  double axial_com_freq = 0.0;                 // nu_1
  std::array<double, 2> mode_freqs{};          // nu_k, k = 0 (COM), 1 (breathing)
  Eigen::Matrix2d mode_vectors;                // b(ion, mode), orthonormal
  std::array<double, 2> zero_point_lengths{};  // sqrt(hbar / (2 m nu_k))
};

struct QubitParams {
  std::array<double, 2> qubit_freqs{};    // omega_j, rad/s
  std::array<double, 2> freq_gradient{};  // d omega_j / dz, rad/(s m)
  std::array<double, 2> rabi_freq{};      // Omega_j, rad/s
};

/// Spin-motion coupling constants Delta_jk (rad/s), rows = ion, cols = mode.
struct CouplingMatrix {
  Eigen::Matrix2d delta;
};

/// Normal modes of the axial two-ion motion for a given COM frequency.
/// Diagonalizes the harmonic-plus-Coulomb Hessian; returns angular mode
/// frequencies (ascending) and the orthonormal mode-vector matrix.
std::pair<std::array<double, 2>, Eigen::Matrix2d> axial_modes(double nu1);

/// Builds a crystal for a COM frequency, filling modes and zero-point lengths.
IonCrystal make_crystal(double nu1, double ion_mass = constants::yb171_mass);

/// Delta_jk = (1/2) (d omega_j/dz) b_jk z0_k.
CouplingMatrix coupling_constants(const IonCrystal& crystal, const QubitParams& qubits);

/// Standard MAGIC gradient parameters: per-ion frequency gradient from a
/// Zeeman sensitivity (rad/(s T)) and a field gradient (T/m).
QubitParams make_qubits(double rabi, double zeeman_sensitivity, double field_gradient);

}  // namespace axygate

#endif
