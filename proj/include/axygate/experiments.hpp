#ifndef AXYGATE_EXPERIMENTS_HPP
#define AXYGATE_EXPERIMENTS_HPP

#include <cstdint>
#include <string>

#include "axygate/designer.hpp"
#include "axygate/fock.hpp"

namespace axygate {

/// Crystal, qubit, and coupling parameters a simulation runs against.
struct GateSystem {
  IonCrystal crystal;
  QubitParams qubits;
  CouplingMatrix couplings;
};

struct ErrorModel {
  std::array<double, 2> nbar{0.0, 0.0};
  double trap_freq_offset = 0.0;  // actual nu1 = (1 + x) design nu1
  double area_error = 0.0;        // pulse angle pi (1 + eps)
  double timing_error = 0.0;      // pulse duration t_p / (1 + eps)
  // row = true state, column = observed state
  std::array<Eigen::Matrix2d, 2> readout_confusion{
      Eigen::Matrix2d::Identity(), Eigen::Matrix2d::Identity()};

  void validate() const;
  bool has_pulse_errors() const { return area_error != 0.0 || timing_error != 0.0; }
};

enum class SimPath { analytic, oracle };

struct UnsupportedPath : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FringeScan {
  std::vector<double> phases;       // rad, second Ramsey pulse phase
  std::vector<double> populations;  // target excitation probability
  int control_state = 0;            // 0 or 1
  int shots = 0;                    // 0 = noiseless probabilities
};

/// Joint two-qubit measurement record in one basis setting.
struct BasisCounts {
  char basis = 'z';                     // 'x', 'y', or 'z'
  std::array<std::int64_t, 4> counts{};  // outcomes 00, 01, 10, 11
  std::int64_t shots = 0;
  std::array<double, 4> probs{};  // exact probabilities when shots == 0
  std::string warning;
};

/// Confusion matrix from per-qubit readout fidelities: dark = P(read 0|0),
/// bright = P(read 1|1).
Eigen::Matrix2d confusion_from_fidelities(double dark, double bright);

/// Conditional Ramsey on the target ion (ion 1) with the control (ion 0)
/// prepared in |0> or |1>. The analytic path folds residual displacements
/// into a thermal contrast factor and cannot represent pulse errors (throws
/// UnsupportedPath); the oracle path evolves the full joint state.
FringeScan simulate_ramsey(const GateSolution& solution, const GateSystem& system,
                           int control_state, const ErrorModel& error,
                           const std::vector<double>& phases, int shots,
                           SimPath path = SimPath::analytic,
                           std::uint64_t seed = 0, FockConfig fock = {});

/// Bell-state preparation and parity readout in the settings
/// phi = pi/4 ("x"), 3 pi/4 ("y"), and the bare z basis.
std::array<BasisCounts, 3> simulate_bell(const GateSolution& solution,
                                         const GateSystem& system,
                                         const ErrorModel& error, int shots,
                                         SimPath path = SimPath::analytic,
                                         std::uint64_t seed = 0,
                                         FockConfig fock = {});

enum class SweepAxis { nbar, trap_freq_offset, area_error, timing_error };

SweepAxis sweep_axis_from_name(const std::string& name);
std::string sweep_axis_name(SweepAxis axis);

struct SweepRow {
  std::string axis;
  double value = 0.0;
  int control_state = 0;
  double contrast = 0.0;
  double contrast_err = 0.0;
  double phase_rad = 0.0;
  double phase_err = 0.0;
  double normalized_contrast = 0.0;
  double normalized_phase = 0.0;
};

/// Scans one error axis, fitting the fringe for both control states at each
/// grid value and normalizing contrast and phase to the zero-error reference.
std::vector<SweepRow> sweep(const GateSolution& solution, const GateSystem& system,
                            const ErrorModel& base_error, SweepAxis axis,
                            const std::vector<double>& values, int shots,
                            SimPath path = SimPath::analytic,
                            std::uint64_t seed = 0, FockConfig fock = {});

/// Text table of predicted contrast/phase margins along each error axis.
std::string solution_report(const GateSolution& solution,
                            const GateSystem& system);

}  // namespace axygate

#endif
