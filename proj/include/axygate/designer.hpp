#ifndef AXYGATE_DESIGNER_HPP
#define AXYGATE_DESIGNER_HPP

#include <string>

#include "axygate/dynamics.hpp"

namespace axygate {

struct DesignSpec {
  double target_phi = constants::pi / 4.0;
  int m = 16;
  int r_min = 30;
  int r_max = 60;
  IonCrystal crystal;
  QubitParams qubits;
  CouplingMatrix couplings;
  double tolerance_alpha = 1e-3;  // residual |alpha| in Delta/nu units
  double tolerance_phi = 1e-3;    // rad
  int grid_points = 200;

  void validate() const;
};

struct GateSolution {
  AxyParams params;
  Eigen::Matrix2cd residual_alpha;  // (ion, mode), in Delta/nu units
  double phi_achieved = 0.0;
  double gate_time = 0.0;
  std::string diagnostics;
};

/// Raised when no candidate meets both tolerances; carries the best one found.
struct DesignInfeasible : std::runtime_error {
  DesignInfeasible(const std::string& what, GateSolution best)
      : std::runtime_error(what), best_candidate(std::move(best)) {}
  GateSolution best_candidate;
};

/// tau = 2 pi r / nu1: block duration commensurate with the COM period.
double commensurate_tau(double nu1, int r);

/// Searches (r, tau_a, tau_b) for timings that null both modes' displacements
/// at t = m tau and land the conditional phase on target. Deterministic:
/// fixed coarse grid over the feasible triangle, Nelder-Mead refinement of
/// local minima of the displacement residual, then phase selection among the
/// nulled candidates (ties broken by smallest tau_a, then tau_b).
GateSolution optimize_block(const DesignSpec& spec);

/// Rebuilds the two-channel schedule a solution describes.
PulseSchedule solution_schedule(const GateSolution& solution,
                                const QubitParams& qubits);

}  // namespace axygate

#endif
