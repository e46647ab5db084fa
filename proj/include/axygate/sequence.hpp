#ifndef AXYGATE_SEQUENCE_HPP
#define AXYGATE_SEQUENCE_HPP

#include <array>
#include <stdexcept>
#include <vector>

#include "axygate/physics.hpp"

namespace axygate {

struct ScheduleInfeasible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A single rectangular carrier pulse. Zero duration means instantaneous.
struct Pulse {
  double center = 0.0;    // s
  double duration = 0.0;  // s
  double phase = 0.0;     // rad, rotation-axis azimuth
  double angle = constants::pi;  // rad
  int channel = 0;        // ion index
};

/// Timing triple and block layout of an AXY sequence.
struct AxyParams {
  double tau = 0.0;    // block duration, s
  double tau_a = 0.0;  // s
  double tau_b = 0.0;  // s
  int m = 0;           // block count, even
  int r = 0;           // harmonic index (nu1 tau = 2 pi r)
  std::array<double, 5> block_phases_x{
      constants::pi / 6.0, constants::pi / 2.0, 0.0,
      constants::pi / 2.0, constants::pi / 6.0};
  std::array<double, 5> block_phases_y{
      constants::pi / 6.0 + constants::pi / 2.0, constants::pi,
      constants::pi / 2.0, constants::pi,
      constants::pi / 6.0 + constants::pi / 2.0};

  void validate() const;
};

struct PulseSchedule {
  std::vector<Pulse> pulses;  // ordered by center
  double total_time = 0.0;    // s

  /// Pulse centers on one channel, ascending.
  std::vector<double> flip_times(int channel) const;
};

/// Builds the AXY schedule: per block, five pulses at
/// {tau_a, tau_b, tau/2, tau - tau_b, tau - tau_a}, X phases on even blocks
/// and Y phases on odd blocks, pi rotations of duration pi/Omega_j,
/// replicated on every requested channel.
PulseSchedule build_axy(const AxyParams& params, const QubitParams& qubits,
                        const std::vector<int>& channels);

/// Modulation function f = +-1: starts at +1, flips at each pulse center on
/// the channel. Throws std::domain_error outside [0, total_time].
int modulation_function(const PulseSchedule& schedule, int channel, double t);

/// Every pulse angle becomes pi (1 + eps); timings unchanged.
PulseSchedule apply_area_error(const PulseSchedule& schedule, double eps);

/// Every pulse duration becomes t_p / (1 + eps); centers and angles unchanged.
PulseSchedule apply_timing_error(const PulseSchedule& schedule, double eps);

/// Throws ScheduleInfeasible naming the first overlapping pair, if any.
void check_overlaps(const PulseSchedule& schedule);

}  // namespace axygate

#endif
