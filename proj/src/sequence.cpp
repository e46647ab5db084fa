#include "axygate/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace axygate {

void AxyParams::validate() const {
  if (!(tau > 0.0)) throw InvalidParameter("AxyParams: tau must be positive");
  if (!(0.0 < tau_a && tau_a < tau_b && tau_b < 0.5 * tau)) {
    throw InvalidParameter("AxyParams: require 0 < tau_a < tau_b < tau/2");
  }
  if (m <= 0 || m % 2 != 0) {
    throw InvalidParameter("AxyParams: block count m must be positive and even");
  }
  if (r < 1) throw InvalidParameter("AxyParams: harmonic index r must be >= 1");
}

std::vector<double> PulseSchedule::flip_times(int channel) const {
  std::vector<double> out;
  for (const auto& p : pulses) {
    if (p.channel == channel) out.push_back(p.center);
  }
  return out;
}

void check_overlaps(const PulseSchedule& schedule) {
  // Finite-width pulses on the same channel must not overlap.
  std::vector<const Pulse*> by_channel[2];
  for (const auto& p : schedule.pulses) {
    if (p.channel >= 0 && p.channel < 2) by_channel[p.channel].push_back(&p);
  }
  for (auto& ch : by_channel) {
    for (std::size_t i = 1; i < ch.size(); ++i) {
      const Pulse& a = *ch[i - 1];
      const Pulse& b = *ch[i];
      if (a.center + 0.5 * a.duration > b.center - 0.5 * b.duration) {
        std::ostringstream msg;
        msg << "schedule infeasible: pulses at t = " << a.center << " s and t = "
            << b.center << " s overlap on channel " << b.channel;
        throw ScheduleInfeasible(msg.str());
      }
    }
  }
}

PulseSchedule build_axy(const AxyParams& params, const QubitParams& qubits,
                        const std::vector<int>& channels) {
  params.validate();
  PulseSchedule schedule;
  schedule.total_time = params.m * params.tau;
  const std::array<double, 5> offsets{params.tau_a, params.tau_b, 0.5 * params.tau,
                                      params.tau - params.tau_b,
                                      params.tau - params.tau_a};
  for (int block = 0; block < params.m; ++block) {
    const auto& phases =
        (block % 2 == 0) ? params.block_phases_x : params.block_phases_y;
    for (int i = 0; i < 5; ++i) {
      for (int ch : channels) {
        if (ch < 0 || ch > 1) throw InvalidParameter("build_axy: channel out of range");
        Pulse p;
        p.center = block * params.tau + offsets[i];
        p.duration = constants::pi / qubits.rabi_freq[ch];
        p.phase = phases[i];
        p.angle = constants::pi;
        p.channel = ch;
        schedule.pulses.push_back(p);
      }
    }
  }
  std::stable_sort(schedule.pulses.begin(), schedule.pulses.end(),
                   [](const Pulse& a, const Pulse& b) { return a.center < b.center; });
  check_overlaps(schedule);
  return schedule;
}

int modulation_function(const PulseSchedule& schedule, int channel, double t) {
  if (t < 0.0 || t > schedule.total_time) {
    throw std::domain_error("modulation_function: t outside [0, total_time]");
  }
  int sign = 1;
  for (const auto& p : schedule.pulses) {
    if (p.channel != channel) continue;
    if (p.center <= t) sign = -sign;
    else break;
  }
  return sign;
}

PulseSchedule apply_area_error(const PulseSchedule& schedule, double eps) {
  if (!(eps > -1.0)) throw InvalidParameter("apply_area_error: require eps > -1");
  PulseSchedule out = schedule;
  for (auto& p : out.pulses) p.angle = constants::pi * (1.0 + eps);
  return out;
}

PulseSchedule apply_timing_error(const PulseSchedule& schedule, double eps) {
  if (!(eps > -1.0)) throw InvalidParameter("apply_timing_error: require eps > -1");
  PulseSchedule out = schedule;
  for (auto& p : out.pulses) p.duration /= (1.0 + eps);
  check_overlaps(out);
  return out;
}

}  // namespace axygate
