#include "axygate/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace axygate {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};
}

std::vector<SignSegment> channel_segments(const PulseSchedule& schedule,
                                          int channel, double t) {
  if (t < 0.0 || t > schedule.total_time + 1e-15 * schedule.total_time) {
    throw std::domain_error("channel_segments: t outside [0, total_time]");
  }
  std::vector<SignSegment> out;
  double prev = 0.0;
  int sign = 1;
  for (const auto& p : schedule.pulses) {
    if (p.channel != channel) continue;
    if (p.center >= t) break;
    if (p.center > prev) out.push_back({prev, p.center, sign});
    prev = p.center;
    sign = -sign;
  }
  if (t > prev) out.push_back({prev, t, sign});
  return out;
}

std::complex<double> displacement_alpha(const PulseSchedule& schedule,
                                        int channel, double delta, double nu,
                                        double t) {
  if (nu == 0.0) throw InvalidParameter("displacement_alpha: degenerate mode, nu = 0");
  std::complex<double> acc{0.0, 0.0};
  for (const auto& seg : channel_segments(schedule, channel, t)) {
    acc += double(seg.sign) *
           (std::exp(kI * nu * seg.t1) - std::exp(kI * nu * seg.t0));
  }
  return -kI * delta * acc / (kI * nu);
}

GatePhase accumulated_phase(const PulseSchedule& schedule,
                            const CouplingMatrix& couplings,
                            const std::array<double, 2>& mode_freqs, double t) {
  // Merge both channels' flip times so f1 and f2 are constant per interval.
  auto seg1 = channel_segments(schedule, 0, t);
  auto seg2 = channel_segments(schedule, 1, t);
  std::vector<double> bounds;
  for (const auto& s : seg1) bounds.push_back(s.t0);
  for (const auto& s : seg2) bounds.push_back(s.t0);
  bounds.push_back(t);
  std::sort(bounds.begin(), bounds.end());
  bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());

  auto sign_at = [](const std::vector<SignSegment>& segs, double tm) {
    for (const auto& s : segs) {
      if (tm >= s.t0 && tm < s.t1) return s.sign;
    }
    return segs.empty() ? 1 : segs.back().sign;
  };

  const std::size_t n = bounds.size() - 1;
  std::vector<double> s1(n), s2(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double mid = 0.5 * (bounds[i] + bounds[i + 1]);
    s1[i] = sign_at(seg1, mid);
    s2[i] = sign_at(seg2, mid);
  }

  GatePhase out;
  for (int k = 0; k < 2; ++k) {
    const double nu = mode_freqs[k];
    if (nu == 0.0) throw InvalidParameter("accumulated_phase: degenerate mode, nu = 0");
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double a1 = bounds[i], a2 = bounds[i + 1];
      const double len = a2 - a1;
      // same-interval triangle, both orderings
      sum += 2.0 * s1[i] * s2[i] * (len - std::sin(nu * len) / nu) / nu;
      for (std::size_t j = 0; j < i; ++j) {
        const double b1 = bounds[j], b2 = bounds[j + 1];
        const double rect =
            (std::sin(nu * (a2 - b2)) - std::sin(nu * (a1 - b2)) -
             std::sin(nu * (a2 - b1)) + std::sin(nu * (a1 - b1))) /
            (nu * nu);
        sum += (s1[i] * s2[j] + s2[i] * s1[j]) * rect;
      }
    }
    out.phi += couplings.delta(0, k) * couplings.delta(1, k) * sum;
  }
  out.phi_observed = 2.0 * out.phi;
  return out;
}

std::vector<double> thermal_weights(double nbar, int cutoff, double tail_budget) {
  if (nbar < 0.0) throw InvalidParameter("thermal_weights: nbar must be >= 0");
  if (cutoff < 1) throw InvalidParameter("thermal_weights: cutoff must be >= 1");
  std::vector<double> p(cutoff);
  const double ratio = nbar / (nbar + 1.0);
  double w = 1.0 / (nbar + 1.0);
  for (int i = 0; i < cutoff; ++i) {
    p[i] = w;
    w *= ratio;
  }
  const double tail = std::pow(ratio, cutoff);
  if (tail >= tail_budget) {
    throw TruncationError("thermal_weights: truncated tail mass " +
                           std::to_string(tail) + " exceeds budget at cutoff " +
                           std::to_string(cutoff));
  }
  return p;
}

double thermal_average(const std::function<double(int)>& evaluator, double nbar,
                       int cutoff, double tail_budget) {
  auto p = thermal_weights(nbar, cutoff, tail_budget);
  double acc = 0.0;
  for (int i = 0; i < cutoff; ++i) acc += p[i] * evaluator(i);
  return acc;
}

}  // namespace axygate
