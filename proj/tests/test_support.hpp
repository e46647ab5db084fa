#ifndef AXYGATE_TEST_SUPPORT_HPP
#define AXYGATE_TEST_SUPPORT_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "axygate/designer.hpp"
#include "axygate/experiments.hpp"

// Shared fixtures and independent numerical oracles for the test suite.
namespace test_support {

// Reference hardware parameters used across tests.
inline axygate::GateSystem reference_system() {
  axygate::GateSystem sys;
  sys.crystal = axygate::make_crystal(axygate::constants::two_pi * 120e3);
  sys.qubits = axygate::make_qubits(axygate::constants::two_pi * 31e3,
                                    axygate::constants::two_pi * 14e9, 19.0);
  sys.couplings = axygate::coupling_constants(sys.crystal, sys.qubits);
  return sys;
}

// Frozen solver output for the reference system with target pi/4, m = 16,
// r in [30, 60]. Used so most tests need not rerun the optimizer.
inline axygate::GateSolution golden_solution() {
  axygate::GateSolution sol;
  sol.params.r = 37;
  sol.params.m = 16;
  sol.params.tau = 37.0 / 120e3;
  sol.params.tau_a = 2.4076389705541015e-5;
  sol.params.tau_b = 1.0593833320403618e-4;
  sol.phi_achieved = 0.78540299572682959;
  sol.gate_time = 16.0 * sol.params.tau;
  return sol;
}

// Fast qubit parameters for short synthetic schedules where the real pulse
// width would not fit between pulses.
inline axygate::QubitParams fast_qubits() {
  return axygate::make_qubits(axygate::constants::two_pi * 500e3,
                              axygate::constants::two_pi * 14e9, 19.0);
}

// 10-point Gauss-Legendre nodes and weights on [-1, 1].
inline constexpr std::array<double, 10> gl_nodes{
    -0.9739065285171717, -0.8650633666889845, -0.6794095682990244,
    -0.4333953941292472, -0.1488743389816312, 0.1488743389816312,
    0.4333953941292472,  0.6794095682990244,  0.8650633666889845,
    0.9739065285171717};
inline constexpr std::array<double, 10> gl_weights{
    0.0666713443086881, 0.1494513491505806, 0.2190863625159820,
    0.2692667193099963, 0.2955242247147529, 0.2955242247147529,
    0.2692667193099963, 0.2190863625159820, 0.1494513491505806,
    0.0666713443086881};

// Integrates fn over [a, b], subdividing so oscillations at angular rate nu
// stay well resolved.
template <typename Fn>
auto gl_integrate(Fn&& fn, double a, double b, double nu)
    -> decltype(fn(0.0)) {
  using value_type = decltype(fn(0.0));
  if (b <= a) return value_type{};
  const int parts =
      std::max(1, int(std::ceil(std::abs(nu) * (b - a) / 1.5)));
  value_type acc{};
  const double h = (b - a) / parts;
  for (int p = 0; p < parts; ++p) {
    const double lo = a + p * h;
    for (int i = 0; i < 10; ++i) {
      const double t = lo + 0.5 * h * (gl_nodes[i] + 1.0);
      acc += (0.5 * h * gl_weights[i]) * fn(t);
    }
  }
  return acc;
}

// Quadrature version of the spin-dependent displacement integral
//   alpha = -i delta int_0^t f(t') e^{i nu t'} dt',
// independent of the closed-form segment summation in the library.
inline std::complex<double> alpha_quadrature(
    const axygate::PulseSchedule& schedule, int channel, double delta,
    double nu, double t) {
  const std::complex<double> i{0.0, 1.0};
  std::complex<double> acc{};
  double prev = 0.0;
  auto flips = schedule.flip_times(channel);
  flips.push_back(t);
  for (double edge : flips) {
    const double hi = std::min(edge, t);
    if (hi > prev) {
      const int sign =
          axygate::modulation_function(schedule, channel, 0.5 * (prev + hi));
      acc += double(sign) * gl_integrate(
                                [&](double s) { return std::exp(i * nu * s); },
                                prev, hi, nu);
    }
    prev = hi;
    if (prev >= t) break;
  }
  return -i * delta * acc;
}

// Quadrature version of the second-order conditional phase
//   Phi = sum_k d1k d2k int_0^t dt' int_0^t' dt''
//         [f1(t') f2(t'') + f2(t') f1(t'')] sin(nu_k (t' - t'')).
// Nested Gauss-Legendre over the full double integral.
inline double phi_quadrature(const axygate::PulseSchedule& schedule,
                             const axygate::CouplingMatrix& couplings,
                             const std::array<double, 2>& mode_freqs,
                             double t) {
  // break both integrals at the sign flips so each panel is smooth
  std::vector<double> edges{0.0, t};
  for (int ch = 0; ch < 2; ++ch) {
    for (double f : schedule.flip_times(ch)) {
      if (f > 0.0 && f < t) edges.push_back(f);
    }
  }
  std::sort(edges.begin(), edges.end());

  double phi = 0.0;
  for (int k = 0; k < 2; ++k) {
    const double nu = mode_freqs[k];
    auto inner = [&](double tp) {
      const double f1p = axygate::modulation_function(schedule, 0, tp);
      const double f2p = axygate::modulation_function(schedule, 1, tp);
      double acc = 0.0;
      for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
        const double lo = edges[e];
        const double hi = std::min(edges[e + 1], tp);
        if (hi <= lo) break;
        acc += gl_integrate(
            [&](double ts) {
              const double f1s = axygate::modulation_function(schedule, 0, ts);
              const double f2s = axygate::modulation_function(schedule, 1, ts);
              return (f1p * f2s + f2p * f1s) * std::sin(nu * (tp - ts));
            },
            lo, hi, nu);
      }
      return acc;
    };
    double outer = 0.0;
    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
      outer += gl_integrate(inner, edges[e], edges[e + 1], nu);
    }
    phi += couplings.delta(0, k) * couplings.delta(1, k) * outer;
  }
  return phi;
}

// Random feasible schedule on both channels: a handful of instantaneous
// pulses at sorted times over a few motional periods.
inline axygate::PulseSchedule random_schedule(std::mt19937_64& rng,
                                              double total_time) {
  axygate::PulseSchedule sched;
  sched.total_time = total_time;
  std::uniform_int_distribution<int> count(1, 6);
  std::uniform_real_distribution<double> when(0.01 * total_time,
                                              0.99 * total_time);
  std::uniform_real_distribution<double> angle(0.2, axygate::constants::pi);
  std::uniform_real_distribution<double> phase(0.0, axygate::constants::two_pi);
  for (int ch = 0; ch < 2; ++ch) {
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
      axygate::Pulse p;
      p.center = when(rng);
      p.duration = 0.0;
      p.angle = angle(rng);
      p.phase = phase(rng);
      p.channel = ch;
      sched.pulses.push_back(p);
    }
  }
  std::stable_sort(sched.pulses.begin(), sched.pulses.end(),
                   [](const axygate::Pulse& a, const axygate::Pulse& b) {
                     return a.center < b.center;
                   });
  return sched;
}

}  // namespace test_support

#endif
