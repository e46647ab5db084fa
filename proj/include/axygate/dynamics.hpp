#ifndef AXYGATE_DYNAMICS_HPP
#define AXYGATE_DYNAMICS_HPP

#include <complex>
#include <functional>
#include <vector>

#include "axygate/sequence.hpp"

namespace axygate {

struct TruncationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Spin-dependent displacement of one mode driven by one ion at a given time.
struct DisplacementState {
  std::complex<double> alpha;
  double time = 0.0;
};

/// Conditional phase of the gate and its observable Ramsey-fringe shift.
struct GatePhase {
  double phi = 0.0;
  double phi_observed = 0.0;  // 2 phi, always
};

/// One constant-sign interval of the modulation function on a channel.
struct SignSegment {
  double t0 = 0.0;
  double t1 = 0.0;
  int sign = 1;
};

/// Constant-sign intervals of f on a channel, clipped to [0, t].
std::vector<SignSegment> channel_segments(const PulseSchedule& schedule,
                                          int channel, double t);

/// alpha_jk(t) = -i Delta int_0^t f_j(t') e^{i nu_k t'} dt', evaluated as an
/// exact sum over constant-sign intervals.
std::complex<double> displacement_alpha(const PulseSchedule& schedule,
                                        int channel, double delta, double nu,
                                        double t);

/// Phi(t) = sum_k Delta_1k Delta_2k int_0^t dt' int_0^t' dt''
///          [f1(t') f2(t'') + f2(t') f1(t'')] sin(nu_k (t' - t'')),
/// the symmetric second-order Magnus phase; reduces to the usual
/// 2 Delta_1k Delta_2k double integral when both channels share one
/// modulation function. Exact piecewise-analytic double summation.
GatePhase accumulated_phase(const PulseSchedule& schedule,
                            const CouplingMatrix& couplings,
                            const std::array<double, 2>& mode_freqs, double t);

/// Thermal occupation probabilities p_n = nbar^n / (nbar+1)^{n+1} for
/// n = 0..cutoff-1. Throws if the truncated tail mass reaches tail_budget.
std::vector<double> thermal_weights(double nbar, int cutoff,
                                    double tail_budget = 1e-6);

/// Weighted sum of evaluator(n) over the truncated thermal distribution.
double thermal_average(const std::function<double(int)>& evaluator,
                       double nbar, int cutoff, double tail_budget = 1e-6);

}  // namespace axygate

#endif
