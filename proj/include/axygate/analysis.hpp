#ifndef AXYGATE_ANALYSIS_HPP
#define AXYGATE_ANALYSIS_HPP

#include "axygate/experiments.hpp"

namespace axygate {

struct DegenerateFit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FitFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Result of fitting P(phi) = offset + (contrast/2) cos(phi - phase).
struct FringeFit {
  double contrast = 0.0;
  double phase = 0.0;  // wrapped to (-pi, pi]
  double offset = 0.0;
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();  // (offset, contrast, phase)
  double residual_rms = 0.0;
};

/// Gauss-Newton least squares, initialized from the discrete Fourier
/// component at frequency 1. Throws DegenerateFit on a flat scan.
FringeFit fit_fringe(const FringeScan& scan);

struct Expectation {
  double value = 0.0;
  double sigma = 0.0;
};

/// <sigma_i sigma_i> = P00 + P11 - P01 - P10 with multinomial standard error.
Expectation expectation_value(const BasisCounts& counts);

/// F = (<xx> - <yy> + <zz> + 1) / 4, clamped to [0, 1].
double bell_fidelity(double xx, double yy, double zz, bool* clamped = nullptr);

/// E_N >= log2+( (1 + |xx| + |yy| + |zz|) / 2 ).
double negativity_bound(double xx, double yy, double zz);

struct EntanglementReport {
  Expectation xx, yy, zz;
  double fidelity = 0.0;
  double fidelity_sigma = 0.0;
  double neg_bound = 0.0;
  double neg_bound_sigma = 0.0;
  bool clamped = false;
};

/// Correlators, fidelity, and negativity bound from x/y/z basis records.
EntanglementReport entanglement_report(const std::array<BasisCounts, 3>& counts);

/// Inverts per-qubit readout confusion on a 4-outcome frequency vector;
/// negative entries are clipped to 0 and the vector renormalized.
std::array<double, 4> spam_correct(const std::array<double, 4>& freqs,
                                   const std::array<Eigen::Matrix2d, 2>& confusion,
                                   bool* clipped = nullptr);

/// Forward application of the confusion (for round-trip tests and sampling).
std::array<double, 4> spam_corrupt(const std::array<double, 4>& freqs,
                                   const std::array<Eigen::Matrix2d, 2>& confusion);

struct SidebandSpectrum {
  std::vector<double> detunings;   // rad/s, relative to the carrier
  std::vector<double> excitation;  // [0, 1]
  double pulse_time = 0.0;         // s
  double fitted_nbar = -1.0;       // < 0 until fit_nbar runs
};

/// Thermal carrier + first/second order sideband lineshape model. nbar and
/// the Lamb-Dicke factors eps are per mode; line centers sit at +-nu_k and
/// +-2 nu_k.
SidebandSpectrum sideband_spectrum(const std::array<double, 2>& nbar,
                                   const std::array<double, 2>& eps,
                                   const std::array<double, 2>& mode_freqs,
                                   double omega, double pulse_time,
                                   const std::vector<double>& detunings);

struct NbarFit {
  double nbar = 0.0;
  double sigma = 0.0;
  double residual_rms = 0.0;
};

/// Least-squares recovery of a common nbar (both modes) from a spectrum.
NbarFit fit_nbar(const SidebandSpectrum& spectrum,
                 const std::array<double, 2>& eps,
                 const std::array<double, 2>& mode_freqs, double omega);

}  // namespace axygate

#endif
