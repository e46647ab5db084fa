#include "axygate/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace axygate {

namespace {

double wrap_pi(double x) {
  x = std::fmod(x + constants::pi, constants::two_pi);
  if (x < 0.0) x += constants::two_pi;
  return x - constants::pi;
}

std::array<double, 4> counts_to_probs(const BasisCounts& counts) {
  if (counts.shots > 0) {
    std::int64_t total = 0;
    for (auto c : counts.counts) total += c;
    if (total != counts.shots) {
      throw InvalidParameter("BasisCounts: counts do not sum to shots");
    }
    std::array<double, 4> p{};
    for (int i = 0; i < 4; ++i) p[i] = double(counts.counts[i]) / counts.shots;
    return p;
  }
  return counts.probs;
}

Eigen::Matrix4d joint_confusion(const std::array<Eigen::Matrix2d, 2>& confusion) {
  Eigen::Matrix4d k;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      k.block<2, 2>(2 * i, 2 * j) = confusion[0](i, j) * confusion[1];
    }
  }
  return k;
}

/// Detuned-Rabi excitation after a square pulse.
double rabi_line(double rate, double detuning, double t) {
  const double w2 = rate * rate + detuning * detuning;
  if (w2 == 0.0) return 0.0;
  const double s = std::sin(0.5 * std::sqrt(w2) * t);
  return (rate * rate / w2) * s * s;
}

double spectrum_model(double delta, double nbar_fit,
                      const std::array<double, 2>& nbar_per_mode, bool common,
                      const std::array<double, 2>& eps,
                      const std::array<double, 2>& mode_freqs, double omega,
                      double t) {
  double p = rabi_line(omega, delta, t);
  for (int k = 0; k < 2; ++k) {
    const double nb = common ? nbar_fit : nbar_per_mode[k];
    const int cutoff = std::max(15, int(10.0 * nb) + 15);
    p += thermal_average(
        [&](int n) {
          double acc = 0.0;
          acc += rabi_line(omega * eps[k] * std::sqrt(double(n)),
                           delta + mode_freqs[k], t);
          acc += rabi_line(omega * eps[k] * std::sqrt(double(n + 1)),
                           delta - mode_freqs[k], t);
          acc += rabi_line(omega * eps[k] * eps[k] * std::sqrt(double(n) * (n - 1)),
                           delta + 2.0 * mode_freqs[k], t);
          acc += rabi_line(
              omega * eps[k] * eps[k] * std::sqrt(double(n + 1) * (n + 2)),
              delta - 2.0 * mode_freqs[k], t);
          return acc;
        },
        nb, cutoff, 1e-4);
  }
  return std::min(1.0, p);
}

}  // namespace

FringeFit fit_fringe(const FringeScan& scan) {
  const std::size_t n = scan.phases.size();
  if (n < 5 || scan.populations.size() != n) {
    throw InvalidParameter("fit_fringe: need at least 5 matched phase points");
  }
  if (scan.phases.back() - scan.phases.front() < constants::pi) {
    throw InvalidParameter("fit_fringe: phases must span at least pi");
  }
  const auto [mn, mx] =
      std::minmax_element(scan.populations.begin(), scan.populations.end());
  if (*mx - *mn < 1e-12) {
    throw DegenerateFit("fit_fringe: populations are constant");
  }

  // init from the discrete Fourier component at frequency 1
  double o = 0.0, a = 0.0, b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    o += scan.populations[i];
    a += scan.populations[i] * std::cos(scan.phases[i]);
    b += scan.populations[i] * std::sin(scan.phases[i]);
  }
  o /= n;
  a *= 2.0 / n;
  b *= 2.0 / n;
  double contrast = 2.0 * std::hypot(a, b);
  double phase = std::atan2(b, a);

  Eigen::MatrixXd jac(n, 3);
  Eigen::VectorXd res(n);
  Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
  for (int iter = 0; iter < 100; ++iter) {
    for (std::size_t i = 0; i < n; ++i) {
      const double c = std::cos(scan.phases[i] - phase);
      const double s = std::sin(scan.phases[i] - phase);
      res(i) = scan.populations[i] - (o + 0.5 * contrast * c);
      jac(i, 0) = 1.0;
      jac(i, 1) = 0.5 * c;
      jac(i, 2) = 0.5 * contrast * s;
    }
    jtj = jac.transpose() * jac;
    const Eigen::Vector3d step = jtj.ldlt().solve(jac.transpose() * res);
    o += step(0);
    contrast += step(1);
    phase += step(2);
    if (step.norm() < 1e-14) break;
  }
  if (contrast < 0.0) {
    contrast = -contrast;
    phase += constants::pi;
  }

  FringeFit fit;
  fit.offset = o;
  fit.contrast = contrast;
  fit.phase = wrap_pi(phase);
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r =
        scan.populations[i] - (o + 0.5 * contrast * std::cos(scan.phases[i] - phase));
    rss += r * r;
  }
  fit.residual_rms = std::sqrt(rss / n);
  const double sigma2 = n > 3 ? rss / (n - 3) : 0.0;
  fit.covariance = sigma2 * jtj.inverse();
  return fit;
}

Expectation expectation_value(const BasisCounts& counts) {
  if (counts.shots == 0) {
    bool any = false;
    for (double p : counts.probs) any = any || p != 0.0;
    if (!any) throw InvalidParameter("expectation_value: empty record");
  }
  const auto p = counts_to_probs(counts);
  Expectation e;
  e.value = p[0] - p[1] - p[2] + p[3];
  if (counts.shots > 0) {
    e.sigma = std::sqrt(std::max(0.0, 1.0 - e.value * e.value) / counts.shots);
  }
  return e;
}

double bell_fidelity(double xx, double yy, double zz, bool* clamped) {
  for (double v : {xx, yy, zz}) {
    if (v < -1.0 || v > 1.0) {
      throw InvalidParameter("bell_fidelity: correlators must lie in [-1, 1]");
    }
  }
  const double raw = (xx - yy + zz + 1.0) / 4.0;
  const double f = std::clamp(raw, 0.0, 1.0);
  if (clamped) *clamped = f != raw;
  return f;
}

double negativity_bound(double xx, double yy, double zz) {
  for (double v : {xx, yy, zz}) {
    if (v < -1.0 || v > 1.0) {
      throw InvalidParameter("negativity_bound: correlators must lie in [-1, 1]");
    }
  }
  const double arg = (1.0 + std::abs(xx) + std::abs(yy) + std::abs(zz)) / 2.0;
  return std::max(0.0, std::log2(arg));
}

EntanglementReport entanglement_report(const std::array<BasisCounts, 3>& counts) {
  EntanglementReport rep;
  rep.xx = expectation_value(counts[0]);
  rep.yy = expectation_value(counts[1]);
  rep.zz = expectation_value(counts[2]);
  rep.fidelity = bell_fidelity(rep.xx.value, rep.yy.value, rep.zz.value,
                               &rep.clamped);
  rep.fidelity_sigma = 0.25 * std::sqrt(rep.xx.sigma * rep.xx.sigma +
                                        rep.yy.sigma * rep.yy.sigma +
                                        rep.zz.sigma * rep.zz.sigma);
  rep.neg_bound = negativity_bound(rep.xx.value, rep.yy.value, rep.zz.value);
  const double s =
      std::abs(rep.xx.value) + std::abs(rep.yy.value) + std::abs(rep.zz.value);
  const double sigma_s = std::sqrt(rep.xx.sigma * rep.xx.sigma +
                                   rep.yy.sigma * rep.yy.sigma +
                                   rep.zz.sigma * rep.zz.sigma);
  rep.neg_bound_sigma =
      rep.neg_bound > 0.0 ? sigma_s / ((1.0 + s) * std::log(2.0)) : 0.0;
  return rep;
}

std::array<double, 4> spam_corrupt(const std::array<double, 4>& freqs,
                                   const std::array<Eigen::Matrix2d, 2>& confusion) {
  const Eigen::Matrix4d k = joint_confusion(confusion);
  std::array<double, 4> out{};
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 4; ++i) out[j] += freqs[i] * k(i, j);
  }
  return out;
}

std::array<double, 4> spam_correct(const std::array<double, 4>& freqs,
                                   const std::array<Eigen::Matrix2d, 2>& confusion,
                                   bool* clipped) {
  const Eigen::Matrix4d kt = joint_confusion(confusion).transpose();
  if (std::abs(kt.determinant()) < 1e-12) {
    throw InvalidParameter("spam_correct: singular confusion matrix");
  }
  const Eigen::Vector4d raw =
      kt.inverse() * Eigen::Vector4d(freqs[0], freqs[1], freqs[2], freqs[3]);
  std::array<double, 4> out{};
  bool any_clip = false;
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) {
    out[i] = raw(i);
    if (out[i] < 0.0) {
      out[i] = 0.0;
      any_clip = true;
    }
    sum += out[i];
  }
  if (sum > 0.0) {
    for (auto& v : out) v /= sum;
  }
  if (clipped) *clipped = any_clip;
  return out;
}

SidebandSpectrum sideband_spectrum(const std::array<double, 2>& nbar,
                                   const std::array<double, 2>& eps,
                                   const std::array<double, 2>& mode_freqs,
                                   double omega, double pulse_time,
                                   const std::vector<double>& detunings) {
  if (eps[0] >= 0.3 || eps[1] >= 0.3 || eps[0] <= 0.0 || eps[1] <= 0.0) {
    throw InvalidParameter("sideband_spectrum: Lamb-Dicke factors must be in (0, 0.3)");
  }
  if (!(omega > 0.0) || !(pulse_time > 0.0)) {
    throw InvalidParameter("sideband_spectrum: omega and pulse_time must be positive");
  }
  SidebandSpectrum spec;
  spec.detunings = detunings;
  spec.pulse_time = pulse_time;
  spec.excitation.reserve(detunings.size());
  for (double d : detunings) {
    spec.excitation.push_back(
        spectrum_model(d, 0.0, nbar, false, eps, mode_freqs, omega, pulse_time));
  }
  return spec;
}

NbarFit fit_nbar(const SidebandSpectrum& spectrum,
                 const std::array<double, 2>& eps,
                 const std::array<double, 2>& mode_freqs, double omega) {
  if (spectrum.detunings.size() < 3 ||
      spectrum.detunings.size() != spectrum.excitation.size()) {
    throw InvalidParameter("fit_nbar: malformed spectrum");
  }
  auto rss = [&](double nb) {
    double acc = 0.0;
    for (std::size_t i = 0; i < spectrum.detunings.size(); ++i) {
      const double m = spectrum_model(spectrum.detunings[i], nb, {}, true, eps,
                                      mode_freqs, omega, spectrum.pulse_time);
      const double r = spectrum.excitation[i] - m;
      acc += r * r;
    }
    return acc;
  };

  // coarse scan then golden-section refinement
  double best_n = 0.0, best_v = rss(0.0);
  for (double nb = 0.05; nb <= 12.0; nb *= 1.15) {
    const double v = rss(nb);
    if (v < best_v) {
      best_v = v;
      best_n = nb;
    }
  }
  double lo = best_n / 1.35, hi = std::max(best_n * 1.35, 0.05);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double v1 = rss(x1), v2 = rss(x2);
  for (int it = 0; it < 80 && hi - lo > 1e-6; ++it) {
    if (v1 < v2) {
      hi = x2;
      x2 = x1;
      v2 = v1;
      x1 = hi - gr * (hi - lo);
      v1 = rss(x1);
    } else {
      lo = x1;
      x1 = x2;
      v1 = v2;
      x2 = lo + gr * (hi - lo);
      v2 = rss(x2);
    }
  }
  NbarFit fit;
  fit.nbar = 0.5 * (lo + hi);
  const double vmin = rss(fit.nbar);
  fit.residual_rms = std::sqrt(vmin / spectrum.detunings.size());
  // 1-sigma from the local curvature of chi^2
  const double h = std::max(0.02, 0.05 * fit.nbar);
  const double curv = (rss(fit.nbar + h) - 2.0 * vmin + rss(std::max(0.0, fit.nbar - h))) / (h * h);
  const double dof = std::max<std::size_t>(1, spectrum.detunings.size() - 1);
  const double sigma_res2 = vmin / dof;
  fit.sigma = curv > 0.0 ? std::sqrt(2.0 * sigma_res2 / curv) : 0.0;
  return fit;
}

}  // namespace axygate
