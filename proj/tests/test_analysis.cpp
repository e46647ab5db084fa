#include <cmath>
#include <random>

#include "axygate/analysis.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace axygate;

namespace {

FringeScan make_scan(double offset, double contrast, double phase, int n = 16) {
  FringeScan scan;
  for (int i = 0; i < n; ++i) {
    const double x = constants::two_pi * i / n;
    scan.phases.push_back(x);
    scan.populations.push_back(offset + 0.5 * contrast * std::cos(x - phase));
  }
  return scan;
}

BasisCounts counts_from(char basis, std::array<std::int64_t, 4> c) {
  BasisCounts bc;
  bc.basis = basis;
  bc.counts = c;
  bc.shots = c[0] + c[1] + c[2] + c[3];
  return bc;
}

}  // namespace

TEST_CASE("fringe fit recovers noiseless parameters") {
  const FringeFit fit = fit_fringe(make_scan(0.5, 0.8, 1.2));
  CHECK(fit.offset == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(fit.contrast == doctest::Approx(0.8).epsilon(1e-10));
  CHECK(fit.phase == doctest::Approx(1.2).epsilon(1e-10));
  CHECK(fit.residual_rms < 1e-12);
}

TEST_CASE("fringe fit handles phases near the wrap point") {
  const FringeFit fit = fit_fringe(make_scan(0.45, 0.6, 3.0));
  CHECK(fit.phase == doctest::Approx(3.0).epsilon(1e-9));
  const FringeFit neg = fit_fringe(make_scan(0.45, 0.6, -2.9));
  CHECK(neg.phase == doctest::Approx(-2.9).epsilon(1e-9));
}

TEST_CASE("fringe fit survives a sign-flipped initialization") {
  // data generated with negative amplitude: equivalent to phase + pi
  FringeScan scan;
  for (int i = 0; i < 12; ++i) {
    const double x = constants::two_pi * i / 12;
    scan.phases.push_back(x);
    scan.populations.push_back(0.5 - 0.35 * std::cos(x - 0.4));
  }
  const FringeFit fit = fit_fringe(scan);
  CHECK(fit.contrast == doctest::Approx(0.7).epsilon(1e-9));
  CHECK(fit.phase == doctest::Approx(0.4 - constants::pi).epsilon(1e-9));
}

TEST_CASE("fringe fit tolerates shot noise") {
  std::mt19937_64 rng(5);
  FringeScan scan = make_scan(0.5, 0.9, -0.7, 24);
  const int shots = 2000;
  for (auto& p : scan.populations) {
    std::binomial_distribution<int> dist(shots, p);
    p = double(dist(rng)) / shots;
  }
  const FringeFit fit = fit_fringe(scan);
  CHECK(std::abs(fit.contrast - 0.9) < 0.05);
  CHECK(std::abs(fit.phase + 0.7) < 0.05);
  CHECK(fit.covariance(1, 1) > 0.0);
  CHECK(fit.covariance(2, 2) > 0.0);
}

TEST_CASE("degenerate and malformed fringe inputs throw") {
  FringeScan flat;
  for (int i = 0; i < 8; ++i) {
    flat.phases.push_back(constants::two_pi * i / 8);
    flat.populations.push_back(0.5);
  }
  CHECK_THROWS_AS(fit_fringe(flat), DegenerateFit);

  FringeScan tiny = make_scan(0.5, 0.8, 0.0, 4);
  CHECK_THROWS_AS(fit_fringe(tiny), InvalidParameter);

  FringeScan narrow;
  for (int i = 0; i < 6; ++i) {
    narrow.phases.push_back(0.3 * i);
    narrow.populations.push_back(0.5 + 0.1 * i);
  }
  CHECK_THROWS_AS(fit_fringe(narrow), InvalidParameter);
}

TEST_CASE("correlator expectation from counts") {
  const BasisCounts bc = counts_from('z', {40, 10, 10, 40});
  const Expectation e = expectation_value(bc);
  CHECK(e.value == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(e.sigma == doctest::Approx(std::sqrt((1.0 - 0.36) / 100)).epsilon(1e-12));

  BasisCounts exact;
  exact.basis = 'x';
  exact.probs = {0.9, 0.0, 0.1, 0.0};
  const Expectation ep = expectation_value(exact);
  CHECK(ep.value == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(ep.sigma == 0.0);
}

TEST_CASE("Bell fidelity formula and clamping") {
  CHECK(bell_fidelity(1.0, -1.0, 1.0) == doctest::Approx(1.0));
  CHECK(bell_fidelity(0.0, 0.0, 0.0) == doctest::Approx(0.25));
  // reference value frozen from the correlator sum 2.564
  CHECK(bell_fidelity(0.855, -0.855, 0.854) == doctest::Approx(0.891).epsilon(1e-12));
  bool clamped = false;
  CHECK(bell_fidelity(-1.0, 1.0, -1.0, &clamped) == 0.0);
  CHECK(clamped);
  CHECK_THROWS_AS(bell_fidelity(1.5, 0.0, 0.0), InvalidParameter);
}

TEST_CASE("negativity lower bound formula") {
  CHECK(negativity_bound(1.0, -1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(negativity_bound(0.0, 0.0, 0.0) == doctest::Approx(0.0));
  // reference value frozen from the correlator magnitude sum 2.5603
  const double e = negativity_bound(0.8601, -0.8601, 0.8401);
  CHECK(std::round(e * 1000.0) == 832.0);
  // monotone in each correlator magnitude
  CHECK(negativity_bound(0.9, -0.9, 0.9) > negativity_bound(0.8, -0.8, 0.8));
  CHECK_THROWS_AS(negativity_bound(0.0, -1.2, 0.0), InvalidParameter);
}

TEST_CASE("entanglement report aggregates the three bases") {
  std::array<BasisCounts, 3> counts{
      counts_from('x', {480, 20, 20, 480}),
      counts_from('y', {20, 480, 480, 20}),
      counts_from('z', {480, 20, 20, 480})};
  const EntanglementReport rep = entanglement_report(counts);
  CHECK(rep.xx.value == doctest::Approx(0.92));
  CHECK(rep.yy.value == doctest::Approx(-0.92));
  CHECK(rep.zz.value == doctest::Approx(0.92));
  CHECK(rep.fidelity == doctest::Approx((0.92 * 3 + 1.0) / 4.0));
  CHECK(rep.fidelity_sigma > 0.0);
  CHECK(rep.neg_bound == doctest::Approx(std::log2((1.0 + 2.76) / 2.0)));
  CHECK(rep.neg_bound_sigma > 0.0);
  CHECK(!rep.clamped);
}

TEST_CASE("readout correction inverts the confusion exactly") {
  std::array<Eigen::Matrix2d, 2> confusion{
      confusion_from_fidelities(0.995, 0.985),
      confusion_from_fidelities(0.99, 0.97)};
  const std::array<double, 4> truth{0.45, 0.05, 0.07, 0.43};
  const auto observed = spam_corrupt(truth, confusion);
  double sum = 0.0;
  for (double v : observed) sum += v;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  bool clipped = true;
  const auto recovered = spam_correct(observed, confusion, &clipped);
  CHECK(!clipped);
  for (int i = 0; i < 4; ++i) {
    CHECK(recovered[i] == doctest::Approx(truth[i]).epsilon(1e-12));
  }
}

TEST_CASE("readout correction clips unphysical frequencies") {
  std::array<Eigen::Matrix2d, 2> confusion{
      confusion_from_fidelities(0.95, 0.95),
      confusion_from_fidelities(0.95, 0.95)};
  // frequencies more extreme than the confusion could produce
  bool clipped = false;
  const auto out = spam_correct({1.0, 0.0, 0.0, 0.0}, confusion, &clipped);
  CHECK(clipped);
  double sum = 0.0;
  for (double v : out) {
    CHECK(v >= 0.0);
    sum += v;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("singular confusion is rejected") {
  std::array<Eigen::Matrix2d, 2> confusion;
  confusion[0] << 0.5, 0.5, 0.5, 0.5;
  confusion[1] = Eigen::Matrix2d::Identity();
  CHECK_THROWS_AS(spam_correct({0.25, 0.25, 0.25, 0.25}, confusion),
                  InvalidParameter);
}

TEST_CASE("sideband spectrum suppresses the red sideband at zero temperature") {
  const std::array<double, 2> freqs{constants::two_pi * 120e3,
                                    std::sqrt(3.0) * constants::two_pi * 120e3};
  const std::array<double, 2> eps{0.08, 0.06};
  // weak drive so the carrier tail stays far below the sideband signal
  const double omega = constants::two_pi * 3e3;
  const double t = 150e-6;
  // the lowering-ladder line peaks below the carrier and needs phonons
  const auto spec = sideband_spectrum({0.0, 0.0}, eps, freqs, omega, t,
                                      {-freqs[0], freqs[0]});
  CHECK(spec.excitation[0] < 1e-3);
  CHECK(spec.excitation[1] > 0.01);
  CHECK(spec.excitation[0] < 0.1 * spec.excitation[1]);
}

TEST_CASE("sideband asymmetry follows the thermal ratio") {
  const std::array<double, 2> freqs{constants::two_pi * 120e3,
                                    std::sqrt(3.0) * constants::two_pi * 120e3};
  const std::array<double, 2> eps{0.05, 0.04};
  // weak drive keeps the carrier tail negligible at the sidebands and the
  // excitation in the quadratic regime, where the below/above-carrier ratio
  // tends to nbar/(nbar+1)
  const double omega = constants::two_pi * 3e3;
  const double t = 150e-6;
  const double nbar = 1.5;
  const auto spec = sideband_spectrum({nbar, nbar}, eps, freqs, omega, t,
                                      {-freqs[0], freqs[0]});
  const double ratio = spec.excitation[0] / spec.excitation[1];
  CHECK(ratio == doctest::Approx(nbar / (nbar + 1.0)).epsilon(0.05));
}

TEST_CASE("sideband spectrum validates its inputs") {
  const std::array<double, 2> freqs{constants::two_pi * 120e3,
                                    std::sqrt(3.0) * constants::two_pi * 120e3};
  CHECK_THROWS_AS(
      sideband_spectrum({0.0, 0.0}, {0.5, 0.1}, freqs, 1.0, 1e-4, {0.0}),
      InvalidParameter);
  CHECK_THROWS_AS(
      sideband_spectrum({0.0, 0.0}, {0.1, 0.1}, freqs, -1.0, 1e-4, {0.0}),
      InvalidParameter);
  SidebandSpectrum malformed;
  malformed.detunings = {0.0, 1.0};
  malformed.excitation = {0.1};
  CHECK_THROWS_AS(fit_nbar(malformed, {0.1, 0.1}, freqs, 1.0), InvalidParameter);
}

TEST_CASE("thermometry recovers the phonon number from noisy spectra") {
  std::mt19937_64 rng(12345);
  const std::array<double, 2> freqs{constants::two_pi * 120e3,
                                    std::sqrt(3.0) * constants::two_pi * 120e3};
  const std::array<double, 2> eps{0.08, 0.08};
  const double omega = constants::two_pi * 31e3;
  const double t = 300e-6;

  std::vector<double> detunings;
  for (int s : {-1, 1}) {
    for (int i = -6; i <= 6; ++i) {
      detunings.push_back(s * freqs[0] + constants::two_pi * 500.0 * i);
    }
  }

  std::uniform_real_distribution<double> draw(0.2, 3.0);
  const int shots = 300;
  int good = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const double truth = draw(rng);
    SidebandSpectrum spec =
        sideband_spectrum({truth, truth}, eps, freqs, omega, t, detunings);
    for (auto& p : spec.excitation) {
      std::binomial_distribution<int> dist(shots, p);
      p = double(dist(rng)) / shots;
    }
    const NbarFit fit = fit_nbar(spec, eps, freqs, omega);
    if (std::abs(fit.nbar - truth) <= 0.2 * truth) ++good;
    CHECK(fit.sigma >= 0.0);
  }
  CHECK(good >= 48);
}
