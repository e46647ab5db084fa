#include <cmath>
#include <complex>
#include <random>

#include "axygate/dynamics.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace axygate;

namespace {

PulseSchedule empty_schedule(double total_time) {
  PulseSchedule sched;
  sched.total_time = total_time;
  return sched;
}

}  // namespace

TEST_CASE("displacement closes after one full motional period without pulses") {
  const double nu = constants::two_pi * 120e3;
  const auto sched = empty_schedule(constants::two_pi / nu);
  const auto alpha = displacement_alpha(sched, 0, 9273.0, nu, sched.total_time);
  CHECK(std::abs(alpha) < 1e-9 * 9273.0 / nu);
}

TEST_CASE("displacement peaks after half a motional period without pulses") {
  const double nu = constants::two_pi * 120e3;
  const double delta = 9273.0;
  const auto sched = empty_schedule(constants::pi / nu);
  const auto alpha = displacement_alpha(sched, 0, delta, nu, sched.total_time);
  CHECK(std::abs(alpha) == doctest::Approx(2.0 * delta / nu).epsilon(1e-12));
}

TEST_CASE("displacement scales linearly in the coupling") {
  std::mt19937_64 rng(7);
  const double nu = constants::two_pi * 150e3;
  const auto sched = test_support::random_schedule(rng, 4.0 * constants::two_pi / nu);
  const auto a1 = displacement_alpha(sched, 0, 1000.0, nu, sched.total_time);
  const auto a3 = displacement_alpha(sched, 0, 3000.0, nu, sched.total_time);
  CHECK(std::abs(a3 - 3.0 * a1) < 1e-12 * std::abs(a1) + 1e-18);
}

TEST_CASE("designed timing decouples both modes at the gate end") {
  const auto sys = test_support::reference_system();
  const auto sol = test_support::golden_solution();
  const PulseSchedule sched = solution_schedule(sol, sys.qubits);
  const double t = sched.total_time;
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      const double delta = sys.couplings.delta(j, k);
      const double nu = sys.crystal.mode_freqs[k];
      const auto alpha = displacement_alpha(sched, j, delta, nu, t);
      // in units of delta / nu
      const double scaled = std::abs(alpha) * nu / std::abs(delta);
      if (k == 0) {
        // COM loop closes each block by commensurability, so near-exactly
        CHECK(scaled < 1e-9);
      } else {
        CHECK(scaled < 1e-3);
      }
    }
  }
}

TEST_CASE("conditional phase of free evolution over one period") {
  // both ions coupled to a single mode with no pulses:
  // Phi = 2 d1 d2 (T - sin(nu T)/nu) / nu = 4 pi d1 d2 / nu^2 at T = 2 pi/nu
  const double nu = constants::two_pi * 100e3;
  CouplingMatrix c;
  c.delta << 5000.0, 0.0, 3000.0, 0.0;
  const std::array<double, 2> freqs{nu, std::sqrt(3.0) * nu};
  const auto sched = empty_schedule(constants::two_pi / nu);
  const GatePhase phase = accumulated_phase(sched, c, freqs, sched.total_time);
  const double expected = 4.0 * constants::pi * 5000.0 * 3000.0 / (nu * nu);
  CHECK(phase.phi == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("no conditional phase without second-ion coupling") {
  std::mt19937_64 rng(11);
  const double nu = constants::two_pi * 120e3;
  const std::array<double, 2> freqs{nu, std::sqrt(3.0) * nu};
  CouplingMatrix c;
  c.delta << 8000.0, 6000.0, 0.0, 0.0;
  const auto sched = test_support::random_schedule(rng, 3.0 * constants::two_pi / nu);
  const GatePhase phase = accumulated_phase(sched, c, freqs, sched.total_time);
  CHECK(std::abs(phase.phi) < 1e-15);
}

TEST_CASE("observed phase is twice the conditional phase") {
  std::mt19937_64 rng(13);
  const auto sys = test_support::reference_system();
  for (int trial = 0; trial < 5; ++trial) {
    const auto sched = test_support::random_schedule(
        rng, 2.0 * constants::two_pi / sys.crystal.mode_freqs[0]);
    const GatePhase phase = accumulated_phase(
        sched, sys.couplings, sys.crystal.mode_freqs, sched.total_time);
    CHECK(phase.phi_observed == doctest::Approx(2.0 * phase.phi).epsilon(1e-15));
  }
}

TEST_CASE("conditional phase is odd under flipping one coupling column") {
  std::mt19937_64 rng(17);
  const auto sys = test_support::reference_system();
  const auto sched = test_support::random_schedule(
      rng, 2.5 * constants::two_pi / sys.crystal.mode_freqs[0]);
  CouplingMatrix flipped = sys.couplings;
  flipped.delta.row(1) *= -1.0;
  const double a = accumulated_phase(sched, sys.couplings,
                                     sys.crystal.mode_freqs, sched.total_time)
                       .phi;
  const double b = accumulated_phase(sched, flipped, sys.crystal.mode_freqs,
                                     sched.total_time)
                       .phi;
  CHECK(b == doctest::Approx(-a).epsilon(1e-12));
}

TEST_CASE("analytic displacement matches quadrature on random schedules") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> freq(constants::two_pi * 60e3,
                                              constants::two_pi * 400e3);
  std::uniform_real_distribution<double> coupling(500.0, 20000.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double nu = freq(rng);
    const double delta = coupling(rng);
    const double total = (1.0 + 3.0 * (trial % 7) / 6.0) * constants::two_pi / nu;
    const auto sched = test_support::random_schedule(rng, total);
    for (int ch = 0; ch < 2; ++ch) {
      const auto exact = displacement_alpha(sched, ch, delta, nu, total);
      const auto quad =
          test_support::alpha_quadrature(sched, ch, delta, nu, total);
      const double scale = std::max(std::abs(exact), delta / nu);
      CHECK(std::abs(exact - quad) <= 1e-9 * scale);
    }
  }
}

TEST_CASE("analytic conditional phase matches double quadrature") {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> freq(constants::two_pi * 60e3,
                                              constants::two_pi * 250e3);
  std::uniform_real_distribution<double> coupling(500.0, 15000.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double nu1 = freq(rng);
    const std::array<double, 2> freqs{nu1, std::sqrt(3.0) * nu1};
    CouplingMatrix c;
    c.delta << coupling(rng), coupling(rng), coupling(rng), -coupling(rng);
    const double total = (1.0 + 2.0 * (trial % 5) / 4.0) * constants::two_pi / nu1;
    const auto sched = test_support::random_schedule(rng, total);
    const double exact =
        accumulated_phase(sched, c, freqs, total).phi;
    const double quad = test_support::phi_quadrature(sched, c, freqs, total);
    const double scale =
        std::max(std::abs(exact), std::abs(c.delta(0, 0) * c.delta(1, 0)) /
                                      (nu1 * nu1));
    CHECK(std::abs(exact - quad) <= 1e-9 * scale);
  }
}

TEST_CASE("partial-time evaluation stays consistent with quadrature") {
  std::mt19937_64 rng(303);
  const double nu = constants::two_pi * 130e3;
  const auto sched = test_support::random_schedule(rng, 3.0 * constants::two_pi / nu);
  const double t = 0.4 * sched.total_time;
  const auto exact = displacement_alpha(sched, 0, 4000.0, nu, t);
  const auto quad = test_support::alpha_quadrature(sched, 0, 4000.0, nu, t);
  CHECK(std::abs(exact - quad) < 1e-9 * std::max(std::abs(exact), 4000.0 / nu));
}

TEST_CASE("thermal weights follow the geometric distribution") {
  const auto w = thermal_weights(1.0, 40);
  CHECK(w[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(w[1] == doctest::Approx(0.25).epsilon(1e-12));
  double sum = 0.0;
  for (double v : w) sum += v;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  // ground state is deterministic
  const auto cold = thermal_weights(0.0, 5);
  CHECK(cold[0] == doctest::Approx(1.0));
  CHECK(cold[1] == doctest::Approx(0.0));
}

TEST_CASE("thermal weights reject truncations that drop too much mass") {
  CHECK_THROWS_AS(thermal_weights(10.0, 5), TruncationError);
  CHECK_NOTHROW(thermal_weights(1.0, 40));
}

TEST_CASE("thermal average recovers the mean phonon number") {
  const double nbar = 1.7;
  const double mean =
      thermal_average([](int n) { return double(n); }, nbar, 80);
  CHECK(mean == doctest::Approx(nbar).epsilon(1e-5));
  CHECK(thermal_average([](int n) { return 1.0; }, 0.5, 40) ==
        doctest::Approx(1.0).epsilon(1e-6));
}
