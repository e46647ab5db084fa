#include "axygate/fock.hpp"

#include <algorithm>
#include <cmath>

namespace axygate {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

double sinc(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

int branch_s1(int b) { return b < 2 ? 1 : -1; }
int branch_s2(int b) { return b % 2 == 0 ? 1 : -1; }

Eigen::Matrix4cd kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Eigen::Matrix4cd out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    }
  }
  return out;
}

double default_step(const PulseSchedule& schedule,
                    const std::array<double, 2>& mode_freqs,
                    const FockConfig& config) {
  if (config.integrator_step > 0.0) return config.integrator_step;
  double dt = constants::two_pi / std::max(mode_freqs[0], mode_freqs[1]);
  for (const auto& p : schedule.pulses) {
    if (p.duration > 0.0) dt = std::min(dt, p.duration);
  }
  return dt / 50.0;
}

/// Eigenbasis of x = a + a^dag on the truncated ladder, shared by all slices.
struct ModeWorkspace {
  Eigen::VectorXd xev;
  Eigen::MatrixXd v;  // columns are eigenvectors

  explicit ModeWorkspace(int cutoff) {
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(cutoff, cutoff);
    for (int i = 1; i < cutoff; ++i) {
      x(i, i - 1) = x(i - 1, i) = std::sqrt(double(i));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(x);
    xev = solver.eigenvalues();
    v = solver.eigenvectors();
  }

  /// exp(-i dt c_eff x), dense.
  Eigen::MatrixXcd coupling_step(double c_eff, double dt) const {
    Eigen::VectorXcd d = (-kI * dt * c_eff * xev.array()).exp();
    return (v * d.asDiagonal()) * v.transpose();
  }
};

/// One interaction-picture slice on one mode: R M R^dag with
/// R = diag(exp(i nu t_mid n)). Applied in place; mode 0 acts on rows,
/// mode 1 on columns.
void apply_slice(Eigen::MatrixXcd& psi, const Eigen::MatrixXcd& m, double nu,
                 double t_mid, int mode) {
  const int n = int(mode == 0 ? psi.rows() : psi.cols());
  Eigen::VectorXcd r(n);
  for (int i = 0; i < n; ++i) r(i) = std::exp(kI * (nu * t_mid * i));
  if (mode == 0) {
    psi = r.asDiagonal() * (m * (r.conjugate().asDiagonal() * psi).eval());
  } else {
    psi = ((psi * r.conjugate().asDiagonal()).eval() * m.transpose()) *
          r.asDiagonal();
  }
}

struct SliceSet {
  // per branch, per mode
  std::array<std::array<Eigen::MatrixXcd, 2>, 4> m;
};

SliceSet make_slices(const std::array<ModeWorkspace, 2>& ws,
                     const CouplingMatrix& couplings,
                     const std::array<double, 2>& mode_freqs, double dt) {
  SliceSet s;
  for (int b = 0; b < 4; ++b) {
    for (int k = 0; k < 2; ++k) {
      const double c = branch_s1(b) * couplings.delta(0, k) +
                       branch_s2(b) * couplings.delta(1, k);
      // slice-averaged coupling: exact displacement for a constant c over dt
      const double c_eff = c * sinc(mode_freqs[k] * dt / 2.0);
      s.m[b][k] = ws[k].coupling_step(c_eff, dt);
    }
  }
  return s;
}

void check_leakage(const FockState& state, double tolerance) {
  double pop = 0.0;
  for (const auto& psi : state.psi) {
    const int n1 = int(psi.rows()), n2 = int(psi.cols());
    pop += psi.row(n1 - 1).squaredNorm() + psi.col(n2 - 1).squaredNorm();
  }
  if (pop > tolerance) {
    throw TruncationError("Fock truncation leakage " + std::to_string(pop) +
                          " exceeds tolerance; raise cutoff_per_mode");
  }
}

void apply_spin(FockState& state, const Eigen::Matrix4cd& u) {
  std::array<Eigen::MatrixXcd, 4> out;
  for (int b = 0; b < 4; ++b) {
    out[b] = u(b, 0) * state.psi[0];
    for (int bp = 1; bp < 4; ++bp) out[b] += u(b, bp) * state.psi[bp];
  }
  state.psi = std::move(out);
}

Eigen::Matrix4cd pulse_kick(const Pulse& p) {
  const Eigen::Matrix2cd r = qubit_rotation(p.angle, p.phase);
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  return p.channel == 0 ? kron2(r, id) : kron2(id, r);
}

void evolve_free(FockState& state, double t0, double t1,
                 const std::array<ModeWorkspace, 2>& ws,
                 const CouplingMatrix& couplings,
                 const std::array<double, 2>& mode_freqs, double dt_max) {
  if (t1 <= t0) return;
  const int nstep = std::max(1, int(std::ceil((t1 - t0) / dt_max)));
  const double dt = (t1 - t0) / nstep;
  const SliceSet slices = make_slices(ws, couplings, mode_freqs, dt);
  for (int step = 0; step < nstep; ++step) {
    const double t_mid = t0 + (step + 0.5) * dt;
    for (int b = 0; b < 4; ++b) {
      for (int k = 0; k < 2; ++k) {
        apply_slice(state.psi[b], slices.m[b][k], mode_freqs[k], t_mid, k);
      }
    }
  }
}

/// Finite-width window: Strang splitting of carrier driving against the
/// spin-motion coupling. `active` holds the pulse covering this window per
/// channel, or nullptr.
void evolve_driven(FockState& state, double t0, double t1,
                   const std::array<const Pulse*, 2>& active,
                   const std::array<ModeWorkspace, 2>& ws,
                   const CouplingMatrix& couplings,
                   const std::array<double, 2>& mode_freqs, double dt_max) {
  if (t1 <= t0) return;
  const int nstep = std::max(1, int(std::ceil((t1 - t0) / dt_max)));
  const double dt = (t1 - t0) / nstep;
  const SliceSet half = make_slices(ws, couplings, mode_freqs, dt / 2.0);
  Eigen::Matrix4cd kick = Eigen::Matrix4cd::Identity();
  for (int ch = 0; ch < 2; ++ch) {
    if (!active[ch]) continue;
    Pulse slice = *active[ch];
    slice.channel = ch;
    slice.angle = active[ch]->angle * dt / active[ch]->duration;
    kick = pulse_kick(slice) * kick;
  }
  for (int step = 0; step < nstep; ++step) {
    const double ta = t0 + step * dt;
    for (int b = 0; b < 4; ++b) {
      for (int k = 0; k < 2; ++k) {
        apply_slice(state.psi[b], half.m[b][k], mode_freqs[k], ta + 0.25 * dt, k);
      }
    }
    apply_spin(state, kick);
    for (int b = 0; b < 4; ++b) {
      for (int k = 0; k < 2; ++k) {
        apply_slice(state.psi[b], half.m[b][k], mode_freqs[k], ta + 0.75 * dt, k);
      }
    }
  }
}

}  // namespace

double FockState::norm() const {
  double acc = 0.0;
  for (const auto& p : psi) acc += p.squaredNorm();
  return std::sqrt(acc);
}

std::complex<double> FockState::overlap(const FockState& other) const {
  std::complex<double> acc{0.0, 0.0};
  for (int b = 0; b < 4; ++b) {
    acc += (psi[b].conjugate().cwiseProduct(other.psi[b])).sum();
  }
  return acc;
}

Eigen::Matrix2cd qubit_rotation(double angle, double phase) {
  Eigen::Matrix2cd r;
  const double c = std::cos(angle / 2.0), s = std::sin(angle / 2.0);
  r << c, -kI * s * std::exp(kI * phase),
       -kI * s * std::exp(-kI * phase), c;
  return r;
}

FockState fock_initial(int cutoff, const Eigen::Vector4cd& spin_amps, int n1,
                       int n2) {
  if (cutoff < 2) throw InvalidParameter("fock_initial: cutoff must be >= 2");
  if (n1 < 0 || n1 >= cutoff || n2 < 0 || n2 >= cutoff) {
    throw InvalidParameter("fock_initial: Fock numbers outside cutoff");
  }
  FockState st;
  for (int b = 0; b < 4; ++b) {
    st.psi[b] = Eigen::MatrixXcd::Zero(cutoff, cutoff);
    st.psi[b](n1, n2) = spin_amps(b);
  }
  return st;
}

FockState brute_force_propagator(const PulseSchedule& schedule,
                                 const std::array<double, 2>& mode_freqs,
                                 const CouplingMatrix& couplings,
                                 const FockConfig& config,
                                 const FockState& initial) {
  const int cutoff = int(initial.psi[0].rows());
  const std::array<ModeWorkspace, 2> ws{ModeWorkspace(cutoff),
                                        ModeWorkspace(int(initial.psi[0].cols()))};
  const double dt_max = default_step(schedule, mode_freqs, config);
  FockState state = initial;

  if (!config.resolved_pulses) {
    double t_prev = 0.0;
    for (const auto& p : schedule.pulses) {
      evolve_free(state, t_prev, p.center, ws, couplings, mode_freqs, dt_max);
      apply_spin(state, pulse_kick(p));
      t_prev = p.center;
      check_leakage(state, config.leakage_tolerance);
    }
    evolve_free(state, t_prev, schedule.total_time, ws, couplings, mode_freqs,
                dt_max);
  } else {
    // Split the timeline at every pulse-window edge; inside a window the
    // carrier drive runs concurrently with the coupling.
    std::vector<double> edges{0.0, schedule.total_time};
    for (const auto& p : schedule.pulses) {
      edges.push_back(std::clamp(p.center - 0.5 * p.duration, 0.0,
                                 schedule.total_time));
      edges.push_back(std::clamp(p.center + 0.5 * p.duration, 0.0,
                                 schedule.total_time));
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      const double mid = 0.5 * (edges[i] + edges[i + 1]);
      std::array<const Pulse*, 2> active{nullptr, nullptr};
      for (const auto& p : schedule.pulses) {
        if (p.duration > 0.0 && mid > p.center - 0.5 * p.duration &&
            mid < p.center + 0.5 * p.duration) {
          active[p.channel] = &p;
        }
      }
      if (active[0] || active[1]) {
        evolve_driven(state, edges[i], edges[i + 1], active, ws, couplings,
                      mode_freqs, dt_max);
      } else {
        evolve_free(state, edges[i], edges[i + 1], ws, couplings, mode_freqs,
                    dt_max);
      }
      check_leakage(state, config.leakage_tolerance);
    }
  }
  check_leakage(state, config.leakage_tolerance);
  return state;
}

FockState analytic_prediction(const PulseSchedule& schedule,
                              const std::array<double, 2>& mode_freqs,
                              const CouplingMatrix& couplings, int cutoff,
                              const Eigen::Vector4cd& spin_amps, int n1,
                              int n2) {
  const double t = schedule.total_time;
  std::array<std::array<std::complex<double>, 2>, 2> alpha;  // [ion][mode]
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      alpha[j][k] = displacement_alpha(schedule, j, couplings.delta(j, k),
                                       mode_freqs[k], t);
    }
  }
  const GatePhase phase = accumulated_phase(schedule, couplings, mode_freqs, t);

  auto displacement = [cutoff](std::complex<double> gamma) -> Eigen::MatrixXcd {
    Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(cutoff, cutoff);
    for (int i = 1; i < cutoff; ++i) {
      k(i, i - 1) = -kI * gamma * std::sqrt(double(i));
      k(i - 1, i) = kI * std::conj(gamma) * std::sqrt(double(i));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(k);
    Eigen::VectorXcd e =
        (kI * solver.eigenvalues().cast<std::complex<double>>().array()).exp();
    return (solver.eigenvectors() * e.asDiagonal()) *
           solver.eigenvectors().adjoint();
  };

  // time-ordered product of the pulse rotations per channel
  std::array<Eigen::Matrix2cd, 2> p_chan{Eigen::Matrix2cd::Identity(),
                                         Eigen::Matrix2cd::Identity()};
  for (const auto& p : schedule.pulses) {
    p_chan[p.channel] = qubit_rotation(p.angle, p.phase) * p_chan[p.channel];
  }
  const Eigen::Matrix4cd p4 = kron2(p_chan[0], p_chan[1]);

  FockState pred;
  for (int b = 0; b < 4; ++b) {
    const int s1 = branch_s1(b), s2 = branch_s2(b);
    const std::complex<double> g1 = double(s1) * alpha[0][0] + double(s2) * alpha[1][0];
    const std::complex<double> g2 = double(s1) * alpha[0][1] + double(s2) * alpha[1][1];
    const Eigen::MatrixXcd d1 = displacement(g1);
    const Eigen::MatrixXcd d2 = displacement(g2);
    pred.psi[b] = (spin_amps(b) * std::exp(kI * (phase.phi * s1 * s2))) *
                  (d1.col(n1) * d2.col(n2).transpose());
  }
  apply_spin(pred, p4);
  return pred;
}

double state_fidelity(const FockState& a, const FockState& b) {
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) {
    throw InvalidParameter("state_fidelity: zero-norm state");
  }
  return std::norm(a.overlap(b)) / (na * na * nb * nb);
}

Eigen::Matrix4cd spin_density(const FockState& state) {
  Eigen::Matrix4cd rho;
  for (int b = 0; b < 4; ++b) {
    for (int bp = 0; bp < 4; ++bp) {
      rho(b, bp) = (state.psi[bp].conjugate().cwiseProduct(state.psi[b])).sum();
    }
  }
  return rho;
}

BranchPropagator branch_propagators(const PulseSchedule& schedule,
                                    const std::array<double, 2>& mode_freqs,
                                    const CouplingMatrix& couplings,
                                    const FockConfig& config) {
  for (const auto& p : schedule.pulses) {
    if (std::abs(p.angle - constants::pi) > 1e-12) {
      throw InvalidParameter(
          "branch_propagators: requires exact pi pulses; use "
          "brute_force_propagator for general angles");
    }
  }
  const int cutoff = config.cutoff_per_mode;
  const std::array<ModeWorkspace, 2> ws{ModeWorkspace(cutoff),
                                        ModeWorkspace(cutoff)};
  const double dt_max = default_step(schedule, mode_freqs, config);

  BranchPropagator out;
  for (int b0 = 0; b0 < 4; ++b0) {
    int s1 = branch_s1(b0), s2 = branch_s2(b0);
    std::complex<double> phase{1.0, 0.0};
    std::array<Eigen::MatrixXcd, 2> w{
        Eigen::MatrixXcd::Identity(cutoff, cutoff),
        Eigen::MatrixXcd::Identity(cutoff, cutoff)};
    double t_prev = 0.0;

    auto evolve = [&](double t0, double t1) {
      if (t1 <= t0) return;
      const int nstep = std::max(1, int(std::ceil((t1 - t0) / dt_max)));
      const double dt = (t1 - t0) / nstep;
      std::array<Eigen::MatrixXcd, 2> m;
      for (int k = 0; k < 2; ++k) {
        const double c = s1 * couplings.delta(0, k) + s2 * couplings.delta(1, k);
        m[k] = ws[k].coupling_step(c * sinc(mode_freqs[k] * dt / 2.0), dt);
      }
      for (int step = 0; step < nstep; ++step) {
        const double t_mid = t0 + (step + 0.5) * dt;
        for (int k = 0; k < 2; ++k) {
          apply_slice(w[k], m[k], mode_freqs[k], t_mid, 0);
        }
      }
    };

    for (const auto& p : schedule.pulses) {
      evolve(t_prev, p.center);
      t_prev = p.center;
      int& s = (p.channel == 0) ? s1 : s2;
      // pi rotation: |0> -> -i e^{-i phi} |1>, |1> -> -i e^{i phi} |0>
      phase *= -kI * std::exp(kI * (s > 0 ? -p.phase : p.phase));
      s = -s;
    }
    evolve(t_prev, schedule.total_time);

    out.final_branch[b0] = (s1 > 0 ? 0 : 2) + (s2 > 0 ? 0 : 1);
    out.spin_phase[b0] = phase;
    out.motion[b0] = std::move(w);
  }
  return out;
}

Eigen::Matrix4cd thermal_spin_density(const BranchPropagator& prop,
                                      const Eigen::Vector4cd& spin_amps,
                                      const std::array<double, 2>& nbar,
                                      double tail_budget) {
  const int cutoff = int(prop.motion[0][0].rows());
  std::array<Eigen::VectorXd, 2> weights;
  for (int k = 0; k < 2; ++k) {
    auto p = thermal_weights(nbar[k], cutoff, tail_budget);
    weights[k] = Eigen::Map<Eigen::VectorXd>(p.data(), cutoff);
    weights[k] /= weights[k].sum();
  }
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  for (int b = 0; b < 4; ++b) {
    for (int bp = 0; bp < 4; ++bp) {
      std::complex<double> factor = spin_amps(b) * std::conj(spin_amps(bp)) *
                                    prop.spin_phase[b] *
                                    std::conj(prop.spin_phase[bp]);
      for (int k = 0; k < 2; ++k) {
        // Tr[ W_b rho_th W_bp^dag ]
        factor *= (prop.motion[bp][k].adjoint() * prop.motion[b][k] *
                   weights[k].asDiagonal())
                      .trace();
      }
      rho(prop.final_branch[b], prop.final_branch[bp]) += factor;
    }
  }
  return rho;
}

}  // namespace axygate
