#include "precs/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include "precs/csv.hpp"
#include "precs/errors.hpp"

namespace precs {

namespace {

void require_increasing(std::span<const double> times) {
  if (times.empty()) throw ContractError("time list is empty");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw ContractError("times must be strictly increasing");
    }
  }
}

void record(Trajectory& traj, double t, const Matrix& rho, const Tolerances& tol) {
  const Operator op(Signature::qubit(), rho);
  const double herm = op.hermiticity_residual();
  const Operator sym(Signature::qubit(), 0.5 * (rho + rho.adjoint()));
  const double floor = spectral_floor(sym, tol.hermitian);
  traj.times.push_back(t);
  traj.states.push_back(op);
  traj.trace_dev.push_back(std::abs(op.trace() - 1.0));
  traj.min_eig.push_back(floor);
  traj.herm_resid.push_back(herm);
  if (floor < -tol.positivity && !traj.positivity_breach) {
    traj.positivity_breach = true;
    traj.warnings.push_back("positivity breach at t=" + csv::number(t) +
                            ": min eigenvalue " + csv::number(floor));
  }
  if (herm > tol.hermitian) {
    traj.warnings.push_back("hermiticity residual " + csv::number(herm) +
                            " at t=" + csv::number(t));
  }
}

struct Generator {
  const OperatorFunction* H = nullptr;
  std::vector<JumpChannel> jumps;
};

/// Advances every state through the same step grid with RK4 and records
/// sum_i weight_i rho_i at each requested time.
Trajectory integrate(const std::vector<Generator>& generators,
                     std::vector<Matrix> states, const std::vector<double>& weights,
                     std::span<const double> times, const IntegratorOptions& options,
                     const Tolerances& tol) {
  require_increasing(times);
  if (!(options.dt > 0.0)) throw ConfigError("integrator dt must be positive");

  const auto combined = [&] {
    Matrix rho = Matrix::Zero(2, 2);
    for (std::size_t i = 0; i < states.size(); ++i) rho += weights[i] * states[i];
    return rho;
  };

  Trajectory traj;
  record(traj, times[0], combined(), tol);
  for (std::size_t s = 1; s < times.size(); ++s) {
    const double t0 = times[s - 1];
    const double gap = times[s] - t0;
    const auto steps = static_cast<long>(std::ceil(gap / options.dt - 1e-9));
    const double h = gap / static_cast<double>(std::max(1L, steps));
    for (long n = 0; n < std::max(1L, steps); ++n) {
      const double t = t0 + static_cast<double>(n) * h;
      for (std::size_t i = 0; i < states.size(); ++i) {
        const Generator& g = generators[i];
        const Matrix& y = states[i];
        const Matrix k1 = gksl_generator(*g.H, g.jumps, t, y);
        const Matrix k2 = gksl_generator(*g.H, g.jumps, t + 0.5 * h, y + 0.5 * h * k1);
        const Matrix k3 = gksl_generator(*g.H, g.jumps, t + 0.5 * h, y + 0.5 * h * k2);
        const Matrix k4 = gksl_generator(*g.H, g.jumps, t + h, y + h * k3);
        states[i] = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
    }
    record(traj, times[s], combined(), tol);
  }
  return traj;
}

}  // namespace

double Trajectory::max_trace_dev() const {
  return trace_dev.empty() ? 0.0 : *std::max_element(trace_dev.begin(), trace_dev.end());
}

double Trajectory::min_eigenvalue() const {
  return min_eig.empty() ? 0.0 : *std::min_element(min_eig.begin(), min_eig.end());
}

double Trajectory::max_hermiticity_residual() const {
  return herm_resid.empty() ? 0.0
                            : *std::max_element(herm_resid.begin(), herm_resid.end());
}

Trajectory StateTrajectory::reduced(const Tolerances& tol) const {
  Trajectory traj;
  for (std::size_t i = 0; i < states.size(); ++i) {
    record(traj, times[i], states[i].reduced().matrix(), tol);
  }
  return traj;
}

StateTrajectory evolve_exact(const Operator& H, const JointState& psi0,
                             std::span<const double> times, const Tolerances& tol) {
  if (H.signature() != Signature::joint(psi0.n_max())) {
    throw SignatureError("evolve_exact: Hamiltonian does not act on the joint space");
  }
  const double herm = H.hermiticity_residual();
  if (herm > tol.hermitian) {
    throw ContractError("evolve_exact: Hamiltonian is not Hermitian (residual " +
                        csv::number(herm) + ")");
  }
  require_increasing(times);

  std::map<double, Matrix> propagators;
  StateTrajectory out;
  Vector psi = psi0.amplitudes();
  out.times.push_back(times[0]);
  out.states.push_back(psi0);
  for (std::size_t s = 1; s < times.size(); ++s) {
    const double gap = times[s] - times[s - 1];
    auto it = propagators.find(gap);
    if (it == propagators.end()) {
      it = propagators.emplace(gap, expm(H, Complex(0.0, -gap)).matrix()).first;
    }
    psi = it->second * psi;
    out.max_norm_drift = std::max(out.max_norm_drift, std::abs(psi.norm() - 1.0));
    out.times.push_back(times[s]);
    out.states.emplace_back(psi0.n_max(), psi, tol);
  }
  return out;
}

Complex hamilton_flow(double omega, Complex alpha0, double t) {
  return alpha0 * std::exp(Complex(0.0, -omega * t));
}

Matrix gksl_generator(const OperatorFunction& H_eff,
                      const std::vector<JumpChannel>& jumps, double t,
                      const Matrix& rho) {
  const Matrix H = H_eff(t).matrix();
  Matrix out = -kI * (H * rho - rho * H);
  for (const auto& jump : jumps) {
    const double rate = jump.rate(t);
    if (rate < 0.0) {
      throw ContractError("negative jump rate " + csv::number(rate) + " at t=" +
                          csv::number(t));
    }
    if (rate == 0.0) continue;
    const Matrix L = jump.op(t).matrix();
    const Matrix LdL = L.adjoint() * L;
    out += rate * (L * rho * L.adjoint() - 0.5 * (LdL * rho + rho * LdL));
  }
  return out;
}

Trajectory evolve_gksl(const OperatorFunction& H_eff,
                       const std::vector<JumpChannel>& jumps,
                       const DensityOperator& rho0, std::span<const double> times,
                       const IntegratorOptions& options, const Tolerances& tol) {
  std::vector<Generator> gens{{&H_eff, jumps}};
  return integrate(gens, {rho0.op().matrix()}, {1.0}, times, options, tol);
}

Trajectory evolve_decoupled_markov(const OperatorFunction& H_eff,
                                   const std::vector<Branch>& branches,
                                   std::span<const double> times,
                                   const IntegratorOptions& options,
                                   const Tolerances& tol) {
  if (branches.empty()) throw ConfigError("no branches given");
  double total = 0.0;
  for (const auto& b : branches) {
    if (b.weight < 0.0) throw ConfigError("branch weights must be nonnegative");
    total += b.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw ConfigError("branch weights sum to " + csv::number(total) + ", not 1");
  }

  std::vector<Generator> gens;
  std::vector<Matrix> states;
  std::vector<double> weights;
  for (const auto& b : branches) {
    const Matrix& P = b.projector.matrix();
    if (b.projector.signature() != Signature::qubit() ||
        max_norm(Matrix(P * P - P)) > tol.hermitian ||
        b.projector.hermiticity_residual() > tol.hermitian ||
        std::abs(b.projector.trace() - 1.0) > tol.trace) {
      throw ContractError("branch projector is not a rank-1 qubit projector");
    }
    Generator g{&H_eff, {}};
    for (const auto& ch : b.channels) {
      const auto label = b.label;
      g.jumps.push_back({[label, gamma = ch.gamma](double t) { return gamma(label(t), t); },
                         [label, op = ch.op](double t) { return op(label(t), t); }});
    }
    gens.push_back(std::move(g));
    states.push_back(P);
    weights.push_back(b.weight);
  }
  return integrate(gens, std::move(states), weights, times, options, tol);
}

std::array<Complex, 2> coefficient_b(const Operator& H, const JointState& psi,
                                     Complex alpha) {
  const int n = psi.n_max();
  const Vector cdot = -kI * (H.matrix() * psi.amplitudes());
  std::vector<Complex> row(static_cast<std::size_t>(n));
  bra_fock_row(alpha, row);
  std::array<Complex, 2> b{0.0, 0.0};
  for (int k = 0; k < 2; ++k) {
    for (int xi = 0; xi < n; ++xi) b[k] += cdot(k * n + xi) * row[xi];
  }
  return b;
}

std::vector<std::array<Complex, 2>> coefficient_b_field(const Operator& H,
                                                        const JointState& psi,
                                                        const PhaseSpaceGrid& grid) {
  const int n = psi.n_max();
  const Vector cdot = -kI * (H.matrix() * psi.amplitudes());
  std::vector<std::array<Complex, 2>> out(grid.size());
#pragma omp parallel
  {
    std::vector<Complex> row(static_cast<std::size_t>(n));
#pragma omp for schedule(static)
    for (long long jj = 0; jj < static_cast<long long>(grid.size()); ++jj) {
      const auto j = static_cast<std::size_t>(jj);
      bra_fock_row(grid.alpha(j), row);
      std::array<Complex, 2> b{0.0, 0.0};
      for (int k = 0; k < 2; ++k) {
        for (int xi = 0; xi < n; ++xi) b[k] += cdot(k * n + xi) * row[xi];
      }
      out[j] = b;
    }
  }
  return out;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  csv::header(out, {"t", "re_rho_pp", "re_rho_mm", "re_rho_pm", "im_rho_pm",
                    "trace_dev", "min_eig"});
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const Operator& rho = traj.states[i];
    csv::row(out, std::array<double, 7>{traj.times[i], rho(0, 0).real(),
                                        rho(1, 1).real(), rho(0, 1).real(),
                                        rho(0, 1).imag(), traj.trace_dev[i],
                                        traj.min_eig[i]});
  }
}

std::vector<double> uniform_times(double t_end, int samples) {
  if (samples < 2 || !(t_end > 0.0)) {
    throw ConfigError("need t_end > 0 and at least 2 samples");
  }
  std::vector<double> t(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) t[i] = t_end * i / (samples - 1);
  return t;
}

}  // namespace precs
