#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "precs/bosonic.hpp"
#include "precs/operator.hpp"
#include "precs/precs.hpp"
#include "precs/tolerances.hpp"

namespace precs {

/// Reduced qubit states sampled at increasing times, with per-sample
/// conservation diagnostics. Positivity breaches are reported, never
/// corrected.
struct Trajectory {
  std::vector<double> times;
  std::vector<Operator> states;
  std::vector<double> trace_dev;   // |tr rho - 1|
  std::vector<double> min_eig;     // spectral floor of the Hermitian part
  std::vector<double> herm_resid;  // max |rho - rho^dag|
  std::vector<std::string> warnings;
  bool positivity_breach = false;

  double max_trace_dev() const;
  double min_eigenvalue() const;
  double max_hermiticity_residual() const;
};

/// Joint pure states along an exact evolution.
struct StateTrajectory {
  std::vector<double> times;
  std::vector<JointState> states;
  double max_norm_drift = 0.0;

  Trajectory reduced(const Tolerances& tol = {}) const;
};

/// psi(t) = exp(-i H (t - t0)) psi0 with t0 = times.front(). One matrix
/// exponential per distinct time gap, reused.
StateTrajectory evolve_exact(const Operator& H, const JointState& psi0,
                             std::span<const double> times,
                             const Tolerances& tol = {});

/// Coherent-state label flow under H(alpha) = omega |alpha|^2:
/// alpha(t) = alpha0 e^{-i omega t}.
Complex hamilton_flow(double omega, Complex alpha0, double t);

using OperatorFunction = std::function<Operator(double)>;
using RateFunction = std::function<double(double)>;

struct JumpChannel {
  RateFunction rate;
  OperatorFunction op;
};

struct IntegratorOptions {
  double dt = 1e-3;
};

/// drho/dt = -i[H, rho] + sum_k rate_k (L rho L^dag - {L^dag L, rho}/2),
/// classic RK4 at a fixed step no larger than dt, landing exactly on every
/// requested time. rho0 is the state at times.front(). A negative rate
/// throws ContractError.
Trajectory evolve_gksl(const OperatorFunction& H_eff,
                       const std::vector<JumpChannel>& jumps,
                       const DensityOperator& rho0, std::span<const double> times,
                       const IntegratorOptions& options = {},
                       const Tolerances& tol = {});

/// Right-hand side of the GKSL equation at time t.
Matrix gksl_generator(const OperatorFunction& H_eff,
                      const std::vector<JumpChannel>& jumps, double t,
                      const Matrix& rho);

/// Operator and rate attached to a branch, evaluated at the branch's label.
struct BranchChannel {
  std::function<double(Complex label, double t)> gamma;
  std::function<Operator(Complex label, double t)> op;
};

/// One classical-limit branch: weight p_i, label flow Omega_i(t), channels
/// (gamma_ki, F_ki) and the initial rank-1 projector P_i.
struct Branch {
  double weight;
  std::function<Complex(double)> label;
  std::vector<BranchChannel> channels;
  Operator projector;
};

/// Branch-resolved classical-limit dynamics: every P_i follows its own GKSL
/// generator and rho = sum_i p_i P_i. Throws ConfigError when the weights do
/// not sum to 1, ContractError when a P_i is not a rank-1 projector.
Trajectory evolve_decoupled_markov(const OperatorFunction& H_eff,
                                   const std::vector<Branch>& branches,
                                   std::span<const double> times,
                                   const IntegratorOptions& options = {},
                                   const Tolerances& tol = {});

/// b_k(alpha) = sum_xi (dc/dt)_{k xi} <alpha|xi> with dc/dt = -i H c.
std::array<Complex, 2> coefficient_b(const Operator& H, const JointState& psi,
                                     Complex alpha);

/// coefficient_b at every grid point.
std::vector<std::array<Complex, 2>> coefficient_b_field(const Operator& H,
                                                        const JointState& psi,
                                                        const PhaseSpaceGrid& grid);

/// Header: t,re_rho_pp,re_rho_mm,re_rho_pm,im_rho_pm,trace_dev,min_eig
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

/// times[i] = t_end * i / (samples - 1), i < samples.
std::vector<double> uniform_times(double t_end, int samples);

}  // namespace precs
