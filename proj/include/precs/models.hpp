#pragma once

#include <array>
#include <functional>
#include <vector>

#include "precs/bosonic.hpp"
#include "precs/dynamics.hpp"
#include "precs/lindblad_field.hpp"
#include "precs/operator.hpp"

namespace precs {

/// H = omega 1 (x) a^dag a + g sigma_z (x) (a + a^dag)
struct PureDephasingModel {
  PureDephasingModel(double omega, double g);
  double omega;
  double g;
};

/// H = omega 1 (x) a^dag a + g (sigma_plus (x) a + sigma_minus (x) a^dag),
/// with the classical-limit constants T_tilde and H_tilde_eff supplied by the
/// caller.
struct JaynesCummingsModel {
  JaynesCummingsModel(double omega, double g, double T_tilde = 0.0,
                      Operator H_tilde_eff = Operator::zero(Signature::qubit()));
  double omega;
  double g;
  double T_tilde;
  Operator H_tilde_eff;
};

std::vector<InteractionTerm> interaction_terms(const PureDephasingModel& m);
std::vector<InteractionTerm> interaction_terms(const JaynesCummingsModel& m);
Operator hamiltonian(const PureDephasingModel& m, const FockSpace& fs);
Operator hamiltonian(const JaynesCummingsModel& m, const FockSpace& fs);

/// beta(t) = (g/omega)(1 - e^{-i omega t})
Complex beta(const PureDephasingModel& m, double t);

/// Peak-collapsed dephasing rate T(t) = e^{-|beta|^2} |sin(g beta)|^2 / 2,
/// with the sine taken at complex argument. Evaluated in log space when the
/// hyperbolic part would overflow.
double rate_T(const PureDephasingModel& m, double t);

/// Alpha-resolved rate T(t) e^{-2 omega Im(conj(alpha) beta)}.
double rate_T_resolved(const PureDephasingModel& m, Complex alpha, double t);

/// (g^4/omega^2)(1 - cos omega t)
double rate_T_small_g(const PureDephasingModel& m, double t);

/// int_0^t T(s) ds by adaptive Gauss-Kronrod on half-period panels.
double integrated_rate(const PureDephasingModel& m, double t);

/// Classical-limit coefficients of F_pm = d_pm 1 + b_pm sigma_z for the
/// initial state (|+> + |->)/sqrt(2) (x) |Xi>. Index 0 is +, 1 is -.
struct ClassicalCoefficients {
  std::array<Complex, 2> d;
  std::array<Complex, 2> b;
};
ClassicalCoefficients classical_coefficients(const PureDephasingModel& m,
                                             Complex alpha, double t);

/// sum_k gamma_k |b_k|^2 with gamma_pm = 1/2.
double classical_rate(const PureDephasingModel& m, Complex alpha, double t);

/// Residuals of the commutator identities for Y = (g sigma_z + omega alpha)
/// (x) a^dag and Ybar = (g sigma_z + omega conj(alpha)) (x) a, measured on the
/// faithful block (Fock index < n_max/2).
struct BchResidual {
  double commutator;      // |[Y, Ybar] - closed form|
  double double_y;        // |[Y, [Y, Ybar]]|
  double double_ybar;     // |[Ybar, [Y, Ybar]]|
};
BchResidual bch_commutator_check(const PureDephasingModel& m, Complex alpha,
                                 const FockSpace& fs);

/// Time-dependent GKSL system ready for evolve_gksl.
struct ClassicalEquation {
  OperatorFunction H_eff;
  std::vector<JumpChannel> jumps;
};

/// H_eff = h(t) sigma_z and a sigma_z jump with rate T(t). The dissipator
/// T (sigma_z rho sigma_z - rho) is the standard form since sigma_z^2 = 1.
ClassicalEquation pd_classical_equation(const PureDephasingModel& m,
                                        std::function<double(double)> field);

/// Constant H_tilde_eff and a sigma_plus jump with rate T_tilde. Throws
/// ConfigError when T_tilde < 0 or H_tilde_eff is not a Hermitian qubit
/// operator.
ClassicalEquation jc_classical_equation(const JaynesCummingsModel& m);

/// e^{-i g sigma_minus (x) a^dag} e^{-i omega alpha 1 (x) a^dag} |q>|0>, with
/// the second factor normalized as the coherent state |-i omega alpha>. The
/// first factor is exactly 1 - i g sigma_minus (x) a^dag because
/// sigma_minus^2 = 0.
Vector jc_factorized_displacement(const JaynesCummingsModel& m, Complex alpha,
                                  const QubitVector& qubit_state,
                                  const FockSpace& fs, const Tolerances& tol = {});

/// One row per coupling: T(t) over one period, normalized by its maximum,
/// and the fraction of the period where it is below `threshold`.
struct StrongCouplingRow {
  double g;
  double max_T;
  double fraction_below;
  std::vector<double> times;
  std::vector<double> T;
  std::vector<double> T_normalized;
};
std::vector<StrongCouplingRow> strong_coupling_report(double omega,
                                                      const std::vector<double>& g_list,
                                                      double threshold = 0.01,
                                                      int samples = 4096);

/// h = sum_j w_j (1/chi2_j) sum_k Im(a_k b_k + |a_k|^2 conj(d_k) bz_k) over
/// active points, where b_k is coefficient_b and F_k = d_k 1 + bz_k sigma_z.
double pd_effective_field(const ParametricField& field, const LindbladField& lfield,
                          const std::vector<std::array<Complex, 2>>& b);

}  // namespace precs
