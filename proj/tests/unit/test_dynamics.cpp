#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "precs/bosonic.hpp"
#include "precs/dynamics.hpp"
#include "precs/errors.hpp"
#include "precs/models.hpp"
#include "precs/reference.hpp"
#include "test_support.hpp"

using namespace precs;
using precs::testing::random_hermitian;
using precs::testing::random_joint_state;
using precs::testing::random_qubit;
using precs::testing::series_coherent;

namespace {

constexpr double kPi = std::numbers::pi;

const QubitVector kPlusMinus = QubitVector(1.0, 1.0) / std::sqrt(2.0);

DensityOperator qubit_pure(const QubitVector& q) {
  return DensityOperator::pure(q, Signature::qubit());
}

OperatorFunction constant(const Operator& op) {
  return [op](double) { return op; };
}

JumpChannel constant_jump(double rate, const Operator& op) {
  return {[rate](double) { return rate; }, constant(op)};
}

Operator zero_qubit() { return Operator::zero(Signature::qubit()); }

}  // namespace

TEST(EvolveExact, ZeroHamiltonianKeepsState) {
  std::mt19937_64 rng(51);
  const JointState psi = random_joint_state(10, 10, rng);
  const std::vector<double> times{0.0, 0.5, 3.0};
  const StateTrajectory traj =
      evolve_exact(Operator::zero(Signature::joint(10)), psi, times);
  for (const auto& s : traj.states) {
    EXPECT_LT((s.amplitudes() - psi.amplitudes()).norm(), 1e-15);
  }
}

TEST(EvolveExact, FreeOscillatorRotatesCoherentLabel) {
  const int n = 30;
  const double omega = 1.7;
  const Complex alpha0(0.9, -0.4);
  const FockSpace fs(n);
  const Operator H = omega * tensor(qubit::identity(), number_operator(fs));
  const QubitVector q(0.6, Complex(0.0, 0.8));
  const std::vector<double> times{0.0, 0.3, 1.1, 2.0 * kPi / omega};
  const StateTrajectory traj =
      evolve_exact(H, JointState::product(q, series_coherent(n, alpha0)), times);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const Complex label = hamilton_flow(omega, alpha0, times[i]);
    const JointState expected = JointState::product(q, series_coherent(n, label));
    EXPECT_LT((traj.states[i].amplitudes() - expected.amplitudes()).norm(), 1e-12)
        << "t=" << times[i];
  }
}

TEST(EvolveExact, PureDephasingCoherenceLaw) {
  const PureDephasingModel m(1.0, 0.3);
  const int n = 40;
  const std::vector<double> times = uniform_times(4.0 * kPi, 41);
  const StateTrajectory traj = evolve_exact(
      hamiltonian(m, FockSpace(n)), JointState::product(kPlusMinus, series_coherent(n, 0.0)),
      times);
  const Trajectory reduced = traj.reduced();
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double expected = 0.5 * std::exp(-2.0 * std::norm(beta(m, times[i])));
    EXPECT_NEAR(std::abs(reduced.states[i](0, 1)), expected, 1e-10) << "t=" << times[i];
    EXPECT_NEAR(reduced.states[i](0, 0).real(), 0.5, 1e-12);
  }
  EXPECT_FALSE(reduced.positivity_breach);
  EXPECT_LT(reduced.max_trace_dev(), 1e-12);
}

TEST(EvolveExact, NormPreservedOverManySteps) {
  std::mt19937_64 rng(52);
  const int n = 20;
  const Operator H(Signature::joint(n), random_hermitian(2 * n, rng));
  const std::vector<double> times = uniform_times(10.0, 1001);
  const StateTrajectory traj = evolve_exact(H, random_joint_state(n, n, rng), times);
  EXPECT_LT(traj.max_norm_drift, 1e-10);
  EXPECT_EQ(traj.states.size(), times.size());
}

TEST(EvolveExact, RejectsBadInput) {
  std::mt19937_64 rng(53);
  const JointState psi = random_joint_state(4, 4, rng);
  const Operator H(Signature::joint(4), precs::testing::random_matrix(8, rng));
  const std::vector<double> times{0.0, 1.0};
  EXPECT_THROW(evolve_exact(H, psi, times), ContractError);
  const Operator Hh(Signature::joint(4), random_hermitian(8, rng));
  const std::vector<double> backwards{1.0, 0.5};
  EXPECT_THROW(evolve_exact(Hh, psi, backwards), ContractError);
  const std::vector<double> empty;
  EXPECT_THROW(evolve_exact(Hh, psi, empty), ContractError);
}

TEST(HamiltonFlow, PeriodicAndNormPreserving) {
  const Complex a0(0.4, 1.2);
  EXPECT_LT(std::abs(hamilton_flow(2.0, a0, kPi) - a0), 1e-14);
  EXPECT_LT(std::abs(hamilton_flow(2.0, a0, kPi / 4.0) - Complex(0.0, -1.0) * a0), 1e-14);
  EXPECT_NEAR(std::abs(hamilton_flow(0.7, a0, 3.3)), std::abs(a0), 1e-14);
}

TEST(EvolveGksl, UnitaryPhaseFromSigmaZ) {
  const double h = 0.8;
  const std::vector<double> times = uniform_times(3.0, 7);
  const Trajectory traj =
      evolve_gksl(constant(h * qubit::sigma_z()), {}, qubit_pure(kPlusMinus), times);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const Complex expected = 0.5 * std::exp(Complex(0.0, -2.0 * h * times[i]));
    EXPECT_LT(std::abs(traj.states[i](0, 1) - expected), 1e-12) << "t=" << times[i];
  }
}

TEST(EvolveGksl, ConstantDephasing) {
  const double rate = 0.35;
  const std::vector<double> times = uniform_times(4.0, 9);
  const Trajectory traj = evolve_gksl(constant(zero_qubit()),
                                      {constant_jump(rate, qubit::sigma_z())},
                                      qubit_pure(kPlusMinus), times);
  for (std::size_t i = 0; i < times.size(); ++i) {
    EXPECT_NEAR(traj.states[i](0, 1).real(), 0.5 * std::exp(-2.0 * rate * times[i]), 1e-12);
    EXPECT_NEAR(traj.states[i](0, 0).real(), 0.5, 1e-14);
  }
}

TEST(EvolveGksl, RaisingJumpEmptiesMinusState) {
  const double rate = 1.0;
  const std::vector<double> times = uniform_times(5.0, 11);
  const Trajectory traj = evolve_gksl(constant(zero_qubit()),
                                      {constant_jump(rate, qubit::sigma_plus())},
                                      qubit_pure(kPlusMinus), times);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    EXPECT_NEAR(traj.states[i](1, 1).real(), 0.5 * std::exp(-rate * t), 1e-12);
    EXPECT_NEAR(std::abs(traj.states[i](0, 1)), 0.5 * std::exp(-0.5 * rate * t), 1e-12);
  }
  EXPECT_LT(traj.max_trace_dev(), 1e-13);
  EXPECT_FALSE(traj.positivity_breach);
}

TEST(EvolveGksl, TimeDependentRateMatchesIntegral) {
  // rate(t) = t gives coherence 0.5 exp(-t^2).
  const std::vector<double> times = uniform_times(2.0, 5);
  const JumpChannel jump{[](double t) { return t; }, constant(qubit::sigma_z())};
  const Trajectory traj =
      evolve_gksl(constant(zero_qubit()), {jump}, qubit_pure(kPlusMinus), times);
  for (std::size_t i = 0; i < times.size(); ++i) {
    EXPECT_NEAR(traj.states[i](0, 1).real(), 0.5 * std::exp(-times[i] * times[i]), 1e-11);
  }
}

TEST(EvolveGksl, StartsAtFirstRequestedTime) {
  const std::vector<double> times{1.0, 2.0};
  const Trajectory traj = evolve_gksl(constant(zero_qubit()),
                                      {constant_jump(0.5, qubit::sigma_z())},
                                      qubit_pure(kPlusMinus), times);
  EXPECT_LT(std::abs(traj.states[0](0, 1) - 0.5), 1e-15);
  EXPECT_NEAR(traj.states[1](0, 1).real(), 0.5 * std::exp(-1.0), 1e-12);
}

TEST(EvolveGksl, NegativeRateIsRejected) {
  const std::vector<double> times = uniform_times(1.0, 3);
  EXPECT_THROW(evolve_gksl(constant(zero_qubit()), {constant_jump(-0.1, qubit::sigma_z())},
                           qubit_pure(kPlusMinus), times),
               ContractError);
  IntegratorOptions bad;
  bad.dt = 0.0;
  EXPECT_THROW(evolve_gksl(constant(zero_qubit()), {}, qubit_pure(kPlusMinus), times, bad),
               ConfigError);
}

TEST(EvolveGksl, FourthOrderInTimeStep) {
  const auto run = [](double dt) {
    const std::vector<double> times{0.0, 2.0};
    const JumpChannel jump{[](double t) { return 1.0 + std::sin(3.0 * t); },
                           constant(qubit::sigma_plus())};
    IntegratorOptions options;
    options.dt = dt;
    return evolve_gksl(constant(qubit::sigma_x()), {jump}, qubit_pure(kPlusMinus), times,
                       options)
        .states.back();
  };
  const Operator fine = run(1e-3);
  const double e1 = max_norm(run(0.2) - fine);
  const double e2 = max_norm(run(0.1) - fine);
  EXPECT_GT(e1 / e2, 12.0);
  EXPECT_LT(e1 / e2, 20.0);
}

TEST(Decoupled, SingleBranchEqualsGksl) {
  const QubitVector q(0.8, Complex(0.0, 0.6));
  const std::vector<double> times = uniform_times(2.0, 5);
  const Operator P = qubit_pure(q).op();
  Branch branch{1.0, [](double) { return Complex(0.0); },
                {{[](Complex, double) { return 0.4; },
                  [](Complex, double) { return qubit::sigma_z(); }}},
                P};
  const Operator H = 0.3 * qubit::sigma_x();
  const Trajectory d = evolve_decoupled_markov(constant(H), {branch}, times);
  const Trajectory g = evolve_gksl(constant(H), {constant_jump(0.4, qubit::sigma_z())},
                                   qubit_pure(q), times);
  for (std::size_t i = 0; i < times.size(); ++i) {
    EXPECT_LT(max_norm(d.states[i] - g.states[i]), 1e-14);
  }
}

TEST(Decoupled, LabelIndependentChannelsAreLinear) {
  std::mt19937_64 rng(54);
  const QubitVector q1 = random_qubit(rng);
  const QubitVector q2 = random_qubit(rng);
  const std::vector<double> times = uniform_times(1.5, 4);
  const auto channel = BranchChannel{[](Complex, double) { return 0.7; },
                                     [](Complex, double) { return qubit::sigma_plus(); }};
  const auto label = [](double) { return Complex(0.0); };
  const std::vector<Branch> branches{{0.25, label, {channel}, qubit_pure(q1).op()},
                                     {0.75, label, {channel}, qubit_pure(q2).op()}};
  const Operator H = 0.5 * qubit::sigma_y();
  const Trajectory d = evolve_decoupled_markov(constant(H), branches, times);
  const DensityOperator mixed(0.25 * qubit_pure(q1).op() + 0.75 * qubit_pure(q2).op());
  const Trajectory g =
      evolve_gksl(constant(H), {constant_jump(0.7, qubit::sigma_plus())}, mixed, times);
  for (std::size_t i = 0; i < times.size(); ++i) {
    EXPECT_LT(max_norm(d.states[i] - g.states[i]), 1e-13);
  }
}

TEST(Decoupled, BranchLabelsReachTheChannels) {
  // gamma = |label|^2 with label(t) = t dephases at rate t^2.
  const std::vector<double> times = uniform_times(1.0, 3);
  Branch branch{1.0, [](double t) { return Complex(t, 0.0); },
                {{[](Complex a, double) { return std::norm(a); },
                  [](Complex, double) { return qubit::sigma_z(); }}},
                qubit_pure(kPlusMinus).op()};
  const Trajectory d = evolve_decoupled_markov(constant(zero_qubit()), {branch}, times);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    EXPECT_NEAR(d.states[i](0, 1).real(), 0.5 * std::exp(-2.0 * t * t * t / 3.0), 1e-11);
  }
}

TEST(Decoupled, RejectsBadBranches) {
  const std::vector<double> times = uniform_times(1.0, 3);
  const auto label = [](double) { return Complex(0.0); };
  const Operator P = qubit_pure(kPlusMinus).op();
  EXPECT_THROW(evolve_decoupled_markov(constant(zero_qubit()), {{0.6, label, {}, P}}, times),
               ConfigError);
  EXPECT_THROW(evolve_decoupled_markov(constant(zero_qubit()), {}, times), ConfigError);
  EXPECT_THROW(evolve_decoupled_markov(constant(zero_qubit()),
                                       {{1.0, label, {}, 0.5 * qubit::identity()}}, times),
               ContractError);
}

TEST(CoefficientB, ZeroHamiltonian) {
  std::mt19937_64 rng(55);
  const JointState psi = random_joint_state(10, 10, rng);
  const auto b = coefficient_b(Operator::zero(Signature::joint(10)), psi, Complex(0.3, 0.2));
  EXPECT_EQ(b[0], Complex(0.0));
  EXPECT_EQ(b[1], Complex(0.0));
}

TEST(CoefficientB, VacuumUnderPureDephasing) {
  const PureDephasingModel m(1.0, 0.4);
  const int n = 10;
  const JointState psi = JointState::product({1.0, 0.0}, series_coherent(n, 0.0));
  const Operator H = hamiltonian(m, FockSpace(n));
  for (Complex alpha : {Complex(0.0), Complex(0.5, -1.0), Complex(-1.5, 0.3)}) {
    const auto b = coefficient_b(H, psi, alpha);
    const Complex expected = -kI * m.g * std::exp(-0.5 * std::norm(alpha)) * std::conj(alpha);
    EXPECT_LT(std::abs(b[0] - expected), 1e-15);
    EXPECT_EQ(b[1], Complex(0.0));
  }
}

TEST(CoefficientB, MatchesMatrixProductOracle) {
  std::mt19937_64 rng(56);
  const int n = 12;
  const Operator H(Signature::joint(n), random_hermitian(2 * n, rng));
  const JointState psi = random_joint_state(n, n, rng);
  const Vector dc = -kI * (H.matrix() * psi.amplitudes());
  const PhaseSpaceGrid grid = make_grid(2.0, 0.5);
  const auto field = coefficient_b_field(H, psi, grid);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    for (int k = 0; k < 2; ++k) {
      Complex s = 0.0;
      for (int xi = 0; xi < n; ++xi) s += dc(k * n + xi) * reference::bra_fock(grid.alpha(j), xi);
      EXPECT_LT(std::abs(field[j][k] - s), 1e-12);
    }
  }
}

TEST(TrajectoryCsv, HeaderAndRows) {
  const std::vector<double> times = uniform_times(1.0, 4);
  const Trajectory traj = evolve_gksl(constant(zero_qubit()), {}, qubit_pure(kPlusMinus), times);
  std::ostringstream out;
  write_trajectory_csv(out, traj);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,re_rho_pp,re_rho_mm,re_rho_pm,im_rho_pm,trace_dev,min_eig");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 4);
}

TEST(UniformTimes, EndpointsAndSpacing) {
  const auto t = uniform_times(2.0, 5);
  ASSERT_EQ(t.size(), 5u);
  EXPECT_EQ(t.front(), 0.0);
  EXPECT_EQ(t.back(), 2.0);
  EXPECT_DOUBLE_EQ(t[1], 0.5);
  EXPECT_THROW(uniform_times(2.0, 1), ConfigError);
  EXPECT_THROW(uniform_times(0.0, 5), ConfigError);
}
