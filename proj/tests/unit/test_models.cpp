#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include <json.hpp>

#include "precs/bosonic.hpp"
#include "precs/errors.hpp"
#include "precs/models.hpp"
#include "test_support.hpp"

using namespace precs;
using precs::testing::random_qubit;

namespace {

constexpr double kPi = std::numbers::pi;

nlohmann::json load_golden() {
  std::ifstream in(std::string(PRECS_GOLDEN_DIR) + "/pure_dephasing.json");
  return nlohmann::json::parse(in);
}

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

}  // namespace

TEST(Models, RejectInvalidParameters) {
  EXPECT_THROW(PureDephasingModel(0.0, 0.1), ConfigError);
  EXPECT_THROW(PureDephasingModel(1.0, -0.1), ConfigError);
  EXPECT_THROW(JaynesCummingsModel(-1.0, 0.1), ConfigError);
}

TEST(Beta, Examples) {
  const PureDephasingModel m(1.0, 0.5);
  EXPECT_EQ(beta(m, 0.0), Complex(0.0));
  EXPECT_LT(std::abs(beta(m, kPi) - 1.0), 1e-15);
  EXPECT_LT(std::abs(beta(m, 2.0 * kPi)), 1e-15);
  EXPECT_LT(std::abs(beta(m, kPi / 2.0) - Complex(0.5, 0.5)), 1e-15);
}

TEST(RateT, MatchesGoldenValues) {
  const auto golden = load_golden();
  for (const auto& row : golden["rate"]) {
    const PureDephasingModel m(row["omega"].get<double>(), row["g"].get<double>());
    const double t = row["t"].get<double>();
    const Complex b = beta(m, t);
    EXPECT_NEAR(b.real(), row["re_beta"].get<double>(), 1e-15);
    EXPECT_NEAR(b.imag(), row["im_beta"].get<double>(), 1e-15);
    const double expected = row["T"].get<double>();
    EXPECT_NEAR(rate_T(m, t), expected, 1e-12 * std::max(1.0, expected))
        << "g=" << m.g << " t=" << t;
  }
}

TEST(RateT, NonnegativePeriodicAndZeroAtOrigin) {
  for (double g : {0.1, 1.0, 4.0}) {
    const PureDephasingModel m(1.3, g);
    EXPECT_EQ(rate_T(m, 0.0), 0.0);
    for (double t = 0.0; t < 6.0; t += 0.37) {
      EXPECT_GE(rate_T(m, t), 0.0);
      EXPECT_TRUE(std::isfinite(rate_T(m, t)));
      const double shifted = rate_T(m, t + 2.0 * kPi / m.omega);
      EXPECT_NEAR(shifted, rate_T(m, t), 1e-12 * std::max(1.0, rate_T(m, t)));
    }
  }
}

TEST(RateT, LargeCouplingUsesLogSpace) {
  const PureDephasingModel m(1.0, 40.0);
  for (double t : {0.01, 0.05, kPi}) {
    const double v = rate_T(m, t);
    EXPECT_TRUE(std::isfinite(v)) << t;
    EXPECT_GE(v, 0.0);
  }
  // exponent near 1140, beyond double range
  EXPECT_THROW(rate_T(m, 0.5), NumericError);
}

TEST(RateT, SmallCouplingAsymptote) {
  const PureDephasingModel m(1.0, 0.05);
  EXPECT_NEAR(rate_T_small_g(m, kPi), 1.25e-5, 1e-18);
  for (double t : {0.5, 1.5, kPi, 4.0}) {
    const double approx = rate_T_small_g(m, t);
    EXPECT_NEAR(rate_T(m, t) / approx, 1.0, 0.02) << t;
  }
}

TEST(RateT, ResolvedRateTiltAndSymmetry) {
  const PureDephasingModel m(1.0, 0.6);
  EXPECT_DOUBLE_EQ(rate_T_resolved(m, 0.0, 1.2), rate_T(m, 1.2));
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int trial = 0; trial < 10; ++trial) {
    const Complex alpha(u(rng), u(rng));
    const double t = 3.0 * (u(rng) + 1.5);
    const double x = 2.0 * m.omega * (std::conj(alpha) * beta(m, t)).imag();
    EXPECT_NEAR(rate_T_resolved(m, alpha, t), rate_T(m, t) * std::exp(-x),
                1e-12 * rate_T(m, t) * std::exp(std::abs(x)));
    const double pair = rate_T_resolved(m, alpha, t) + rate_T_resolved(m, -alpha, t);
    EXPECT_NEAR(pair, 2.0 * classical_rate(m, alpha, t), 1e-12 * std::max(1.0, pair));
  }
}

TEST(IntegratedRate, MatchesGoldenAndSimpson) {
  const auto golden = load_golden();
  for (const auto& row : golden["integrated_rate"]) {
    const PureDephasingModel m(row["omega"].get<double>(), row["g"].get<double>());
    const double t = row["t"].get<double>();
    const double expected = row["integral"].get<double>();
    EXPECT_NEAR(integrated_rate(m, t), expected, 1e-12 * std::max(1.0, expected));
    const double s = simpson([&](double x) { return rate_T(m, x); }, 0.0, t, 4000);
    EXPECT_NEAR(integrated_rate(m, t), s, 1e-8 * std::max(1.0, s));
  }
  EXPECT_EQ(integrated_rate(PureDephasingModel(1.0, 0.5), 0.0), 0.0);
}

TEST(IntegratedRate, MonotoneInTime) {
  const PureDephasingModel m(1.0, 1.5);
  double previous = 0.0;
  for (double t = 0.25; t < 10.0; t += 0.25) {
    const double v = integrated_rate(m, t);
    EXPECT_GE(v, previous);
    previous = v;
  }
}

TEST(ClassicalCoefficients, InitialValues) {
  const PureDephasingModel m(1.0, 0.7);
  const auto c = classical_coefficients(m, Complex(0.4, -0.9), 0.0);
  for (int k = 0; k < 2; ++k) {
    EXPECT_LT(std::abs(c.d[k] - 1.0 / std::sqrt(2.0)), 1e-15);
    EXPECT_EQ(std::abs(c.b[k]), 0.0);
  }
}

TEST(ClassicalCoefficients, RatioIsTangent) {
  const PureDephasingModel m(1.0, 0.7);
  const Complex alpha(0.3, 0.2);
  for (double t : {0.4, 1.7, 3.0}) {
    const auto c = classical_coefficients(m, alpha, t);
    const Complex tan_gb = std::tan(m.g * beta(m, t));
    EXPECT_LT(std::abs(c.b[0] / c.d[0] + kI * tan_gb), 1e-13);
    EXPECT_LT(std::abs(c.b[1] / c.d[1] - kI * tan_gb), 1e-13);
  }
}

TEST(ClassicalRate, HyperbolicTilt) {
  const PureDephasingModel m(1.0, 0.9);
  std::mt19937_64 rng(62);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const Complex alpha(u(rng), u(rng));
    const double t = 3.0 * (u(rng) + 1.0);
    const double x = 2.0 * m.omega * (std::conj(alpha) * beta(m, t)).imag();
    EXPECT_NEAR(classical_rate(m, alpha, t), rate_T(m, t) * std::cosh(x), 1e-13);
  }
  // Real alpha at a peak (omega t = pi, beta real) has no tilt.
  EXPECT_NEAR(classical_rate(m, 0.8, kPi), rate_T(m, kPi), 1e-15);
}

TEST(Bch, CommutatorIdentities) {
  const PureDephasingModel m(1.0, 0.3);
  const BchResidual r = bch_commutator_check(m, Complex(1.0, 0.5), FockSpace(40));
  EXPECT_LT(r.commutator, 1e-12);
  EXPECT_LT(r.double_y, 1e-12);
  EXPECT_LT(r.double_ybar, 1e-12);
}

TEST(PdClassicalEquation, SigmaZChannelWithRateT) {
  const PureDephasingModel m(1.0, 0.4);
  const auto eq = pd_classical_equation(m, [](double t) { return 0.1 * t; });
  ASSERT_EQ(eq.jumps.size(), 1u);
  EXPECT_DOUBLE_EQ(eq.jumps[0].rate(1.3), rate_T(m, 1.3));
  EXPECT_LT(max_norm(eq.jumps[0].op(0.0) - qubit::sigma_z()), 1e-16);
  EXPECT_LT(max_norm(eq.H_eff(2.0) - 0.2 * qubit::sigma_z()), 1e-16);
}

TEST(PdClassicalEquation, CoherenceFollowsIntegratedRate) {
  const PureDephasingModel m(1.0, 0.8);
  const double h = 0.3;
  const auto eq = pd_classical_equation(m, [h](double) { return h; });
  const std::vector<double> times = uniform_times(2.0 * kPi, 9);
  const Trajectory traj = evolve_gksl(eq.H_eff, eq.jumps,
                                      DensityOperator::pure(QubitVector(1.0, 1.0) / std::sqrt(2.0),
                                                            Signature::qubit()),
                                      times);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    const Complex expected =
        0.5 * std::exp(Complex(-2.0 * integrated_rate(m, t), -2.0 * h * t));
    EXPECT_LT(std::abs(traj.states[i](0, 1) - expected), 1e-10) << t;
  }
}

TEST(JcClassicalEquation, RejectsInvalidConstants) {
  EXPECT_THROW(jc_classical_equation(JaynesCummingsModel(1.0, 0.2, -0.5)), ConfigError);
  EXPECT_THROW(jc_classical_equation(JaynesCummingsModel(1.0, 0.2, 1.0, qubit::sigma_plus())),
               ConfigError);
  EXPECT_THROW(jc_classical_equation(JaynesCummingsModel(
                   1.0, 0.2, 1.0, Operator::identity(Signature::boson(2)))),
               ConfigError);
  const auto eq = jc_classical_equation(JaynesCummingsModel(1.0, 0.2, 0.7, qubit::sigma_x()));
  EXPECT_DOUBLE_EQ(eq.jumps[0].rate(3.0), 0.7);
  EXPECT_LT(max_norm(eq.jumps[0].op(0.0) - qubit::sigma_plus()), 1e-16);
}

TEST(JcFactorized, ZeroCouplingIsProductCoherentState) {
  const FockSpace fs(40);
  const JaynesCummingsModel m(1.2, 0.0);
  const Complex alpha(0.5, 0.3);
  const QubitVector q(0.6, Complex(0.0, 0.8));
  const Vector v = jc_factorized_displacement(m, alpha, q, fs);
  const Vector coh = coherent_vector(fs, {Complex(0.0, -1.2) * alpha});
  for (int k = 0; k < 2; ++k) {
    EXPECT_LT((v.segment(k * 40, 40) - q(k) * coh).norm(), 1e-15);
  }
}

TEST(JcFactorized, NormClosedForm) {
  const FockSpace fs(60);
  std::mt19937_64 rng(63);
  for (int trial = 0; trial < 5; ++trial) {
    const JaynesCummingsModel m(1.0, 0.3 + 0.2 * trial);
    const Complex alpha(0.4, -0.2 * trial);
    const QubitVector q = random_qubit(rng);
    const Complex z = Complex(0.0, -m.omega) * alpha;
    const double expected = 1.0 + m.g * m.g * std::norm(q(0)) * (1.0 + std::norm(z)) +
                            2.0 * (-kI * m.g * std::conj(q(1)) * q(0) * std::conj(z)).real();
    EXPECT_NEAR(jc_factorized_displacement(m, alpha, q, fs).squaredNorm(), expected, 1e-12);
  }
}

TEST(JcFactorized, MinusStateIsUntouched) {
  const FockSpace fs(30);
  const JaynesCummingsModel m(1.0, 0.9);
  const Vector v = jc_factorized_displacement(m, 0.5, {0.0, 1.0}, fs);
  EXPECT_LT(v.head(30).norm(), 1e-16);
  EXPECT_LT((v.tail(30) - coherent_vector(fs, {Complex(0.0, -0.5)})).norm(), 1e-15);
}

TEST(StrongCoupling, RowsAreWellFormed) {
  const auto rows = strong_coupling_report(1.0, {0.5, 2.0}, 0.01, 512);
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& row : rows) {
    EXPECT_EQ(row.times.size(), 512u);
    EXPECT_EQ(row.T.front(), 0.0);
    EXPECT_DOUBLE_EQ(*std::max_element(row.T_normalized.begin(), row.T_normalized.end()), 1.0);
    EXPECT_GT(row.fraction_below, 0.0);
    EXPECT_LT(row.fraction_below, 1.0);
    EXPECT_NEAR(row.times[1] - row.times[0], 2.0 * kPi / 512.0, 1e-15);
  }
  EXPECT_THROW(strong_coupling_report(1.0, {}), ConfigError);
  EXPECT_THROW(strong_coupling_report(1.0, {0.0}), ConfigError);
  EXPECT_THROW(strong_coupling_report(1.0, {1.0}, 0.01, 1), ConfigError);
}

TEST(StrongCoupling, WeakCouplingBaselineFromCosine) {
  // For small g the normalized rate is (1 - cos wt)/2, so the fraction below
  // the threshold is acos(1 - 2 threshold)/pi.
  const double expected = std::acos(1.0 - 2.0 * 0.01) / kPi;
  const auto rows = strong_coupling_report(1.0, {0.01}, 0.01, 4096);
  EXPECT_NEAR(rows[0].fraction_below, expected, 2.0 / 4096.0);
}

TEST(StrongCoupling, DefaultLadderIsMonotone) {
  std::vector<double> ladder{1.0, 1.5, 2.0, 3.0, 4.0, 8.0};
  const auto rows = strong_coupling_report(1.0, ladder);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_GT(rows[i].fraction_below, rows[i - 1].fraction_below) << "g=" << rows[i].g;
  }
}

TEST(StrongCoupling, DipBelowUnitCoupling) {
  const auto rows = strong_coupling_report(1.0, {0.01, 0.5, 1.0});
  EXPECT_GT(rows[0].fraction_below, rows[1].fraction_below);
  EXPECT_GT(rows[1].fraction_below, rows[2].fraction_below);
}
