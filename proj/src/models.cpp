#include "precs/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "precs/errors.hpp"
#include "precs/reduction.hpp"

namespace precs {

namespace {

void validate(double omega, double g) {
  if (!(omega > 0.0)) throw ConfigError("omega must be positive");
  if (!(g >= 0.0)) throw ConfigError("g must be nonnegative");
}

// log(sin^2 x + sinh^2 y), accurate when sinh^2 y overflows.
double log_abs_sin_squared(Complex z) {
  const double x = z.real();
  const double y = std::abs(z.imag());
  if (y < 20.0) {
    const double s = std::sin(x);
    const double sh = std::sinh(y);
    return std::log(s * s + sh * sh);
  }
  // sinh^2 y = e^{2y}(1 - 2e^{-2y} + e^{-4y})/4
  const double e = std::exp(-2.0 * y);
  const double s = std::sin(x);
  return 2.0 * y - std::log(4.0) + std::log1p((4.0 * s * s - 2.0) * e + e * e);
}

double exp_checked(double log_value, double t) {
  const double v = std::exp(log_value);
  if (!std::isfinite(v)) {
    throw NumericError("dephasing rate overflows at t=" + std::to_string(t));
  }
  return v;
}

}  // namespace

PureDephasingModel::PureDephasingModel(double omega_, double g_)
    : omega(omega_), g(g_) {
  validate(omega, g);
}

JaynesCummingsModel::JaynesCummingsModel(double omega_, double g_, double T_tilde_,
                                         Operator H_tilde_eff_)
    : omega(omega_), g(g_), T_tilde(T_tilde_), H_tilde_eff(std::move(H_tilde_eff_)) {
  validate(omega, g);
}

std::vector<InteractionTerm> interaction_terms(const PureDephasingModel& m) {
  const QubitMatrix one = qubit::identity().matrix();
  const QubitMatrix sz = qubit::sigma_z().matrix();
  return {{m.omega, one, EnvOperator::number},
          {m.g, sz, EnvOperator::annihilation},
          {m.g, sz, EnvOperator::creation}};
}

std::vector<InteractionTerm> interaction_terms(const JaynesCummingsModel& m) {
  return {{m.omega, qubit::identity().matrix(), EnvOperator::number},
          {m.g, qubit::sigma_plus().matrix(), EnvOperator::annihilation},
          {m.g, qubit::sigma_minus().matrix(), EnvOperator::creation}};
}

Operator hamiltonian(const PureDephasingModel& m, const FockSpace& fs) {
  return assemble_hamiltonian(interaction_terms(m), fs);
}

Operator hamiltonian(const JaynesCummingsModel& m, const FockSpace& fs) {
  return assemble_hamiltonian(interaction_terms(m), fs);
}

Complex beta(const PureDephasingModel& m, double t) {
  return (m.g / m.omega) * (1.0 - std::exp(Complex(0.0, -m.omega * t)));
}

double rate_T(const PureDephasingModel& m, double t) {
  const Complex b = beta(m, t);
  const Complex z = m.g * b;
  if (z == 0.0) return 0.0;
  return 0.5 * exp_checked(-std::norm(b) + log_abs_sin_squared(z), t);
}

double rate_T_resolved(const PureDephasingModel& m, Complex alpha, double t) {
  const Complex b = beta(m, t);
  const Complex z = m.g * b;
  if (z == 0.0) return 0.0;
  const double tilt = -2.0 * m.omega * (std::conj(alpha) * b).imag();
  return 0.5 * exp_checked(-std::norm(b) + log_abs_sin_squared(z) + tilt, t);
}

double rate_T_small_g(const PureDephasingModel& m, double t) {
  const double g2 = m.g * m.g;
  return g2 * g2 / (m.omega * m.omega) * (1.0 - std::cos(m.omega * t));
}

double integrated_rate(const PureDephasingModel& m, double t) {
  if (t <= 0.0) return 0.0;
  using Quad = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double panel = std::numbers::pi / m.omega;
  const auto f = [&](double s) { return rate_T(m, s); };
  double total = 0.0;
  for (double a = 0.0; a < t; a += panel) {
    const double b = std::min(t, a + panel);
    total += Quad::integrate(f, a, b, 15, 1e-14);
  }
  return total;
}

ClassicalCoefficients classical_coefficients(const PureDephasingModel& m,
                                             Complex alpha, double t) {
  const Complex b = beta(m, t);
  const double envelope = std::exp(-0.5 * std::norm(b)) / std::numbers::sqrt2;
  const Complex c = std::cos(m.g * b);
  const Complex s = std::sin(m.g * b);
  ClassicalCoefficients out{};
  for (int k = 0; k < 2; ++k) {
    const double sign = (k == 0) ? 1.0 : -1.0;
    const Complex phase = std::exp(-sign * kI * m.omega * b * std::conj(alpha));
    out.d[k] = envelope * phase * c;
    out.b[k] = -sign * kI * envelope * phase * s;
  }
  return out;
}

double classical_rate(const PureDephasingModel& m, Complex alpha, double t) {
  const auto c = classical_coefficients(m, alpha, t);
  return 0.5 * std::norm(c.b[0]) + 0.5 * std::norm(c.b[1]);
}

BchResidual bch_commutator_check(const PureDephasingModel& m, Complex alpha,
                                 const FockSpace& fs) {
  const Operator one = qubit::identity();
  const Operator sz = qubit::sigma_z();
  const Operator Y = tensor(m.g * sz + (m.omega * alpha) * one, creation(fs));
  const Operator Ybar =
      tensor(m.g * sz + (m.omega * std::conj(alpha)) * one, annihilation(fs));
  const Operator C = commutator(Y, Ybar);
  const Operator boson_one = Operator::identity(Signature::boson(fs.n_max));
  const Operator closed =
      -(m.g * m.g + m.omega * m.omega * std::norm(alpha)) * tensor(one, boson_one) -
      (m.g * m.omega * 2.0 * alpha.real()) * tensor(sz, boson_one);

  const int n = fs.n_max;
  const int faithful = n / 2;
  const auto block_norm = [&](const Matrix& M) {
    double worst = 0.0;
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l)
        worst = std::max(worst, max_norm(Matrix(M.block(k * n, l * n, faithful, faithful))));
    return worst;
  };
  return {block_norm((C - closed).matrix()), block_norm(commutator(Y, C).matrix()),
          block_norm(commutator(Ybar, C).matrix())};
}

ClassicalEquation pd_classical_equation(const PureDephasingModel& m,
                                        std::function<double(double)> field) {
  ClassicalEquation eq;
  const Operator sz = qubit::sigma_z();
  eq.H_eff = [field = std::move(field), sz](double t) { return field(t) * sz; };
  eq.jumps.push_back({[m](double t) { return rate_T(m, t); },
                      [sz](double) { return sz; }});
  return eq;
}

ClassicalEquation jc_classical_equation(const JaynesCummingsModel& m) {
  if (!(m.T_tilde >= 0.0)) throw ConfigError("T_tilde must be nonnegative");
  if (m.H_tilde_eff.signature() != Signature::qubit() ||
      !m.H_tilde_eff.is_hermitian(1e-12)) {
    throw ConfigError("H_tilde_eff must be a Hermitian qubit operator");
  }
  ClassicalEquation eq;
  eq.H_eff = [H = m.H_tilde_eff](double) { return H; };
  const Operator sp = qubit::sigma_plus();
  eq.jumps.push_back({[rate = m.T_tilde](double) { return rate; },
                      [sp](double) { return sp; }});
  return eq;
}

Vector jc_factorized_displacement(const JaynesCummingsModel& m, Complex alpha,
                                  const QubitVector& qubit_state,
                                  const FockSpace& fs, const Tolerances& tol) {
  const CoherentPoint label{Complex(0.0, -m.omega) * alpha};
  const Vector coh = coherent_vector(fs, label, tol);
  const Vector raised = creation(fs).matrix() * coh;
  const QubitVector lowered = qubit::sigma_minus().matrix() * qubit_state;
  const int n = fs.n_max;
  Vector out(2 * n);
  for (int k = 0; k < 2; ++k) {
    out.segment(k * n, n) = qubit_state(k) * coh - kI * m.g * lowered(k) * raised;
  }
  return out;
}

std::vector<StrongCouplingRow> strong_coupling_report(double omega,
                                                      const std::vector<double>& g_list,
                                                      double threshold, int samples) {
  if (g_list.empty()) throw ConfigError("g list is empty");
  if (samples < 2) throw ConfigError("need at least 2 samples per period");
  const double period = 2.0 * std::numbers::pi / omega;
  std::vector<StrongCouplingRow> rows;
  for (double g : g_list) {
    if (!(g > 0.0)) throw ConfigError("strong-coupling sweep needs g > 0");
    const PureDephasingModel m(omega, g);
    StrongCouplingRow row{g, 0.0, 0.0, {}, {}, {}};
    for (int i = 0; i < samples; ++i) {
      const double t = period * i / samples;
      row.times.push_back(t);
      row.T.push_back(rate_T(m, t));
    }
    row.max_T = *std::max_element(row.T.begin(), row.T.end());
    int below = 0;
    for (double v : row.T) {
      const double normalized = v / row.max_T;
      row.T_normalized.push_back(normalized);
      below += normalized < threshold ? 1 : 0;
    }
    row.fraction_below = static_cast<double>(below) / samples;
    rows.push_back(std::move(row));
  }
  return rows;
}

double pd_effective_field(const ParametricField& field, const LindbladField& lfield,
                          const std::vector<std::array<Complex, 2>>& b) {
  const double sum = deterministic_sum(field.points.size(), 0.0, [&](std::size_t j) {
    const LindbladPoint& rec = lfield.points[j];
    if (!rec.active) return 0.0;
    const ParametricPoint& p = field.points[j];
    double acc = 0.0;
    for (int k = 0; k < 2; ++k) {
      const Complex d = 0.5 * (rec.F[k](0, 0) + rec.F[k](1, 1));
      const Complex bz = 0.5 * (rec.F[k](0, 0) - rec.F[k](1, 1));
      acc += (p.a[k] * b[j][k] + std::norm(p.a[k]) * std::conj(d) * bz).imag();
    }
    return acc / p.chi2;
  });
  return sum * field.grid->weight();
}

}  // namespace precs
