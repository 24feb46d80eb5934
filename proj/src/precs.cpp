#include "precs/precs.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "precs/csv.hpp"
#include "precs/errors.hpp"
#include "precs/reduction.hpp"

namespace precs {

JointState::JointState(int n_max, Vector amplitudes, const Tolerances& tol)
    : n_max_(n_max), amplitudes_(std::move(amplitudes)) {
  if (n_max_ < 1 || amplitudes_.size() != 2 * n_max_) {
    throw SignatureError("joint state needs 2*n_max amplitudes");
  }
  const double dev = std::abs(amplitudes_.squaredNorm() - 1.0);
  if (dev > tol.trace) {
    throw ContractError("joint state not normalized (deviation " +
                        std::to_string(dev) + ")");
  }
}

JointState JointState::product(const QubitVector& qubit, const Vector& env,
                               const Tolerances& tol) {
  const int n = static_cast<int>(env.size());
  Vector amps(2 * n);
  amps.head(n) = qubit(0) * env;
  amps.tail(n) = qubit(1) * env;
  return JointState(n, std::move(amps), tol);
}

Operator JointState::projector() const {
  return Operator(Signature::joint(n_max_), amplitudes_ * amplitudes_.adjoint());
}

Operator JointState::reduced() const {
  // Avoids forming the full projector.
  const auto plus = amplitudes_.head(n_max_);
  const auto minus = amplitudes_.tail(n_max_);
  QubitMatrix rho;
  rho(0, 0) = plus.squaredNorm();
  rho(1, 1) = minus.squaredNorm();
  rho(0, 1) = minus.dot(plus);  // sum_xi c_{+xi} conj(c_{-xi})
  rho(1, 0) = std::conj(rho(0, 1));
  return Operator(Signature::qubit(), rho);
}

QubitMatrix ParametricPoint::weighted_projector() const {
  const QubitVector v(a[0], a[1]);
  return v * v.adjoint();
}

double ParametricField::normalization() const {
  const double s = deterministic_sum(points.size(), 0.0,
                                     [&](std::size_t j) { return points[j].chi2; });
  return s * grid->weight();
}

std::vector<Complex> ParametricField::amplitude(int k) const {
  std::vector<Complex> out(points.size());
  for (std::size_t j = 0; j < points.size(); ++j) out[j] = points[j].a[k];
  return out;
}

namespace detail {

ParametricPoint make_point(Complex alpha, Complex a_plus, Complex a_minus,
                           double null_eps) {
  ParametricPoint p;
  p.alpha = alpha;
  p.a = {a_plus, a_minus};
  const double w_plus = std::norm(a_plus);
  const double w_minus = std::norm(a_minus);
  p.chi2 = w_plus + w_minus;
  if (p.chi2 > null_eps) {
    const double chi = std::sqrt(p.chi2);
    p.phi = QubitVector(a_plus / chi, a_minus / chi);
    p.gamma = {w_plus / p.chi2, w_minus / p.chi2};
  } else {
    // Placeholder on the null region; carries no weight downstream.
    p.phi = QubitVector(1.0, 0.0);
    p.gamma = {1.0, 0.0};
  }
  return p;
}

}  // namespace detail

ParametricField decompose(const JointState& psi,
                          std::shared_ptr<const PhaseSpaceGrid> grid,
                          const Tolerances& tol) {
  const int n = psi.n_max();
  const auto plus = psi.amplitudes().head(n);
  const auto minus = psi.amplitudes().tail(n);
  ParametricField field;
  field.grid = grid;
  field.null_eps = tol.null_region;
  field.points.resize(grid->size());

#pragma omp parallel
  {
    Vector row(n);
#pragma omp for schedule(static)
    for (long long jj = 0; jj < static_cast<long long>(grid->size()); ++jj) {
      const auto j = static_cast<std::size_t>(jj);
      const Complex alpha = grid->alpha(j);
      bra_fock_row(alpha, std::span<Complex>(row.data(), row.size()));
      const Complex a_plus = row.cwiseProduct(plus).sum();
      const Complex a_minus = row.cwiseProduct(minus).sum();
      field.points[j] = detail::make_point(alpha, a_plus, a_minus, tol.null_region);
    }
  }

  const double deficit = 1.0 - field.normalization();
  if (std::abs(deficit) > tol.normalization) {
    throw CoverageError("grid does not cover the environmental state: "
                        "normalization deficit " + csv::number(deficit),
                        deficit);
  }
  return field;
}

DensityOperator reconstruct(const ParametricField& field, const Tolerances& tol) {
  QubitMatrix sum = deterministic_sum(
      field.points.size(), QubitMatrix(QubitMatrix::Zero()),
      [&](std::size_t j) { return field.points[j].weighted_projector(); });
  sum *= field.grid->weight();
  Tolerances relaxed = tol;
  relaxed.trace = std::max(tol.trace, tol.normalization);
  return DensityOperator(Operator(Signature::qubit(), sum), relaxed);
}

std::vector<bool> null_region_mask(const ParametricField& field, double eps) {
  std::vector<bool> mask(field.points.size());
  for (std::size_t j = 0; j < field.points.size(); ++j) {
    mask[j] = field.points[j].chi2 < eps;
  }
  return mask;
}

void write_field_csv(std::ostream& out, const ParametricField& field) {
  csv::header(out, {"re_alpha", "im_alpha", "chi2", "re_a_plus", "im_a_plus",
                    "re_a_minus", "im_a_minus", "gamma_plus"});
  for (const auto& p : field.points) {
    csv::row(out, std::array<double, 8>{p.alpha.real(), p.alpha.imag(), p.chi2,
                                        p.a[0].real(), p.a[0].imag(),
                                        p.a[1].real(), p.a[1].imag(),
                                        p.gamma[0]});
  }
}

}  // namespace precs
