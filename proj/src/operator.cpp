#include "precs/operator.hpp"

#include <cmath>
#include <utility>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "precs/errors.hpp"

namespace precs {

namespace {

// Scaled 1-norms above this would need more than ~60 squarings.
constexpr double kExpmNormLimit = 1e18;

void require_same(const Signature& a, const Signature& b, const char* what) {
  if (!(a == b)) {
    throw SignatureError(std::string(what) + ": " + a.name() + " vs " +
                         b.name());
  }
}

}  // namespace

Signature Signature::boson(int n_max) {
  if (n_max < 1) throw SignatureError("boson truncation must be positive");
  return Signature(Subsystem::boson, n_max);
}

Signature Signature::joint(int n_max) {
  if (n_max < 1) throw SignatureError("boson truncation must be positive");
  return Signature(Subsystem::joint, n_max);
}

int Signature::dim() const {
  switch (kind_) {
    case Subsystem::qubit: return 2;
    case Subsystem::boson: return n_max_;
    case Subsystem::joint: return 2 * n_max_;
  }
  return 0;
}

std::string Signature::name() const {
  switch (kind_) {
    case Subsystem::qubit: return "qubit(2)";
    case Subsystem::boson: return "boson(" + std::to_string(n_max_) + ")";
    case Subsystem::joint: return "joint(" + std::to_string(2 * n_max_) + ")";
  }
  return "?";
}

Operator::Operator(Signature signature, Matrix entries)
    : signature_(signature), entries_(std::move(entries)) {
  const int d = signature_.dim();
  if (entries_.rows() != d || entries_.cols() != d) {
    throw SignatureError("matrix of size " + std::to_string(entries_.rows()) +
                         "x" + std::to_string(entries_.cols()) +
                         " does not match signature " + signature_.name());
  }
}

Operator Operator::identity(Signature signature) {
  const int d = signature.dim();
  return Operator(signature, Matrix::Identity(d, d));
}

Operator Operator::zero(Signature signature) {
  const int d = signature.dim();
  return Operator(signature, Matrix::Zero(d, d));
}

Operator Operator::adjoint() const {
  return Operator(signature_, entries_.adjoint());
}

double Operator::hermiticity_residual() const {
  return max_norm(Matrix(entries_ - entries_.adjoint()));
}

bool Operator::is_hermitian(double tol) const {
  return hermiticity_residual() <= tol;
}

Operator& Operator::operator+=(const Operator& other) {
  require_same(signature_, other.signature_, "operator sum");
  entries_ += other.entries_;
  return *this;
}

Operator& Operator::operator-=(const Operator& other) {
  require_same(signature_, other.signature_, "operator difference");
  entries_ -= other.entries_;
  return *this;
}

Operator& Operator::operator*=(Complex scale) {
  entries_ *= scale;
  return *this;
}

Operator operator*(const Operator& a, const Operator& b) {
  require_same(a.signature_, b.signature_, "operator product");
  return Operator(a.signature_, a.entries_ * b.entries_);
}

double max_norm(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

Operator commutator(const Operator& a, const Operator& b) {
  return a * b - b * a;
}

Operator anticommutator(const Operator& a, const Operator& b) {
  return a * b + b * a;
}

Operator tensor(const Operator& qubit_op, const Operator& boson_op) {
  if (qubit_op.signature().kind() != Subsystem::qubit) {
    throw SignatureError("tensor: left factor must be a qubit operator, got " +
                         qubit_op.signature().name());
  }
  if (boson_op.signature().kind() != Subsystem::boson) {
    throw SignatureError("tensor: right factor must be a boson operator, got " +
                         boson_op.signature().name());
  }
  const int n = boson_op.dim();
  const Signature sig = Signature::joint(n);
  Matrix out(2 * n, 2 * n);
  for (int k = 0; k < 2; ++k) {
    for (int l = 0; l < 2; ++l) {
      out.block(k * n, l * n, n, n) = qubit_op(k, l) * boson_op.matrix();
    }
  }
  return Operator(sig, std::move(out));
}

Operator partial_trace_env(const Operator& joint_op) {
  if (joint_op.signature().kind() != Subsystem::joint) {
    throw SignatureError("partial_trace_env needs a joint operator, got " +
                         joint_op.signature().name());
  }
  const int n = joint_op.signature().n_max();
  QubitMatrix out;
  for (int k = 0; k < 2; ++k) {
    for (int l = 0; l < 2; ++l) {
      out(k, l) = joint_op.matrix().block(k * n, l * n, n, n).trace();
    }
  }
  return Operator(Signature::qubit(), out);
}

Operator expm(const Operator& a, Complex scale) {
  if (!a.matrix().allFinite() || !std::isfinite(scale.real()) ||
      !std::isfinite(scale.imag())) {
    throw NumericError("expm: non-finite input");
  }
  Matrix scaled = scale * a.matrix();
  const double norm1 = scaled.cwiseAbs().colwise().sum().maxCoeff();
  if (!std::isfinite(norm1) || norm1 > kExpmNormLimit) {
    throw NumericError("expm: norm estimate overflow (" +
                       std::to_string(norm1) + ")");
  }
  Matrix result = scaled.exp();
  if (!result.allFinite()) {
    throw NumericError("expm: result overflowed");
  }
  return Operator(a.signature(), std::move(result));
}

double spectral_floor(const Operator& m, double hermitian_tol) {
  const double residual = m.hermiticity_residual();
  if (residual > hermitian_tol) {
    throw ContractError("spectral_floor: operator is not Hermitian (residual " +
                        std::to_string(residual) + ")");
  }
  const Matrix herm = 0.5 * (m.matrix() + m.matrix().adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericError("spectral_floor: eigensolver did not converge");
  }
  return solver.eigenvalues().minCoeff();
}

namespace qubit {

Operator identity() { return Operator::identity(Signature::qubit()); }

Operator sigma_x() {
  QubitMatrix m;
  m << 0, 1, 1, 0;
  return Operator(Signature::qubit(), m);
}

Operator sigma_y() {
  QubitMatrix m;
  m << 0, -kI, kI, 0;
  return Operator(Signature::qubit(), m);
}

Operator sigma_z() {
  QubitMatrix m;
  m << 1, 0, 0, -1;
  return Operator(Signature::qubit(), m);
}

Operator sigma_plus() {
  QubitMatrix m;
  m << 0, 1, 0, 0;
  return Operator(Signature::qubit(), m);
}

Operator sigma_minus() {
  QubitMatrix m;
  m << 0, 0, 1, 0;
  return Operator(Signature::qubit(), m);
}

}  // namespace qubit

DensityOperator::DensityOperator(Operator op, const Tolerances& tol)
    : op_(std::move(op)), tol_(tol) {
  const double herm = op_.hermiticity_residual();
  if (herm > tol_.hermitian) {
    throw ContractError("density operator not Hermitian (residual " +
                        std::to_string(herm) + ")");
  }
  if (trace_deviation() > tol_.trace) {
    throw ContractError("density operator trace deviates from 1 by " +
                        std::to_string(trace_deviation()));
  }
  const double floor = min_eigenvalue();
  if (floor < -tol_.positivity) {
    throw ContractError("density operator has negative eigenvalue " +
                        std::to_string(floor));
  }
}

DensityOperator DensityOperator::pure(const Vector& state, Signature signature,
                                      const Tolerances& tol) {
  return DensityOperator(Operator(signature, state * state.adjoint()), tol);
}

double DensityOperator::trace_deviation() const {
  return std::abs(op_.trace() - 1.0);
}

double DensityOperator::min_eigenvalue() const {
  return spectral_floor(op_, tol_.hermitian);
}

}  // namespace precs
