#pragma once

#include <complex>
#include <string>

#include <Eigen/Dense>

#include "precs/tolerances.hpp"

namespace precs {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using QubitMatrix = Eigen::Matrix2cd;
using QubitVector = Eigen::Vector2cd;

inline constexpr Complex kI{0.0, 1.0};

enum class Subsystem { qubit, boson, joint };

/// Which Hilbert space an operator acts on. The qubit is always the
/// principal system; the boson is truncated to n_max Fock levels.
class Signature {
 public:
  static Signature qubit() { return Signature(Subsystem::qubit, 0); }
  static Signature boson(int n_max);
  static Signature joint(int n_max);

  Subsystem kind() const { return kind_; }
  int n_max() const { return n_max_; }
  int dim() const;
  std::string name() const;

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  Signature(Subsystem kind, int n_max) : kind_(kind), n_max_(n_max) {}

  Subsystem kind_;
  int n_max_;
};

/// Dense complex square matrix tagged with the subsystem it acts on.
/// Joint indices are qubit-major: row = k * n_max + xi.
class Operator {
 public:
  Operator(Signature signature, Matrix entries);

  static Operator identity(Signature signature);
  static Operator zero(Signature signature);

  const Signature& signature() const { return signature_; }
  int dim() const { return static_cast<int>(entries_.rows()); }
  const Matrix& matrix() const { return entries_; }
  Complex operator()(int row, int col) const { return entries_(row, col); }

  Operator adjoint() const;
  Complex trace() const { return entries_.trace(); }
  bool is_hermitian(double tol) const;
  /// max_ij |A_ij - conj(A_ji)|
  double hermiticity_residual() const;

  Operator& operator+=(const Operator& other);
  Operator& operator-=(const Operator& other);
  Operator& operator*=(Complex scale);

  friend Operator operator+(Operator a, const Operator& b) { return a += b; }
  friend Operator operator-(Operator a, const Operator& b) { return a -= b; }
  friend Operator operator*(Complex s, Operator a) { return a *= s; }
  friend Operator operator*(Operator a, Complex s) { return a *= s; }
  friend Operator operator*(const Operator& a, const Operator& b);

 private:
  Signature signature_;
  Matrix entries_;
};

/// Largest absolute entry.
double max_norm(const Matrix& m);
inline double max_norm(const Operator& op) { return max_norm(op.matrix()); }

Operator commutator(const Operator& a, const Operator& b);
Operator anticommutator(const Operator& a, const Operator& b);

/// Kronecker product of a qubit operator and a boson operator.
Operator tensor(const Operator& qubit_op, const Operator& boson_op);

/// Trace over the bosonic factor of a joint operator.
Operator partial_trace_env(const Operator& joint_op);

/// exp(scale * A) by scaling and squaring. Throws NumericError when the
/// entries or the scaled norm are not finite or too large to square safely.
Operator expm(const Operator& a, Complex scale);

/// Smallest eigenvalue of a Hermitian operator. Throws ContractError when
/// the input is not Hermitian within `hermitian_tol`.
double spectral_floor(const Operator& m, double hermitian_tol = 1e-9);

/// Pauli and ladder matrices for the qubit in the {|+>, |->} basis, with
/// sigma_z|+> = |+> and the raising convention sigma_plus|-> = |+>.
namespace qubit {
Operator identity();
Operator sigma_x();
Operator sigma_y();
Operator sigma_z();
Operator sigma_plus();
Operator sigma_minus();
}  // namespace qubit

/// A unit-trace, Hermitian, positive semidefinite operator. The tolerances
/// used for validation are stored with the value.
class DensityOperator {
 public:
  /// Validates the invariants; throws ContractError on violation.
  DensityOperator(Operator op, const Tolerances& tol = {});

  static DensityOperator pure(const Vector& state, Signature signature,
                              const Tolerances& tol = {});

  const Operator& op() const { return op_; }
  const Tolerances& tolerances() const { return tol_; }
  double trace_deviation() const;
  double min_eigenvalue() const;

 private:
  Operator op_;
  Tolerances tol_;
};

}  // namespace precs
