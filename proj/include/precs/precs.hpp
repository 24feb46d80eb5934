#pragma once

#include <array>
#include <iosfwd>
#include <memory>
#include <vector>

#include "precs/bosonic.hpp"
#include "precs/operator.hpp"
#include "precs/tolerances.hpp"

namespace precs {

/// Pure state of qubit + mode, |psi> = sum_{k,xi} c_{k xi} |k> (x) |xi>,
/// stored qubit-major (index k * n_max + xi). k = 0 is |+>, k = 1 is |->.
class JointState {
 public:
  /// Throws ContractError when the amplitudes are not normalized within
  /// tol.trace.
  JointState(int n_max, Vector amplitudes, const Tolerances& tol = {});

  static JointState product(const QubitVector& qubit, const Vector& env,
                            const Tolerances& tol = {});

  int n_max() const { return n_max_; }
  const Vector& amplitudes() const { return amplitudes_; }
  Complex amplitude(int k, int xi) const { return amplitudes_(k * n_max_ + xi); }
  double norm() const { return amplitudes_.norm(); }

  /// |psi><psi| as a joint operator.
  Operator projector() const;
  /// Tr_env |psi><psi|.
  Operator reduced() const;

 private:
  int n_max_;
  Vector amplitudes_;
};

/// Per-point PRECS data: a_k(alpha) = sum_xi c_{k xi} <alpha|xi>,
/// chi2 = |a_+|^2 + |a_-|^2, phi = a / chi, gamma_k = |a_k|^2 / chi2.
struct ParametricPoint {
  Complex alpha;
  std::array<Complex, 2> a;
  double chi2 = 0.0;
  QubitVector phi;
  std::array<double, 2> gamma{0.0, 0.0};

  /// chi2 |phi><phi| assembled from a directly.
  QubitMatrix weighted_projector() const;
};

struct ParametricField {
  std::shared_ptr<const PhaseSpaceGrid> grid;
  std::vector<ParametricPoint> points;  // grid order
  double null_eps = 1e-12;              // chi2 below this: phi is a placeholder

  /// sum_j w_j chi2_j
  double normalization() const;
  /// a_k at every grid point.
  std::vector<Complex> amplitude(int k) const;
};

/// PRECS decomposition on a grid. Throws CoverageError when the discrete
/// normalization misses 1 by more than tol.normalization.
ParametricField decompose(const JointState& psi,
                          std::shared_ptr<const PhaseSpaceGrid> grid,
                          const Tolerances& tol = {});

/// sum_j w_j chi2_j |phi_j><phi_j|
DensityOperator reconstruct(const ParametricField& field,
                            const Tolerances& tol = {});

/// true where chi2 < eps.
std::vector<bool> null_region_mask(const ParametricField& field, double eps);

/// Header: re_alpha,im_alpha,chi2,re_a_plus,im_a_plus,re_a_minus,im_a_minus,gamma_plus
void write_field_csv(std::ostream& out, const ParametricField& field);

namespace detail {
ParametricPoint make_point(Complex alpha, Complex a_plus, Complex a_minus,
                           double null_eps);
}

}  // namespace precs
