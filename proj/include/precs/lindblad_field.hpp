#pragma once

#include <array>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "precs/bosonic.hpp"
#include "precs/operator.hpp"
#include "precs/precs.hpp"

namespace precs {

/// Environmental factor of an interaction term.
enum class EnvOperator { annihilation, creation, number };

/// One term g_i O_i (x) E_i of the joint Hamiltonian.
struct InteractionTerm {
  double coupling;
  QubitMatrix qubit_op;
  EnvOperator env;
};

/// Joint Hamiltonian sum_i g_i O_i (x) E_i on the truncated space.
Operator assemble_hamiltonian(std::span<const InteractionTerm> terms,
                              const FockSpace& fs);

/// Derivatives with respect to alpha and conj(alpha).
struct WirtingerPair {
  Complex d_alpha;
  Complex d_alpha_conj;
};

/// <alpha|E|alpha>: alpha, conj(alpha) or |alpha|^2.
Complex theta(EnvOperator env, Complex alpha);
/// Exact Wirtinger derivatives of theta.
WirtingerPair theta_derivatives(EnvOperator env, Complex alpha);

/// Central-difference Wirtinger derivatives of a grid function at point j:
/// d/dalpha = (d_x - i d_y)/2, d/dconj(alpha) = (d_x + i d_y)/2.
/// Returns nullopt (boundary flag) when j lacks an axis neighbour.
std::optional<WirtingerPair> wirtinger(const PhaseSpaceGrid& grid,
                                       std::span<const Complex> f, std::size_t j);

/// {f, g}_P = df/dalpha dg/dconj(alpha) - df/dconj(alpha) dg/dalpha
inline Complex poisson_bracket(const WirtingerPair& f, const WirtingerPair& g) {
  return f.d_alpha * g.d_alpha_conj - f.d_alpha_conj * g.d_alpha;
}

std::optional<Complex> poisson_bracket(const PhaseSpaceGrid& grid,
                                       std::span<const Complex> f,
                                       std::span<const Complex> g, std::size_t j);

/// Exact derivatives of a_k(alpha) = sum_xi c_{k xi} <alpha|xi> computed from
/// the amplitudes. Used as the oracle for the finite-difference path.
std::array<WirtingerPair, 2> analytic_amplitude_derivatives(const JointState& psi,
                                                            Complex alpha);

/// F_k = -i sum_i g_i {a_k, theta_i}_P O_i for both k, from given derivatives
/// of a_+ and a_-.
std::array<QubitMatrix, 2> compute_F(const std::array<WirtingerPair, 2>& da,
                                     Complex alpha,
                                     std::span<const InteractionTerm> terms);

/// Finite-difference F at grid point j. nullopt on boundary or masked
/// points (chi2 below the field's null threshold).
std::optional<std::array<QubitMatrix, 2>> compute_F(
    const ParametricField& field, std::span<const InteractionTerm> terms,
    std::size_t j);

/// L_k = (1 - conj(a_k) F_k) / a_k, or nullopt when |a_k| <= eps.
std::optional<QubitMatrix> compute_L(Complex a_k, const QubitMatrix& F_k,
                                     double eps);

/// Distance of F from span{1, sigma_z}: its largest off-diagonal entry.
double span_residual(const QubitMatrix& F);

enum class DerivativeMode { finite_difference, analytic };

struct LindbladPoint {
  bool active = false;  // interior and unmasked
  std::array<QubitMatrix, 2> F{QubitMatrix::Zero(), QubitMatrix::Zero()};
  std::array<QubitMatrix, 2> L{QubitMatrix::Zero(), QubitMatrix::Zero()};
  std::array<bool, 2> has_L{false, false};
  std::array<double, 2> gamma{0.0, 0.0};
  QubitMatrix R = QubitMatrix::Zero();  // chi2 |phi><phi|, unnormalized
};

struct LindbladField {
  std::shared_ptr<const PhaseSpaceGrid> grid;
  std::vector<LindbladPoint> points;  // grid order
  /// Quadrature weight of each point (the grid weight).
  double weight = 0.0;

  Operator F(std::size_t j, int k) const;
  Operator L(std::size_t j, int k) const;
  Operator R(std::size_t j) const;
  std::size_t active_count() const;
};

struct AssemblyOptions {
  DerivativeMode mode = DerivativeMode::finite_difference;
  /// Required for DerivativeMode::analytic.
  const JointState* state = nullptr;
  /// |a_k| threshold for L_k.
  double amplitude_eps = 1e-12;
};

/// Per-point F, L, gamma, R over the grid. Boundary and masked points stay
/// inactive and carry no dissipator weight.
LindbladField assemble_lindblad_field(const ParametricField& field,
                                      std::span<const InteractionTerm> terms,
                                      const AssemblyOptions& options = {});

/// sum_j w_j sum_k gamma_k (L_k R L_k^dag - {L_k^dag L_k, R}/2) over active
/// points with a valid L_k.
Operator gksl_rhs(const LindbladField& field);

/// One point's contribution without the quadrature weight.
QubitMatrix dissipator_density(const LindbladPoint& p);

/// Header: re_alpha,im_alpha, then Re/Im of F_+ and F_- entries 00,01,10,11.
/// Inactive points are written with zero entries.
void write_lindblad_field_csv(std::ostream& out, const LindbladField& field);

}  // namespace precs
