#include "precs/reference.hpp"

#include <cmath>

#include "precs/csv.hpp"
#include "precs/errors.hpp"

namespace precs::reference {

Complex bra_fock(Complex alpha, int xi) {
  const double r2 = std::norm(alpha);
  if (xi == 0) return std::exp(-0.5 * r2);
  if (r2 == 0.0) return 0.0;
  const double log_mag = -0.5 * r2 + xi * 0.5 * std::log(r2) - 0.5 * std::lgamma(xi + 1.0);
  return std::polar(std::exp(log_mag), -xi * std::arg(alpha));
}

ParametricField decompose(const JointState& psi,
                          std::shared_ptr<const PhaseSpaceGrid> grid,
                          const Tolerances& tol) {
  const int n = psi.n_max();
  ParametricField field;
  field.grid = grid;
  field.null_eps = tol.null_region;
  double total = 0.0;
  for (std::size_t j = 0; j < grid->size(); ++j) {
    const Complex alpha = grid->alpha(j);
    Complex a[2] = {0.0, 0.0};
    for (int xi = 0; xi < n; ++xi) {
      const Complex k = bra_fock(alpha, xi);
      a[0] += psi.amplitude(0, xi) * k;
      a[1] += psi.amplitude(1, xi) * k;
    }
    field.points.push_back(detail::make_point(alpha, a[0], a[1], tol.null_region));
    total += field.points.back().chi2;
  }
  const double deficit = 1.0 - total * grid->weight();
  if (std::abs(deficit) > tol.normalization) {
    throw CoverageError("grid does not cover the environmental state: "
                        "normalization deficit " + csv::number(deficit),
                        deficit);
  }
  return field;
}

QubitMatrix reconstruct(const ParametricField& field) {
  QubitMatrix sum = QubitMatrix::Zero();
  for (const auto& p : field.points) {
    sum += p.chi2 * p.phi * p.phi.adjoint();
  }
  return sum * field.grid->weight();
}

double identity_resolution_error(const FockSpace& fs, const PhaseSpaceGrid& grid,
                                 int block) {
  if (block < 1 || 2 * block > fs.n_max) {
    throw ContractError("block must satisfy 1 <= block <= n_max/2");
  }
  Matrix sum = Matrix::Zero(block, block);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    for (int r = 0; r < block; ++r) {
      for (int c = 0; c < block; ++c) {
        sum(r, c) += std::conj(bra_fock(grid.alpha(j), r)) * bra_fock(grid.alpha(j), c);
      }
    }
  }
  sum *= grid.weight();
  return max_norm(Matrix(sum - Matrix::Identity(block, block)));
}

LindbladField assemble_lindblad_field(const ParametricField& field,
                                      std::span<const InteractionTerm> terms,
                                      const AssemblyOptions& options) {
  if (options.mode == DerivativeMode::analytic && options.state == nullptr) {
    throw ContractError("analytic derivative mode needs the joint state");
  }
  LindbladField out;
  out.grid = field.grid;
  out.weight = field.grid->weight();
  out.points.resize(field.points.size());
  for (std::size_t j = 0; j < field.points.size(); ++j) {
    const ParametricPoint& p = field.points[j];
    if (!field.grid->is_interior(j) || p.chi2 < field.null_eps) continue;
    const auto F = options.mode == DerivativeMode::analytic
                       ? std::optional(compute_F(
                             analytic_amplitude_derivatives(*options.state, p.alpha),
                             p.alpha, terms))
                       : compute_F(field, terms, j);
    if (!F) continue;
    LindbladPoint& rec = out.points[j];
    rec.active = true;
    rec.F = *F;
    rec.gamma = p.gamma;
    rec.R = p.weighted_projector();
    for (int k = 0; k < 2; ++k) {
      if (std::abs(p.a[k]) <= options.amplitude_eps) continue;
      rec.has_L[k] = true;
      rec.L[k] = (QubitMatrix::Identity() - std::conj(p.a[k]) * rec.F[k]) / p.a[k];
    }
  }
  return out;
}

QubitMatrix gksl_rhs(const LindbladField& field) {
  QubitMatrix sum = QubitMatrix::Zero();
  for (const auto& p : field.points) {
    if (!p.active) continue;
    for (int k = 0; k < 2; ++k) {
      if (!p.has_L[k]) continue;
      const QubitMatrix& L = p.L[k];
      const QubitMatrix LdL = L.adjoint() * L;
      sum += p.gamma[k] * (L * p.R * L.adjoint() - 0.5 * (LdL * p.R + p.R * LdL));
    }
  }
  return sum * field.weight;
}

}  // namespace precs::reference
