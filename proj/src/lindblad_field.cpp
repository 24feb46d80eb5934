#include "precs/lindblad_field.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "precs/csv.hpp"
#include "precs/errors.hpp"
#include "precs/reduction.hpp"

namespace precs {

namespace {

Operator env_matrix(EnvOperator env, const FockSpace& fs) {
  switch (env) {
    case EnvOperator::annihilation: return annihilation(fs);
    case EnvOperator::creation: return creation(fs);
    case EnvOperator::number: return number_operator(fs);
  }
  throw ContractError("unknown environmental operator");
}

}  // namespace

Operator assemble_hamiltonian(std::span<const InteractionTerm> terms,
                              const FockSpace& fs) {
  Operator h = Operator::zero(Signature::joint(fs.n_max));
  for (const auto& term : terms) {
    h += term.coupling *
         tensor(Operator(Signature::qubit(), term.qubit_op), env_matrix(term.env, fs));
  }
  return h;
}

Complex theta(EnvOperator env, Complex alpha) {
  switch (env) {
    case EnvOperator::annihilation: return alpha;
    case EnvOperator::creation: return std::conj(alpha);
    case EnvOperator::number: return std::norm(alpha);
  }
  return 0.0;
}

WirtingerPair theta_derivatives(EnvOperator env, Complex alpha) {
  switch (env) {
    case EnvOperator::annihilation: return {1.0, 0.0};
    case EnvOperator::creation: return {0.0, 1.0};
    case EnvOperator::number: return {std::conj(alpha), alpha};
  }
  return {0.0, 0.0};
}

std::optional<WirtingerPair> wirtinger(const PhaseSpaceGrid& grid,
                                       std::span<const Complex> f, std::size_t j) {
  const auto east = grid.neighbor(j, 1, 0);
  const auto west = grid.neighbor(j, -1, 0);
  const auto north = grid.neighbor(j, 0, 1);
  const auto south = grid.neighbor(j, 0, -1);
  if (!east || !west || !north || !south) return std::nullopt;
  const double inv_2h = 0.5 / grid.spacing();
  const Complex dx = (f[*east] - f[*west]) * inv_2h;
  const Complex dy = (f[*north] - f[*south]) * inv_2h;
  return WirtingerPair{0.5 * (dx - kI * dy), 0.5 * (dx + kI * dy)};
}

std::optional<Complex> poisson_bracket(const PhaseSpaceGrid& grid,
                                       std::span<const Complex> f,
                                       std::span<const Complex> g, std::size_t j) {
  const auto df = wirtinger(grid, f, j);
  const auto dg = wirtinger(grid, g, j);
  if (!df || !dg) return std::nullopt;
  return poisson_bracket(*df, *dg);
}

std::array<WirtingerPair, 2> analytic_amplitude_derivatives(const JointState& psi,
                                                            Complex alpha) {
  // <alpha|xi> = e^{-|alpha|^2/2} conj(alpha)^xi / sqrt(xi!)
  //   d/dalpha       -> -conj(alpha)/2 * <alpha|xi>
  //   d/dconj(alpha) -> -alpha/2 * <alpha|xi> + sqrt(xi) <alpha|xi-1>
  const int n = psi.n_max();
  std::vector<Complex> row(static_cast<std::size_t>(n));
  bra_fock_row(alpha, row);
  std::array<WirtingerPair, 2> out{};
  for (int k = 0; k < 2; ++k) {
    Complex a = 0.0;
    Complex ladder = 0.0;
    for (int xi = 0; xi < n; ++xi) {
      const Complex c = psi.amplitude(k, xi);
      a += c * row[xi];
      if (xi > 0) ladder += c * std::sqrt(double(xi)) * row[xi - 1];
    }
    out[k] = {-0.5 * std::conj(alpha) * a, -0.5 * alpha * a + ladder};
  }
  return out;
}

std::array<QubitMatrix, 2> compute_F(const std::array<WirtingerPair, 2>& da,
                                     Complex alpha,
                                     std::span<const InteractionTerm> terms) {
  std::array<QubitMatrix, 2> F{QubitMatrix::Zero(), QubitMatrix::Zero()};
  for (const auto& term : terms) {
    const WirtingerPair dtheta = theta_derivatives(term.env, alpha);
    for (int k = 0; k < 2; ++k) {
      const Complex b = term.coupling * poisson_bracket(da[k], dtheta);
      F[k] += -kI * b * term.qubit_op;
    }
  }
  return F;
}

std::optional<std::array<QubitMatrix, 2>> compute_F(
    const ParametricField& field, std::span<const InteractionTerm> terms,
    std::size_t j) {
  const auto& p = field.points[j];
  if (p.chi2 < field.null_eps) return std::nullopt;
  const PhaseSpaceGrid& grid = *field.grid;
  const auto east = grid.neighbor(j, 1, 0);
  const auto west = grid.neighbor(j, -1, 0);
  const auto north = grid.neighbor(j, 0, 1);
  const auto south = grid.neighbor(j, 0, -1);
  if (!east || !west || !north || !south) return std::nullopt;
  const double inv_2h = 0.5 / grid.spacing();
  std::array<WirtingerPair, 2> da{};
  for (int k = 0; k < 2; ++k) {
    const auto& pts = field.points;
    const Complex dx = (pts[*east].a[k] - pts[*west].a[k]) * inv_2h;
    const Complex dy = (pts[*north].a[k] - pts[*south].a[k]) * inv_2h;
    da[k] = {0.5 * (dx - kI * dy), 0.5 * (dx + kI * dy)};
  }
  return compute_F(da, p.alpha, terms);
}

std::optional<QubitMatrix> compute_L(Complex a_k, const QubitMatrix& F_k,
                                     double eps) {
  if (std::abs(a_k) <= eps) return std::nullopt;
  return ((QubitMatrix::Identity() - std::conj(a_k) * F_k) / a_k).eval();
}

double span_residual(const QubitMatrix& F) {
  return std::max(std::abs(F(0, 1)), std::abs(F(1, 0)));
}

Operator LindbladField::F(std::size_t j, int k) const {
  return Operator(Signature::qubit(), points[j].F[k]);
}

Operator LindbladField::L(std::size_t j, int k) const {
  return Operator(Signature::qubit(), points[j].L[k]);
}

Operator LindbladField::R(std::size_t j) const {
  return Operator(Signature::qubit(), points[j].R);
}

std::size_t LindbladField::active_count() const {
  std::size_t n = 0;
  for (const auto& p : points) n += p.active ? 1 : 0;
  return n;
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

#pragma omp parallel for schedule(static)
  for (long long jj = 0; jj < static_cast<long long>(field.points.size()); ++jj) {
    const auto j = static_cast<std::size_t>(jj);
    const ParametricPoint& p = field.points[j];
    LindbladPoint& rec = out.points[j];
    if (!field.grid->is_interior(j) || p.chi2 < field.null_eps) continue;

    std::optional<std::array<QubitMatrix, 2>> F;
    if (options.mode == DerivativeMode::analytic) {
      F = compute_F(analytic_amplitude_derivatives(*options.state, p.alpha),
                    p.alpha, terms);
    } else {
      F = compute_F(field, terms, j);
    }
    if (!F) continue;
    rec.active = true;
    rec.F = *F;
    rec.gamma = p.gamma;
    rec.R = p.weighted_projector();
    for (int k = 0; k < 2; ++k) {
      const auto L = compute_L(p.a[k], rec.F[k], options.amplitude_eps);
      rec.has_L[k] = L.has_value();
      if (L) rec.L[k] = *L;
    }
  }
  return out;
}

QubitMatrix dissipator_density(const LindbladPoint& p) {
  QubitMatrix d = QubitMatrix::Zero();
  if (!p.active) return d;
  for (int k = 0; k < 2; ++k) {
    if (!p.has_L[k] || p.gamma[k] == 0.0) continue;
    const QubitMatrix& L = p.L[k];
    const QubitMatrix LdL = L.adjoint() * L;
    d += p.gamma[k] * (L * p.R * L.adjoint() - 0.5 * (LdL * p.R + p.R * LdL));
  }
  return d;
}

Operator gksl_rhs(const LindbladField& field) {
  QubitMatrix sum = deterministic_sum(
      field.points.size(), QubitMatrix(QubitMatrix::Zero()),
      [&](std::size_t j) { return dissipator_density(field.points[j]); });
  return Operator(Signature::qubit(), sum * field.weight);
}

void write_lindblad_field_csv(std::ostream& out, const LindbladField& field) {
  csv::header(out, {"re_alpha", "im_alpha",
                    "re_Fp_00", "im_Fp_00", "re_Fp_01", "im_Fp_01",
                    "re_Fp_10", "im_Fp_10", "re_Fp_11", "im_Fp_11",
                    "re_Fm_00", "im_Fm_00", "re_Fm_01", "im_Fm_01",
                    "re_Fm_10", "im_Fm_10", "re_Fm_11", "im_Fm_11"});
  std::array<double, 18> row{};
  for (std::size_t j = 0; j < field.points.size(); ++j) {
    const Complex alpha = field.grid->alpha(j);
    row[0] = alpha.real();
    row[1] = alpha.imag();
    std::size_t c = 2;
    for (int k = 0; k < 2; ++k) {
      for (int r = 0; r < 2; ++r) {
        for (int s = 0; s < 2; ++s) {
          const Complex v = field.points[j].F[k](r, s);
          row[c++] = v.real();
          row[c++] = v.imag();
        }
      }
    }
    csv::row(out, row);
  }
}

}  // namespace precs
