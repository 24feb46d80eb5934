#include "precs/bosonic.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "precs/errors.hpp"
#include "precs/reduction.hpp"

namespace precs {

FockSpace::FockSpace(int n) : n_max(n) {
  if (n < 1) throw ConfigError("n_max must be positive");
}

Operator annihilation(const FockSpace& fs) {
  Matrix m = Matrix::Zero(fs.n_max, fs.n_max);
  for (int n = 1; n < fs.n_max; ++n) m(n - 1, n) = std::sqrt(double(n));
  return Operator(Signature::boson(fs.n_max), std::move(m));
}

Operator creation(const FockSpace& fs) { return annihilation(fs).adjoint(); }

Operator number_operator(const FockSpace& fs) {
  Matrix m = Matrix::Zero(fs.n_max, fs.n_max);
  for (int n = 0; n < fs.n_max; ++n) m(n, n) = double(n);
  return Operator(Signature::boson(fs.n_max), std::move(m));
}

double truncation_tail(const FockSpace& fs, CoherentPoint p) {
  const double mean = std::norm(p.alpha);
  if (mean == 0.0) return 0.0;
  // log of the first omitted Poisson term, then sum upward until negligible.
  const double n0 = fs.n_max;
  double log_term = -mean + n0 * std::log(mean) - std::lgamma(n0 + 1.0);
  double tail = 0.0;
  for (int n = fs.n_max; n < fs.n_max + 100000; ++n) {
    const double term = std::exp(log_term);
    tail += term;
    if (n > mean && term < 1e-18 * tail) break;
    if (n > mean && tail == 0.0 && log_term < -745.0) break;
    log_term += std::log(mean) - std::log(double(n) + 1.0);
  }
  return tail;
}

void require_faithful(const FockSpace& fs, CoherentPoint p,
                      const Tolerances& tol) {
  const double tail = truncation_tail(fs, p);
  if (tail >= tol.truncation) {
    throw TruncationError("coherent amplitude |alpha|^2=" +
                              std::to_string(std::norm(p.alpha)) +
                              " too large for n_max=" + std::to_string(fs.n_max) +
                              " (tail mass " + std::to_string(tail) + ")",
                          tail);
  }
}

void bra_fock_row(Complex alpha, std::span<Complex> out) {
  if (out.empty()) return;
  const Complex conj_alpha = std::conj(alpha);
  out[0] = std::exp(-0.5 * std::norm(alpha));
  for (std::size_t xi = 1; xi < out.size(); ++xi) {
    out[xi] = out[xi - 1] * conj_alpha / std::sqrt(double(xi));
  }
}

Vector coherent_vector(const FockSpace& fs, CoherentPoint p,
                       const Tolerances& tol) {
  require_faithful(fs, p, tol);
  Vector v(fs.n_max);
  // <n|alpha> is the conjugate of <alpha|n>
  bra_fock_row(std::conj(p.alpha), std::span<Complex>(v.data(), v.size()));
  return v;
}

Complex overlap(CoherentPoint p, CoherentPoint q) {
  return std::exp(-0.5 * (std::norm(p.alpha) + std::norm(q.alpha)) +
                  std::conj(p.alpha) * q.alpha);
}

Operator displacement(const FockSpace& fs, CoherentPoint p,
                      const Tolerances& tol) {
  require_faithful(fs, p, tol);
  const Operator gen = p.alpha * creation(fs) - std::conj(p.alpha) * annihilation(fs);
  return expm(gen, 1.0);
}

PhaseSpaceGrid::PhaseSpaceGrid(double radius, double spacing)
    : radius_(radius),
      spacing_(spacing),
      weight_(spacing * spacing / std::numbers::pi),
      half_width_(static_cast<int>(std::floor(radius / spacing))) {
  const int side = 2 * half_width_ + 1;
  index_.assign(static_cast<std::size_t>(side) * side, -1);
  const double r2 = radius * radius;
  for (int iy = -half_width_; iy <= half_width_; ++iy) {
    for (int ix = -half_width_; ix <= half_width_; ++ix) {
      const double x = ix * spacing;
      const double y = iy * spacing;
      if (x * x + y * y > r2) continue;
      index_[static_cast<std::size_t>(iy + half_width_) * side + (ix + half_width_)] =
          static_cast<long>(points_.size());
      points_.push_back({Complex(x, y)});
      lattice_.emplace_back(ix, iy);
    }
  }
}

std::optional<std::size_t> PhaseSpaceGrid::neighbor(std::size_t j, int dx,
                                                    int dy) const {
  const int x = lattice_[j].first + dx;
  const int y = lattice_[j].second + dy;
  if (std::abs(x) > half_width_ || std::abs(y) > half_width_) return std::nullopt;
  const int side = 2 * half_width_ + 1;
  const long k = index_[static_cast<std::size_t>(y + half_width_) * side + (x + half_width_)];
  if (k < 0) return std::nullopt;
  return static_cast<std::size_t>(k);
}

bool PhaseSpaceGrid::is_interior(std::size_t j) const {
  return neighbor(j, 1, 0) && neighbor(j, -1, 0) && neighbor(j, 0, 1) &&
         neighbor(j, 0, -1);
}

PhaseSpaceGrid make_grid(double radius, double spacing) {
  if (!(radius > 0.0) || !(spacing > 0.0) || !(spacing < radius)) {
    throw ConfigError("grid requires 0 < h < R (got R=" + std::to_string(radius) +
                      ", h=" + std::to_string(spacing) + ")");
  }
  return PhaseSpaceGrid(radius, spacing);
}

double identity_resolution_error(const FockSpace& fs, const PhaseSpaceGrid& grid,
                                 int block) {
  if (block < 1 || 2 * block > fs.n_max) {
    throw ContractError("identity_resolution_error: block must satisfy 1 <= block <= n_max/2");
  }
  const Matrix zero = Matrix::Zero(block, block);
  Matrix sum = deterministic_sum(grid.size(), zero, [&](std::size_t j) {
    Vector row(block);
    bra_fock_row(grid.alpha(j), std::span<Complex>(row.data(), row.size()));
    // |alpha><alpha| restricted to the block: conj(row) row^T
    return Matrix(row.conjugate() * row.transpose());
  });
  sum *= grid.weight();
  return max_norm(Matrix(sum - Matrix::Identity(block, block)));
}

}  // namespace precs
