#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "precs/operator.hpp"
#include "precs/tolerances.hpp"

namespace precs {

/// Bosonic mode truncated to Fock states |0>..|n_max-1>.
struct FockSpace {
  explicit FockSpace(int n_max);
  int n_max;
};

Operator annihilation(const FockSpace& fs);
Operator creation(const FockSpace& fs);
Operator number_operator(const FockSpace& fs);

/// Label of a Glauber coherent state |alpha>.
struct CoherentPoint {
  Complex alpha;
};

/// Poisson mass e^{-|alpha|^2} sum_{n >= n_max} |alpha|^{2n}/n! that the
/// truncated space cannot represent.
double truncation_tail(const FockSpace& fs, CoherentPoint p);

/// Throws TruncationError when the tail exceeds tol.truncation.
void require_faithful(const FockSpace& fs, CoherentPoint p,
                      const Tolerances& tol = {});

/// Fills out[xi] = <alpha|xi> = e^{-|alpha|^2/2} conj(alpha)^xi / sqrt(xi!)
/// for xi < out.size(), using the stable upward recurrence.
void bra_fock_row(Complex alpha, std::span<Complex> out);

/// Truncated series for |alpha>. Not renormalized: the norm deficit equals
/// the truncation tail.
Vector coherent_vector(const FockSpace& fs, CoherentPoint p,
                       const Tolerances& tol = {});

/// <p|q> = exp(-(|p|^2 + |q|^2)/2 + conj(p) q).
Complex overlap(CoherentPoint p, CoherentPoint q);

/// D(alpha) = exp(alpha a^dagger - conj(alpha) a) on the truncated space.
Operator displacement(const FockSpace& fs, CoherentPoint p,
                      const Tolerances& tol = {});

/// Cartesian midpoint rule for the measure d^2 alpha / pi over the disc
/// |alpha| <= radius. Points sit at lattice sites alpha = spacing*(ix + i iy)
/// (cell centers) and are stored in row-major scan order: iy ascending, then
/// ix ascending.
class PhaseSpaceGrid {
 public:
  PhaseSpaceGrid(double radius, double spacing);

  double radius() const { return radius_; }
  double spacing() const { return spacing_; }
  std::size_t size() const { return points_.size(); }

  const std::vector<CoherentPoint>& points() const { return points_; }
  Complex alpha(std::size_t j) const { return points_[j].alpha; }
  /// Every point carries the same weight spacing^2 / pi.
  double weight() const { return weight_; }
  double total_weight() const { return weight_ * static_cast<double>(size()); }

  /// Lattice coordinates (ix, iy) of point j.
  int ix(std::size_t j) const { return lattice_[j].first; }
  int iy(std::size_t j) const { return lattice_[j].second; }

  /// Index of the point at lattice offset (dx, dy) from j, if it is on the
  /// grid.
  std::optional<std::size_t> neighbor(std::size_t j, int dx, int dy) const;
  /// True when all four axis neighbours exist.
  bool is_interior(std::size_t j) const;

 private:
  double radius_;
  double spacing_;
  double weight_;
  int half_width_;
  std::vector<CoherentPoint> points_;
  std::vector<std::pair<int, int>> lattice_;
  std::vector<long> index_;  // (2*half_width+1)^2 table, -1 when off-grid
};

/// Throws ConfigError unless 0 < h < R.
PhaseSpaceGrid make_grid(double radius, double spacing);

/// Max-norm of sum_j w_j |alpha_j><alpha_j| - 1 on Fock indices n, m < block.
/// Requires block <= n_max / 2.
double identity_resolution_error(const FockSpace& fs, const PhaseSpaceGrid& grid,
                                 int block);

}  // namespace precs
