#pragma once

#include <Eigen/Dense>
#include <limits>

#include "ibvp/partition.hpp"

namespace ibvp {

/// Box constraint [lower, upper] on piecewise-constant coefficients.
struct Bounds {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();

  bool contains(double v) const { return v >= lower && v <= upper; }
};

/// Piecewise-constant field sum_j c_j chi_{D_j}; the unknown squared slowness
/// lives in this space. Perturbations use the default unbounded Bounds.
class PwcField {
 public:
  PwcField(PartitionPtr partition, Eigen::VectorXd coeffs, Bounds bounds = {});

  static PwcField constant(PartitionPtr partition, double value, Bounds bounds = {});
  static PwcField indicator(PartitionPtr partition, int j);

  const Partition& partition() const { return *partition_; }
  const PartitionPtr& partition_ptr() const { return partition_; }
  const Eigen::VectorXd& coeffs() const { return coeffs_; }
  double operator[](int j) const { return coeffs_[j]; }
  int size() const { return static_cast<int>(coeffs_.size()); }
  const Bounds& bounds() const { return bounds_; }

  bool admissible() const;
  PwcField with_coeffs(Eigen::VectorXd coeffs) const { return {partition_, std::move(coeffs), bounds_}; }
  PwcField with_bounds(Bounds b) const { return {partition_, coeffs_, b}; }

  /// Value on every grid cell.
  Eigen::VectorXd cell_values() const;

 private:
  PartitionPtr partition_;
  Eigen::VectorXd coeffs_;
  Bounds bounds_;
};

/// One value per grid node, row-major.
class NodalField {
 public:
  NodalField(GridPtr grid, Eigen::VectorXd values);

  static NodalField zeros(GridPtr grid);
  template <class F>
  static NodalField sample(GridPtr grid, F&& f) {
    Eigen::VectorXd v(grid->node_count());
    for (int j = 0; j < grid->m(); ++j)
      for (int i = 0; i < grid->m(); ++i) v[grid->node(i, j)] = f(grid->x(i), grid->y(j));
    return {std::move(grid), std::move(v)};
  }

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const Eigen::VectorXd& values() const { return values_; }
  double operator[](int n) const { return values_[n]; }

  /// Per grid cell average of the four corner values (midpoint quadrature of
  /// the bilinear interpolant).
  Eigen::VectorXd cell_values() const;

 private:
  GridPtr grid_;
  Eigen::VectorXd values_;
};

/// Cell-area average of per-grid-cell values over every subdomain.
Eigen::VectorXd average_cells(const Eigen::VectorXd& cell_values, const Partition& p);

/// L2 projection onto span{chi_{D_j}}: coefficient j is the average over D_j.
PwcField project(const NodalField& f, const PartitionPtr& p);
/// Re-expresses a piecewise-constant field on another partition of the same
/// grid. Injection when p refines f's partition, averaging when it coarsens.
PwcField project(const PwcField& f, const PartitionPtr& p);

PwcField clamp_to_bounds(const PwcField& f);

double l2_norm(const PwcField& f);
double l2_norm(const NodalField& f);
double l2_dist(const PwcField& f, const PwcField& g);
double l2_dist(const NodalField& f, const NodalField& g);
double l2_inner(const PwcField& f, const PwcField& g);
/// Pairing of a piecewise-constant field with a nodal one under the
/// cell-midpoint quadrature of the nodal field.
double l2_inner(const PwcField& f, const NodalField& g);

/// Bregman distance of the squared L2 norm: half the squared distance.
double bregman(const PwcField& f, const PwcField& g);
double bregman(const NodalField& f, const NodalField& g);

}  // namespace ibvp
