#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "ibvp/grid.hpp"

namespace ibvp {

class Partition;
using PartitionPtr = std::shared_ptr<const Partition>;

/// Disjoint cover of the grid cells by N subdomains D_1..D_N.
///
/// A partition is built from a label per grid cell. Uniform partitions
/// (k x k square blocks) remember k so they can be refined; partitions
/// produced by refinement keep a pointer to their parent and the
/// child -> parent subdomain map.
class Partition {
 public:
  /// General constructor. labels[c] in [0, N) assigns grid cell c to a
  /// subdomain; every label must be used at least once.
  Partition(GridPtr grid, std::vector<int> labels, int level = 0,
            std::optional<int> blocks_per_side = std::nullopt, PartitionPtr parent = nullptr,
            std::vector<int> parent_of = {});

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }

  int size() const { return static_cast<int>(cells_.size()); }
  int level() const { return level_; }
  /// Smallest subdomain diameter (bounding-box diagonal).
  double r0() const { return r0_; }
  std::optional<int> blocks_per_side() const { return blocks_per_side_; }

  int label(int grid_cell) const { return labels_[grid_cell]; }
  const std::vector<int>& labels() const { return labels_; }
  const std::vector<int>& cells(int j) const { return cells_[j]; }
  double area(int j) const { return area_[j]; }

  const PartitionPtr& parent() const { return parent_; }
  /// Parent subdomain of child subdomain j; requires parent().
  int parent_of(int j) const { return parent_of_[j]; }

  /// Subdomain with centroid closest to the centre of the square.
  int most_interior_cell() const;

  bool same_layout(const Partition& other) const;

 private:
  GridPtr grid_;
  std::vector<int> labels_;
  std::vector<std::vector<int>> cells_;
  std::vector<double> area_;
  int level_;
  double r0_ = 0.0;
  std::optional<int> blocks_per_side_;
  PartitionPtr parent_;
  std::vector<int> parent_of_;
};

/// k x k uniform square blocks; requires (m - 1) % k == 0.
PartitionPtr make_uniform_partition(GridPtr grid, int k);

/// Splits every block of a uniform partition into factor^2 children.
PartitionPtr refine_partition(const PartitionPtr& p, int factor);

/// Haar-type local refinement: splits one rectangular subdomain into its
/// four quadrants. Not used by the default schedule.
PartitionPtr split_cell(const PartitionPtr& p, int j);

}  // namespace ibvp
