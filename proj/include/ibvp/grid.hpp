#pragma once

#include <array>
#include <memory>
#include <vector>

namespace ibvp {

/// Uniform node grid on the unit square with m nodes per side.
///
/// Nodes are numbered row-major, node(i, j) = j * m + i, with i running
/// along x. Grid cells are the (m-1)^2 squares between nodes, numbered the
/// same way. The boundary nodes form one closed counter-clockwise loop
/// starting at the origin.
class Grid {
 public:
  explicit Grid(int nodes_per_side);

  int m() const { return m_; }
  int cells_per_side() const { return m_ - 1; }
  double h() const { return h_; }
  double cell_area() const { return h_ * h_; }

  int node_count() const { return m_ * m_; }
  int cell_count() const { return (m_ - 1) * (m_ - 1); }

  int node(int i, int j) const { return j * m_ + i; }
  int cell(int ci, int cj) const { return cj * (m_ - 1) + ci; }
  double x(int i) const { return i * h_; }
  double y(int j) const { return j * h_; }

  const std::vector<int>& interior_nodes() const { return interior_; }
  /// Boundary nodes in loop order.
  const std::vector<int>& boundary_nodes() const { return boundary_; }

  /// Position of a node in interior_nodes(), or -1 for boundary nodes.
  int interior_slot(int node) const { return interior_slot_[node]; }
  /// Position of a node in boundary_nodes(), or -1 for interior nodes.
  int boundary_slot(int node) const { return boundary_slot_[node]; }

  /// The four corner nodes of grid cell c, counter-clockwise from lower-left.
  std::array<int, 4> cell_corners(int c) const;

  /// Spacing along the boundary loop.
  double boundary_spacing() const { return h_; }

 private:
  int m_;
  double h_;
  std::vector<int> interior_;
  std::vector<int> boundary_;
  std::vector<int> interior_slot_;
  std::vector<int> boundary_slot_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(int nodes_per_side);

}  // namespace ibvp
