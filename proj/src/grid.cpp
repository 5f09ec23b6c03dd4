#include "ibvp/grid.hpp"

#include <string>

#include "ibvp/errors.hpp"

namespace ibvp {

Grid::Grid(int nodes_per_side) : m_(nodes_per_side) {
  if (m_ < 3) {
    throw ConfigError("grid needs at least 3 nodes per side, got " + std::to_string(m_));
  }
  h_ = 1.0 / (m_ - 1);

  interior_slot_.assign(node_count(), -1);
  boundary_slot_.assign(node_count(), -1);
  for (int j = 1; j < m_ - 1; ++j)
    for (int i = 1; i < m_ - 1; ++i) {
      interior_slot_[node(i, j)] = static_cast<int>(interior_.size());
      interior_.push_back(node(i, j));
    }

  const int last = m_ - 1;
  for (int i = 0; i < last; ++i) boundary_.push_back(node(i, 0));
  for (int j = 0; j < last; ++j) boundary_.push_back(node(last, j));
  for (int i = last; i > 0; --i) boundary_.push_back(node(i, last));
  for (int j = last; j > 0; --j) boundary_.push_back(node(0, j));
  for (std::size_t s = 0; s < boundary_.size(); ++s) boundary_slot_[boundary_[s]] = static_cast<int>(s);
}

std::array<int, 4> Grid::cell_corners(int c) const {
  const int ci = c % (m_ - 1);
  const int cj = c / (m_ - 1);
  return {node(ci, cj), node(ci + 1, cj), node(ci + 1, cj + 1), node(ci, cj + 1)};
}

GridPtr make_grid(int nodes_per_side) { return std::make_shared<const Grid>(nodes_per_side); }

}  // namespace ibvp
