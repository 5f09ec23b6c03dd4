#include "ibvp/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ibvp/errors.hpp"

namespace ibvp {

namespace {

struct Box {
  int ci0 = std::numeric_limits<int>::max();
  int cj0 = std::numeric_limits<int>::max();
  int ci1 = -1;
  int cj1 = -1;
};

Box bounding_box(const Grid& g, const std::vector<int>& cells) {
  Box b;
  const int n = g.cells_per_side();
  for (int c : cells) {
    b.ci0 = std::min(b.ci0, c % n);
    b.ci1 = std::max(b.ci1, c % n);
    b.cj0 = std::min(b.cj0, c / n);
    b.cj1 = std::max(b.cj1, c / n);
  }
  return b;
}

}  // namespace

Partition::Partition(GridPtr grid, std::vector<int> labels, int level,
                     std::optional<int> blocks_per_side, PartitionPtr parent,
                     std::vector<int> parent_of)
    : grid_(std::move(grid)),
      labels_(std::move(labels)),
      level_(level),
      blocks_per_side_(blocks_per_side),
      parent_(std::move(parent)),
      parent_of_(std::move(parent_of)) {
  if (!grid_) throw ConfigError("partition needs a grid");
  if (static_cast<int>(labels_.size()) != grid_->cell_count()) {
    throw ConfigError("partition labels must cover all " + std::to_string(grid_->cell_count()) +
                      " grid cells, got " + std::to_string(labels_.size()));
  }
  if (level_ < 0) throw ConfigError("partition level must be >= 0");
  int n = 0;
  for (int l : labels_) {
    if (l < 0) throw ConfigError("negative partition label");
    n = std::max(n, l + 1);
  }
  cells_.resize(n);
  for (int c = 0; c < grid_->cell_count(); ++c) cells_[labels_[c]].push_back(c);

  r0_ = std::numeric_limits<double>::infinity();
  const double h = grid_->h();
  for (int j = 0; j < n; ++j) {
    if (cells_[j].empty()) throw ConfigError("partition subdomain " + std::to_string(j) + " is empty");
    area_.push_back(cells_[j].size() * grid_->cell_area());
    const Box b = bounding_box(*grid_, cells_[j]);
    r0_ = std::min(r0_, std::hypot((b.ci1 - b.ci0 + 1) * h, (b.cj1 - b.cj0 + 1) * h));
  }

  if (parent_) {
    if (static_cast<int>(parent_of_.size()) != n) throw ConfigError("parent map has wrong length");
    for (int c = 0; c < grid_->cell_count(); ++c) {
      if (parent_->label(c) != parent_of_[labels_[c]]) {
        throw ConfigError("child subdomain is not contained in its parent subdomain");
      }
    }
  }
}

int Partition::most_interior_cell() const {
  const Grid& g = *grid_;
  const int n = g.cells_per_side();
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int j = 0; j < size(); ++j) {
    double cx = 0.0, cy = 0.0;
    for (int c : cells_[j]) {
      cx += (c % n + 0.5) * g.h();
      cy += (c / n + 0.5) * g.h();
    }
    cx /= cells_[j].size();
    cy /= cells_[j].size();
    const double d = std::hypot(cx - 0.5, cy - 0.5);
    if (d < best_d - 1e-12) {
      best_d = d;
      best = j;
    }
  }
  return best;
}

bool Partition::same_layout(const Partition& other) const {
  return grid_->m() == other.grid_->m() && labels_ == other.labels_;
}

PartitionPtr make_uniform_partition(GridPtr grid, int k) {
  if (!grid) throw ConfigError("partition needs a grid");
  const int n = grid->cells_per_side();
  if (k < 1 || n % k != 0) {
    throw ConfigError("cannot tile grid m=" + std::to_string(grid->m()) + " into k=" +
                      std::to_string(k) + " blocks per side: " + std::to_string(n) +
                      " cells per side is not divisible by k");
  }
  const int w = n / k;
  std::vector<int> labels(grid->cell_count());
  for (int cj = 0; cj < n; ++cj)
    for (int ci = 0; ci < n; ++ci) labels[grid->cell(ci, cj)] = (cj / w) * k + ci / w;
  return std::make_shared<const Partition>(std::move(grid), std::move(labels), 0, k);
}

PartitionPtr refine_partition(const PartitionPtr& p, int factor) {
  if (!p) throw ConfigError("refine_partition: null partition");
  if (factor < 2) throw ConfigError("refinement factor must be >= 2, got " + std::to_string(factor));
  if (!p->blocks_per_side()) throw ConfigError("refine_partition requires a uniform partition");
  const int k = *p->blocks_per_side() * factor;
  const GridPtr& grid = p->grid_ptr();
  const int n = grid->cells_per_side();
  if (n % k != 0) {
    throw ConfigError("cannot refine to k=" + std::to_string(k) + " blocks per side on grid m=" +
                      std::to_string(grid->m()) + ": " + std::to_string(n) +
                      " cells per side is not divisible by k");
  }
  const int w = n / k;
  std::vector<int> labels(grid->cell_count());
  std::vector<int> parent_of(k * k);
  for (int cj = 0; cj < n; ++cj)
    for (int ci = 0; ci < n; ++ci) {
      const int child = (cj / w) * k + ci / w;
      labels[grid->cell(ci, cj)] = child;
      parent_of[child] = p->label(grid->cell(ci, cj));
    }
  return std::make_shared<const Partition>(grid, std::move(labels), p->level() + 1, k, p,
                                           std::move(parent_of));
}

PartitionPtr split_cell(const PartitionPtr& p, int j) {
  if (!p) throw ConfigError("split_cell: null partition");
  if (j < 0 || j >= p->size()) throw ConfigError("split_cell: no subdomain " + std::to_string(j));
  const Grid& g = p->grid();
  const Box b = bounding_box(g, p->cells(j));
  const int wi = b.ci1 - b.ci0 + 1;
  const int wj = b.cj1 - b.cj0 + 1;
  if (static_cast<int>(p->cells(j).size()) != wi * wj) throw ConfigError("split_cell: subdomain is not a rectangle");
  if (wi % 2 != 0 || wj % 2 != 0) throw ConfigError("split_cell: subdomain sides must be even in grid cells");

  const int n = g.cells_per_side();
  const int base = p->size();
  std::vector<int> labels = p->labels();
  std::vector<int> parent_of(base + 3);
  for (int q = 0; q < base; ++q) parent_of[q] = q;
  for (int q = base; q < base + 3; ++q) parent_of[q] = j;
  for (int c : p->cells(j)) {
    const int qi = (c % n - b.ci0) / (wi / 2);
    const int qj = (c / n - b.cj0) / (wj / 2);
    const int quadrant = qj * 2 + qi;
    labels[c] = quadrant == 0 ? j : base + quadrant - 1;
  }
  return std::make_shared<const Partition>(p->grid_ptr(), std::move(labels), p->level() + 1,
                                           std::nullopt, p, std::move(parent_of));
}

}  // namespace ibvp
