#include "ibvp/field.hpp"

#include <cmath>
#include <string>

#include "ibvp/errors.hpp"

namespace ibvp {

namespace {

void require_same(const Partition& a, const Partition& b) {
  if (&a != &b && !a.same_layout(b)) throw ConfigError("fields live on different partitions");
}

void require_same(const Grid& a, const Grid& b) {
  if (a.m() != b.m()) throw ConfigError("nodal fields live on different grids");
}

}  // namespace

PwcField::PwcField(PartitionPtr partition, Eigen::VectorXd coeffs, Bounds bounds)
    : partition_(std::move(partition)), coeffs_(std::move(coeffs)), bounds_(bounds) {
  if (!partition_) throw ConfigError("piecewise-constant field needs a partition");
  if (coeffs_.size() != partition_->size()) {
    throw ConfigError("field has " + std::to_string(coeffs_.size()) + " coefficients for " +
                      std::to_string(partition_->size()) + " subdomains");
  }
  if (bounds_.lower > bounds_.upper) throw ConfigError("bounds have lower > upper");
}

PwcField PwcField::constant(PartitionPtr partition, double value, Bounds bounds) {
  const int n = partition->size();
  return {std::move(partition), Eigen::VectorXd::Constant(n, value), bounds};
}

PwcField PwcField::indicator(PartitionPtr partition, int j) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(partition->size());
  c[j] = 1.0;
  return {std::move(partition), std::move(c)};
}

bool PwcField::admissible() const {
  for (double c : coeffs_)
    if (!bounds_.contains(c)) return false;
  return true;
}

Eigen::VectorXd PwcField::cell_values() const {
  const Partition& p = *partition_;
  Eigen::VectorXd out(p.grid().cell_count());
  for (int c = 0; c < out.size(); ++c) out[c] = coeffs_[p.label(c)];
  return out;
}

NodalField::NodalField(GridPtr grid, Eigen::VectorXd values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw ConfigError("nodal field needs a grid");
  if (values_.size() != grid_->node_count()) {
    throw ConfigError("nodal field has " + std::to_string(values_.size()) + " values for " +
                      std::to_string(grid_->node_count()) + " nodes");
  }
}

NodalField NodalField::zeros(GridPtr grid) {
  const int n = grid->node_count();
  return {std::move(grid), Eigen::VectorXd::Zero(n)};
}

Eigen::VectorXd NodalField::cell_values() const {
  const Grid& g = *grid_;
  Eigen::VectorXd out(g.cell_count());
  for (int c = 0; c < g.cell_count(); ++c) {
    const auto k = g.cell_corners(c);
    out[c] = 0.25 * (values_[k[0]] + values_[k[1]] + values_[k[2]] + values_[k[3]]);
  }
  return out;
}

Eigen::VectorXd average_cells(const Eigen::VectorXd& cell_values, const Partition& p) {
  Eigen::VectorXd out(p.size());
  for (int j = 0; j < p.size(); ++j) {
    double s = 0.0;
    for (int c : p.cells(j)) s += cell_values[c];
    out[j] = s / static_cast<double>(p.cells(j).size());
  }
  return out;
}

PwcField project(const NodalField& f, const PartitionPtr& p) {
  require_same(f.grid(), p->grid());
  return {p, average_cells(f.cell_values(), *p)};
}

PwcField project(const PwcField& f, const PartitionPtr& p) {
  require_same(f.partition().grid(), p->grid());
  if (f.partition_ptr() == p) return f;
  return {p, average_cells(f.cell_values(), *p), f.bounds()};
}

PwcField clamp_to_bounds(const PwcField& f) {
  Eigen::VectorXd c = f.coeffs().cwiseMax(f.bounds().lower).cwiseMin(f.bounds().upper);
  return f.with_coeffs(std::move(c));
}

double l2_inner(const PwcField& f, const PwcField& g) {
  require_same(f.partition(), g.partition());
  double s = 0.0;
  for (int j = 0; j < f.size(); ++j) s += f.partition().area(j) * f[j] * g[j];
  return s;
}

double l2_inner(const PwcField& f, const NodalField& g) {
  require_same(f.partition().grid(), g.grid());
  const Eigen::VectorXd gc = g.cell_values();
  const double a = g.grid().cell_area();
  double s = 0.0;
  for (int c = 0; c < gc.size(); ++c) s += a * f[f.partition().label(c)] * gc[c];
  return s;
}

double l2_norm(const PwcField& f) { return std::sqrt(l2_inner(f, f)); }

double l2_norm(const NodalField& f) {
  const Grid& g = f.grid();
  const Eigen::VectorXd& v = f.values();
  double s = 0.0;
  for (int c = 0; c < g.cell_count(); ++c) {
    const auto k = g.cell_corners(c);
    s += 0.25 * (v[k[0]] * v[k[0]] + v[k[1]] * v[k[1]] + v[k[2]] * v[k[2]] + v[k[3]] * v[k[3]]);
  }
  return std::sqrt(s * g.cell_area());
}

double l2_dist(const PwcField& f, const PwcField& g) {
  require_same(f.partition(), g.partition());
  return l2_norm(f.with_coeffs(f.coeffs() - g.coeffs()));
}

double l2_dist(const NodalField& f, const NodalField& g) {
  require_same(f.grid(), g.grid());
  return l2_norm(NodalField(f.grid_ptr(), f.values() - g.values()));
}

double bregman(const PwcField& f, const PwcField& g) {
  const double d = l2_dist(f, g);
  return 0.5 * d * d;
}

double bregman(const NodalField& f, const NodalField& g) {
  const double d = l2_dist(f, g);
  return 0.5 * d * d;
}

}  // namespace ibvp
