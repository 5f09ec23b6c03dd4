#include "ibvp/helmholtz.hpp"

#include <cmath>
#include <sstream>

#include "ibvp/errors.hpp"
#include "ibvp/field_io.hpp"

namespace ibvp {

namespace {

constexpr double kPivotRatio = 1e-13;
constexpr double kResidualTol = 1e-10;

}  // namespace

Eigen::VectorXd node_weights(const PwcField& f) {
  const Grid& g = f.partition().grid();
  const double q = 0.25 * g.cell_area();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(g.node_count());
  for (int c = 0; c < g.cell_count(); ++c) {
    const double v = q * f[f.partition().label(c)];
    for (int n : g.cell_corners(c)) w[n] += v;
  }
  return w;
}

HelmholtzOperator::HelmholtzOperator(PwcField c2inv, double omega2)
    : HelmholtzOperator(c2inv, omega2, c2inv.bounds()) {}

HelmholtzOperator::HelmholtzOperator(PwcField c2inv, double omega2, Bounds admissible)
    : c2inv_(std::move(c2inv)), omega2_(omega2), admissible_(admissible) {
  if (!std::isfinite(admissible_.lower) || !std::isfinite(admissible_.upper)) {
    throw ConfigError("Helmholtz operator needs finite coefficient bounds B1, B2");
  }
  window_ = spectrum_guard(omega2_, admissible_.lower, admissible_.upper);
  for (int j = 0; j < c2inv_.size(); ++j) {
    if (!admissible_.contains(c2inv_[j])) {
      throw ConfigError("coefficient c_" + std::to_string(j) + " = " + format_number(c2inv_[j]) +
                        " outside [" + format_number(admissible_.lower) + ", " +
                        format_number(admissible_.upper) + "]");
    }
  }

  const Grid& g = grid();
  const int m = g.m();
  mass_ = node_weights(c2inv_);

  std::vector<Eigen::Triplet<double>> t;
  t.reserve(5 * g.node_count());
  Eigen::VectorXd diag = -omega2_ * mass_;
  auto edge = [&](int a, int b, double w) {
    diag[a] += w;
    diag[b] += w;
    t.emplace_back(a, b, -w);
    t.emplace_back(b, a, -w);
  };
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) {
      if (i + 1 < m) edge(g.node(i, j), g.node(i + 1, j), (j == 0 || j == m - 1) ? 0.5 : 1.0);
      if (j + 1 < m) edge(g.node(i, j), g.node(i, j + 1), (i == 0 || i == m - 1) ? 0.5 : 1.0);
    }
  for (int n = 0; n < g.node_count(); ++n) t.emplace_back(n, n, diag[n]);
  form_.resize(g.node_count(), g.node_count());
  form_.setFromTriplets(t.begin(), t.end());

  const auto& interior = g.interior_nodes();
  const int ni = static_cast<int>(interior.size());
  const int nb = static_cast<int>(g.boundary_nodes().size());
  std::vector<Eigen::Triplet<double>> tii, tib;
  for (int k = 0; k < form_.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(form_, k); it; ++it) {
      const int row = g.interior_slot(static_cast<int>(it.row()));
      if (row < 0) continue;
      const int col = static_cast<int>(it.col());
      if (g.interior_slot(col) >= 0) {
        tii.emplace_back(row, g.interior_slot(col), it.value());
      } else {
        tib.emplace_back(row, g.boundary_slot(col), it.value());
      }
    }
  a_ii_.resize(ni, ni);
  a_ii_.setFromTriplets(tii.begin(), tii.end());
  a_ib_.resize(ni, nb);
  a_ib_.setFromTriplets(tib.begin(), tib.end());
}

HelmholtzSolver::HelmholtzSolver(std::shared_ptr<const HelmholtzOperator> op) : op_(std::move(op)) {
  ldlt_.compute(op_->interior_block());
  const double max_pivot = ldlt_.info() == Eigen::Success ? ldlt_.vectorD().cwiseAbs().maxCoeff() : 0.0;
  smallest_pivot_ = ldlt_.info() == Eigen::Success ? ldlt_.vectorD().cwiseAbs().minCoeff() : 0.0;
  if (ldlt_.info() != Eigen::Success || !(smallest_pivot_ > kPivotRatio * max_pivot)) {
    std::ostringstream msg;
    msg << "discrete Helmholtz system is singular or nearly so (omega^2 = " << format_number(op_->omega2())
        << " is near an eigenfrequency); smallest pivot " << format_number(smallest_pivot_);
    throw SolverError(msg.str(), smallest_pivot_);
  }
}

Eigen::VectorXd HelmholtzSolver::solve_interior(const Eigen::VectorXd& b) const {
  Eigen::VectorXd x = ldlt_.solve(b);
  const Eigen::VectorXd r = b - op_->interior_block() * x;
  x += ldlt_.solve(r);
  return x;
}

NodalField HelmholtzSolver::solve(const Eigen::VectorXd& g, const NodalField* f) const {
  const Grid& grid = op_->grid();
  const auto& boundary = grid.boundary_nodes();
  const auto& interior = grid.interior_nodes();
  if (g.size() != static_cast<Eigen::Index>(boundary.size())) {
    throw ConfigError("boundary data has " + std::to_string(g.size()) + " values, grid has " +
                      std::to_string(boundary.size()) + " boundary nodes");
  }
  Eigen::VectorXd rhs = -(op_->coupling() * g);
  if (f) {
    if (f->grid().m() != grid.m()) throw ConfigError("source lives on a different grid");
    for (std::size_t k = 0; k < interior.size(); ++k) rhs[k] += grid.cell_area() * (*f)[interior[k]];
  }
  const Eigen::VectorXd x = solve_interior(rhs);
  const double res = (op_->interior_block() * x - rhs).norm();
  const double scale = std::max(rhs.norm(), (op_->interior_block() * x).norm());
  if (scale > 0.0 && !(res <= kResidualTol * scale)) {
    throw SolverError("Helmholtz solve residual " + format_number(res / scale) + " exceeds tolerance",
                      smallest_pivot_);
  }
  Eigen::VectorXd u(grid.node_count());
  for (std::size_t k = 0; k < boundary.size(); ++k) u[boundary[k]] = g[k];
  for (std::size_t k = 0; k < interior.size(); ++k) u[interior[k]] = x[k];
  return {op_->grid_ptr(), std::move(u)};
}

Eigen::MatrixXd HelmholtzSolver::boundary_extensions(kernels::Exec exec) const {
  const Grid& grid = op_->grid();
  const auto& boundary = grid.boundary_nodes();
  const auto& interior = grid.interior_nodes();
  const Eigen::MatrixXd rhs = -Eigen::MatrixXd(op_->coupling());
  const Eigen::MatrixXd x = kernels::solve_columns(
      [this](const Eigen::VectorXd& b) { return solve_interior(b); }, rhs, exec);
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(grid.node_count(), static_cast<Eigen::Index>(boundary.size()));
  for (std::size_t k = 0; k < boundary.size(); ++k) u(boundary[k], k) = 1.0;
  for (std::size_t k = 0; k < interior.size(); ++k) u.row(interior[k]) = x.row(k);
  return u;
}

NodalField solve(const HelmholtzOperator& op, const Eigen::VectorXd& g, const NodalField* f) {
  return HelmholtzSolver(std::make_shared<const HelmholtzOperator>(op)).solve(g, f);
}

}  // namespace ibvp
