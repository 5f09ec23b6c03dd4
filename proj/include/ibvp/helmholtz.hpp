#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <memory>

#include "ibvp/field.hpp"
#include "ibvp/kernels.hpp"
#include "ibvp/spectrum.hpp"

namespace ibvp {

/// Discrete Helmholtz operator -Laplace - omega^2 c^-2 on the unit square.
///
/// The operator is stored as the symmetric bilinear form
///   Q(u, v) = sum_edges w_e (u_a - u_b)(v_a - v_b) - omega^2 sum_n M_n u_n v_n
/// over all grid nodes, with edge weight 1 for interior edges and 1/2 for
/// edges on the boundary, and lumped mass M_n = sum of c^-2 * h^2 / 4 over the
/// grid cells touching node n. Interior rows of Q are h^2 times the five-point
/// discretisation with the nodal coefficient averaged from adjacent cells.
/// The same form defines the variational Neumann data of the DtN map.
class HelmholtzOperator {
 public:
  /// Runs the spectrum guard for `admissible` and checks that c2inv lies
  /// within it. Throws AdmissibilityError / ConfigError.
  HelmholtzOperator(PwcField c2inv, double omega2, Bounds admissible);
  /// Uses c2inv.bounds() as the admissible set.
  HelmholtzOperator(PwcField c2inv, double omega2);

  const Grid& grid() const { return c2inv_.partition().grid(); }
  const GridPtr& grid_ptr() const { return c2inv_.partition().grid_ptr(); }
  const PwcField& coefficient() const { return c2inv_; }
  double omega2() const { return omega2_; }
  const Bounds& admissible() const { return admissible_; }
  const SpectrumWindow& window() const { return window_; }

  /// Full nodal form Q (node_count x node_count).
  const Eigen::SparseMatrix<double>& form() const { return form_; }
  const Eigen::SparseMatrix<double>& interior_block() const { return a_ii_; }
  /// Interior rows, boundary columns (boundary loop order).
  const Eigen::SparseMatrix<double>& coupling() const { return a_ib_; }
  /// Lumped mass M_n per node (includes c^-2).
  const Eigen::VectorXd& lumped_mass() const { return mass_; }

 private:
  PwcField c2inv_;
  double omega2_;
  Bounds admissible_;
  SpectrumWindow window_;
  Eigen::VectorXd mass_;
  Eigen::SparseMatrix<double> form_;
  Eigen::SparseMatrix<double> a_ii_;
  Eigen::SparseMatrix<double> a_ib_;
};

/// Node weights w_n = sum over cells touching n of f_cell * h^2 / 4; with
/// these, sum_n w_n a_n b_n is the cell-midpoint quadrature of f * (a b).
Eigen::VectorXd node_weights(const PwcField& f);

/// Sparse LDL^T factorisation of the interior block, shared by all solves
/// with one operator. solve() is const and safe to call concurrently.
class HelmholtzSolver {
 public:
  explicit HelmholtzSolver(std::shared_ptr<const HelmholtzOperator> op);

  const HelmholtzOperator& op() const { return *op_; }
  const std::shared_ptr<const HelmholtzOperator>& op_ptr() const { return op_; }

  /// Smallest |D_ii| of the LDL^T factorisation.
  double smallest_pivot() const { return smallest_pivot_; }

  /// Interior solve A_ii x = b with one step of iterative refinement.
  Eigen::VectorXd solve_interior(const Eigen::VectorXd& b) const;

  /// Full nodal solution with u = g on the boundary (loop order) and the
  /// five-point equation (-Laplace - omega^2 c^-2) u = f at interior nodes.
  /// Throws SolverError if the relative residual exceeds 1e-10.
  NodalField solve(const Eigen::VectorXd& g, const NodalField* f = nullptr) const;

  /// Discrete harmonic extensions of all boundary indicators: column p is
  /// the nodal solution with boundary data e_p.
  Eigen::MatrixXd boundary_extensions(kernels::Exec exec = kernels::Exec::parallel) const;

 private:
  std::shared_ptr<const HelmholtzOperator> op_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt_;
  double smallest_pivot_ = 0.0;
};

/// Convenience: factor and solve once.
NodalField solve(const HelmholtzOperator& op, const Eigen::VectorXd& g, const NodalField* f = nullptr);

}  // namespace ibvp
