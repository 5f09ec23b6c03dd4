#pragma once

#include <memory>

#include "ibvp/dtn.hpp"

namespace ibvp {

/// Sign of the coefficient-to-DtN derivative: with Lambda taken as the
/// outward normal derivative, d<Lambda g, h> = -omega^2 int dc u v.
inline constexpr double kDtnDerivativeSign = -1.0;

/// Discrete harmonic extensions u_p of all boundary indicators for one
/// coefficient field and frequency. Shared by the DtN map, its derivative
/// and the adjoint so that a gradient costs one DtN assembly.
class SolutionBank {
 public:
  SolutionBank(std::shared_ptr<const HelmholtzOperator> op, Eigen::MatrixXd extensions);

  const HelmholtzOperator& op() const { return *op_; }
  const std::shared_ptr<const HelmholtzOperator>& op_ptr() const { return op_; }
  /// node_count x nb; column p is u_p.
  const Eigen::MatrixXd& extensions() const { return u_; }
  /// nb x node_count (transpose, for node-wise kernels).
  const Eigen::MatrixXd& extensions_t() const { return ut_; }
  double omega2() const { return op_->omega2(); }

 private:
  std::shared_ptr<const HelmholtzOperator> op_;
  Eigen::MatrixXd u_;
  Eigen::MatrixXd ut_;
};

/// F(c^-2) together with the bank that produced it.
struct ForwardEvaluation {
  DtnMatrix dtn;
  SolutionBank bank;
};

ForwardEvaluation evaluate_forward(const PwcField& c2inv, double omega2, Bounds admissible,
                                   BoundaryWeightsPtr weights = nullptr,
                                   kernels::Exec exec = kernels::Exec::parallel);
/// Uses c2inv.bounds() as the admissible set.
ForwardEvaluation evaluate_forward(const PwcField& c2inv, double omega2, BoundaryWeightsPtr weights = nullptr,
                                   kernels::Exec exec = kernels::Exec::parallel);

/// DF(c^-2) delta, entry (p,q) = -omega^2 sum_cells delta avg(u_p u_q) area.
Eigen::MatrixXd apply_DF(const SolutionBank& bank, const PwcField& delta,
                         kernels::Exec exec = kernels::Exec::parallel);

/// R = F(c^-2) - y with its Y-norm.
struct Residual {
  Eigen::MatrixXd matrix;
  double norm = 0.0;
};

Residual make_residual(const DtnMatrix& model, const DtnMatrix& data);

/// DF(c^-2)^* j_2(R) as a nodal field G, so that
///   data_inner(apply_DF(bank, delta), R) == l2_inner(delta, G)
/// for every piecewise-constant delta. j_2 is the identity in the Hilbert
/// realisation of the data space.
NodalField apply_DF_adjoint(const SolutionBank& bank, const Eigen::MatrixXd& r, const BoundaryWeights& w,
                            kernels::Exec exec = kernels::Exec::parallel);

/// Adjoint of DF restricted to the piecewise-constant space of `p`: the
/// cell averages of apply_DF_adjoint.
PwcField projected_gradient(const SolutionBank& bank, const Eigen::MatrixXd& r, const BoundaryWeights& w,
                            const PartitionPtr& p, kernels::Exec exec = kernels::Exec::parallel);

/// max_j ||DF chi_j||_Y / ||chi_j||_L2 over the subdomain indicators of p.
double df_norm_probe(const SolutionBank& bank, const PartitionPtr& p, const BoundaryWeights& w,
                     kernels::Exec exec = kernels::Exec::parallel);

/// max_j ||(DF(c1) - DF(c2)) chi_j||_Y / ||chi_j||_L2 over the subdomain
/// indicators of the common partition.
double lipschitz_DF_probe(const SolutionBank& bank1, const SolutionBank& bank2, const PartitionPtr& p,
                          const BoundaryWeights& w, kernels::Exec exec = kernels::Exec::parallel);
double lipschitz_DF_probe(const PwcField& c1, const PwcField& c2, double omega2,
                          BoundaryWeightsPtr weights = nullptr);

}  // namespace ibvp
