#include "ibvp/derivative.hpp"

#include <algorithm>
#include <cmath>

#include "ibvp/errors.hpp"

namespace ibvp {

SolutionBank::SolutionBank(std::shared_ptr<const HelmholtzOperator> op, Eigen::MatrixXd extensions)
    : op_(std::move(op)), u_(std::move(extensions)), ut_(u_.transpose()) {}

ForwardEvaluation evaluate_forward(const PwcField& c2inv, double omega2, Bounds admissible,
                                   BoundaryWeightsPtr weights, kernels::Exec exec) {
  auto op = std::make_shared<const HelmholtzOperator>(c2inv, omega2, admissible);
  const HelmholtzSolver solver(op);
  Eigen::MatrixXd u = solver.boundary_extensions(exec);
  DtnMatrix dtn = dtn_from_extensions(*op, u, std::move(weights));
  return {std::move(dtn), SolutionBank(op, std::move(u))};
}

ForwardEvaluation evaluate_forward(const PwcField& c2inv, double omega2, BoundaryWeightsPtr weights,
                                   kernels::Exec exec) {
  return evaluate_forward(c2inv, omega2, c2inv.bounds(), std::move(weights), exec);
}

Eigen::MatrixXd apply_DF(const SolutionBank& bank, const PwcField& delta, kernels::Exec exec) {
  if (delta.partition().grid().m() != bank.op().grid().m()) {
    throw ConfigError("perturbation and solution bank live on different grids");
  }
  const Eigen::VectorXd w = (kDtnDerivativeSign * bank.omega2()) * node_weights(delta);
  return kernels::weighted_gram(bank.extensions(), w, exec);
}

Residual make_residual(const DtnMatrix& model, const DtnMatrix& data) {
  if (model.nb() != data.nb()) throw ConfigError("model and data DtN maps have different sizes");
  Residual r;
  r.matrix = model.lambda - data.lambda;
  r.norm = dtn_data_norm(r.matrix, *model.weights);
  return r;
}

NodalField apply_DF_adjoint(const SolutionBank& bank, const Eigen::MatrixXd& r, const BoundaryWeights& w,
                            kernels::Exec exec) {
  if (r.rows() != bank.extensions().cols()) throw ConfigError("residual does not match the solution bank");
  const Eigen::MatrixXd m = pairing_representer(r, w);
  Eigen::VectorXd g = kernels::row_quadratic_forms(bank.extensions_t(), m, exec);
  g *= kDtnDerivativeSign * bank.omega2();
  return {bank.op().grid_ptr(), std::move(g)};
}

PwcField projected_gradient(const SolutionBank& bank, const Eigen::MatrixXd& r, const BoundaryWeights& w,
                            const PartitionPtr& p, kernels::Exec exec) {
  return project(apply_DF_adjoint(bank, r, w, exec), p);
}

double df_norm_probe(const SolutionBank& bank, const PartitionPtr& p, const BoundaryWeights& w,
                     kernels::Exec exec) {
  double best = 0.0;
  for (int j = 0; j < p->size(); ++j) {
    const PwcField chi = PwcField::indicator(p, j);
    best = std::max(best, dtn_data_norm(apply_DF(bank, chi, exec), w) / l2_norm(chi));
  }
  return best;
}

double lipschitz_DF_probe(const SolutionBank& bank1, const SolutionBank& bank2, const PartitionPtr& p,
                          const BoundaryWeights& w, kernels::Exec exec) {
  double best = 0.0;
  for (int j = 0; j < p->size(); ++j) {
    const PwcField chi = PwcField::indicator(p, j);
    const Eigen::MatrixXd d = apply_DF(bank1, chi, exec) - apply_DF(bank2, chi, exec);
    best = std::max(best, dtn_data_norm(d, w) / l2_norm(chi));
  }
  return best;
}

double lipschitz_DF_probe(const PwcField& c1, const PwcField& c2, double omega2, BoundaryWeightsPtr weights) {
  if (!c1.partition().same_layout(c2.partition())) throw ConfigError("probe fields must share a partition");
  if (!weights) weights = make_boundary_weights(c1.partition().grid());
  if ((c1.coeffs() - c2.coeffs()).isZero(0.0)) return 0.0;
  const auto e1 = evaluate_forward(c1, omega2, weights);
  const auto e2 = evaluate_forward(c2, omega2, weights);
  return lipschitz_DF_probe(e1.bank, e2.bank, c1.partition_ptr(), *weights);
}

}  // namespace ibvp
