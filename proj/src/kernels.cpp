#include "ibvp/kernels.hpp"

namespace ibvp::kernels {

namespace {

double weighted_dot(const double* a, const double* b, const double* w, Eigen::Index n) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) s += w[i] * a[i] * b[i];
  return s;
}

double quadratic_form(const double* x, const Eigen::MatrixXd& m) {
  const Eigen::Index nb = m.rows();
  double s = 0.0;
  for (Eigen::Index q = 0; q < nb; ++q) {
    const double* mq = m.col(q).data();
    double t = 0.0;
    for (Eigen::Index p = 0; p < nb; ++p) t += mq[p] * x[p];
    s += t * x[q];
  }
  return s;
}

}  // namespace

namespace serial {

Eigen::MatrixXd weighted_gram(const Eigen::MatrixXd& u, const Eigen::VectorXd& w) {
  const Eigen::Index nb = u.cols();
  Eigen::MatrixXd g(nb, nb);
  for (Eigen::Index p = 0; p < nb; ++p)
    for (Eigen::Index q = p; q < nb; ++q) {
      g(p, q) = weighted_dot(u.col(p).data(), u.col(q).data(), w.data(), u.rows());
      g(q, p) = g(p, q);
    }
  return g;
}

Eigen::VectorXd row_quadratic_forms(const Eigen::MatrixXd& ut, const Eigen::MatrixXd& m) {
  Eigen::VectorXd g(ut.cols());
  for (Eigen::Index n = 0; n < ut.cols(); ++n) g[n] = quadratic_form(ut.col(n).data(), m);
  return g;
}

}  // namespace serial

namespace omp {

Eigen::MatrixXd weighted_gram(const Eigen::MatrixXd& u, const Eigen::VectorXd& w) {
  const long nb = static_cast<long>(u.cols());
  Eigen::MatrixXd g(nb, nb);
#pragma omp parallel for schedule(dynamic)
  for (long p = 0; p < nb; ++p)
    for (long q = p; q < nb; ++q) g(p, q) = weighted_dot(u.col(p).data(), u.col(q).data(), w.data(), u.rows());
  for (long p = 0; p < nb; ++p)
    for (long q = p + 1; q < nb; ++q) g(q, p) = g(p, q);
  return g;
}

Eigen::VectorXd row_quadratic_forms(const Eigen::MatrixXd& ut, const Eigen::MatrixXd& m) {
  const long n_nodes = static_cast<long>(ut.cols());
  Eigen::VectorXd g(n_nodes);
#pragma omp parallel for schedule(static)
  for (long n = 0; n < n_nodes; ++n) g[n] = quadratic_form(ut.col(n).data(), m);
  return g;
}

}  // namespace omp

}  // namespace ibvp::kernels
