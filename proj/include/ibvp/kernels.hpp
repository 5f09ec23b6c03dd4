#pragma once

// Data-parallel inner loops of the forward/derivative pipeline.
//
// Every kernel exists twice: a plain serial reference in ibvp::kernels::serial
// and an OpenMP version in ibvp::kernels::omp. Parallel versions split work
// over independent outputs only (columns, matrix entries, nodes) and keep the
// reference summation order inside each output, so both variants produce
// bit-identical results for any thread count.

#include <Eigen/Dense>

namespace ibvp::kernels {

enum class Exec { serial, parallel };

namespace serial {

/// G = U^T diag(w) U.
Eigen::MatrixXd weighted_gram(const Eigen::MatrixXd& u, const Eigen::VectorXd& w);
/// g[n] = sum_{p,q} M(p,q) U(n,p) U(n,q), with ut = U^T.
Eigen::VectorXd row_quadratic_forms(const Eigen::MatrixXd& ut, const Eigen::MatrixXd& m);

/// Column p of the result is solve(rhs.col(p)).
template <class SolveFn>
Eigen::MatrixXd solve_columns(const SolveFn& solve, const Eigen::MatrixXd& rhs) {
  Eigen::MatrixXd x(rhs.rows(), rhs.cols());
  for (Eigen::Index p = 0; p < rhs.cols(); ++p) {
    Eigen::VectorXd b = rhs.col(p);
    x.col(p) = solve(b);
  }
  return x;
}

}  // namespace serial

namespace omp {

Eigen::MatrixXd weighted_gram(const Eigen::MatrixXd& u, const Eigen::VectorXd& w);
Eigen::VectorXd row_quadratic_forms(const Eigen::MatrixXd& ut, const Eigen::MatrixXd& m);

template <class SolveFn>
Eigen::MatrixXd solve_columns(const SolveFn& solve, const Eigen::MatrixXd& rhs) {
  Eigen::MatrixXd x(rhs.rows(), rhs.cols());
  const long cols = static_cast<long>(rhs.cols());
#pragma omp parallel for schedule(dynamic)
  for (long p = 0; p < cols; ++p) {
    Eigen::VectorXd b = rhs.col(p);
    x.col(p) = solve(b);
  }
  return x;
}

}  // namespace omp

inline Eigen::MatrixXd weighted_gram(const Eigen::MatrixXd& u, const Eigen::VectorXd& w, Exec e) {
  return e == Exec::parallel ? omp::weighted_gram(u, w) : serial::weighted_gram(u, w);
}

inline Eigen::VectorXd row_quadratic_forms(const Eigen::MatrixXd& ut, const Eigen::MatrixXd& m, Exec e) {
  return e == Exec::parallel ? omp::row_quadratic_forms(ut, m) : serial::row_quadratic_forms(ut, m);
}

template <class SolveFn>
Eigen::MatrixXd solve_columns(const SolveFn& solve, const Eigen::MatrixXd& rhs, Exec e) {
  return e == Exec::parallel ? omp::solve_columns(solve, rhs) : serial::solve_columns(solve, rhs);
}

}  // namespace ibvp::kernels
