#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <memory>
#include <string>

#include "ibvp/helmholtz.hpp"

namespace ibvp {

/// Discrete surrogates of the H^{1/2} / H^{-1/2} norms on the boundary loop.
///
/// With the periodic loop Laplacian L_b = V M V^T (spacing h_b),
///   plus  = h_b V (I + M)^{1/2} V^T,   minus = h_b V (I + M)^{-1/2} V^T,
/// so plus * minus = h_b^2 I. minus_sqrt is the SPD square root of minus.
struct BoundaryWeights {
  Eigen::MatrixXd plus;
  Eigen::MatrixXd minus;
  Eigen::MatrixXd minus_sqrt;
  double hb = 0.0;

  Eigen::Index size() const { return plus.rows(); }
};

using BoundaryWeightsPtr = std::shared_ptr<const BoundaryWeights>;

BoundaryWeights build_boundary_weights(const Grid& grid);
BoundaryWeightsPtr make_boundary_weights(const Grid& grid);

/// How Neumann data is extracted from a discrete solution.
enum class NeumannScheme {
  /// Q(u, e_q): the discrete bilinear form tested with the boundary
  /// indicator. Makes the discrete Alessandrini identity exact.
  variational,
  /// u_q - u_inward (one-sided difference, scaled to pairing coordinates).
  /// Kept only to show what the variational definition buys.
  one_sided,
};

/// Discrete Dirichlet-to-Neumann map in pairing coordinates: column p holds
/// the Neumann coefficients of the solution with boundary data e_p, so
/// h^T lambda g = <Lambda g, h>.
struct DtnMatrix {
  Eigen::MatrixXd lambda;
  BoundaryWeightsPtr weights;
  double omega2 = 0.0;
  std::string meta;

  Eigen::Index nb() const { return lambda.rows(); }
};

/// Builds the DtN map from precomputed boundary extensions (see
/// HelmholtzSolver::boundary_extensions).
DtnMatrix dtn_from_extensions(const HelmholtzOperator& op, const Eigen::MatrixXd& extensions,
                              BoundaryWeightsPtr weights = nullptr,
                              NeumannScheme scheme = NeumannScheme::variational);

DtnMatrix assemble_dtn(const HelmholtzOperator& op, BoundaryWeightsPtr weights = nullptr,
                       NeumannScheme scheme = NeumannScheme::variational,
                       kernels::Exec exec = kernels::Exec::parallel);

enum class DataNorm { hilbert_schmidt, operator_norm };

/// Y-norm of a DtN-difference matrix: ||S A S||_F with S = minus^{1/2}, or
/// the largest singular value of S A S for DataNorm::operator_norm.
double dtn_data_norm(const Eigen::MatrixXd& a, const BoundaryWeights& w,
                     DataNorm kind = DataNorm::hilbert_schmidt);

/// Inner product inducing the Hilbert-Schmidt Y-norm: trace((SAS)^T (SBS)).
double data_inner(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const BoundaryWeights& w);

/// minus * r * minus: the matrix M with data_inner(r, b) = sum_pq M_pq b_pq.
Eigen::MatrixXd pairing_representer(const Eigen::MatrixXd& r, const BoundaryWeights& w);

// Plain-text persistence:
//   dtn <nb> <omega2>   then nb rows of nb values
//   wplus <nb> / wminus <nb>   same layout
void write_dtn(std::ostream& os, const DtnMatrix& d);
void write_weight(std::ostream& os, const char* tag, const Eigen::MatrixXd& w);
/// Writes dtn.txt, wplus.txt and wminus.txt into dir.
void save_dtn(const std::filesystem::path& dir, const DtnMatrix& d);
/// Reads a dtn file; weights are rebuilt for the grid with nb = 4 (m - 1)
/// boundary nodes.
DtnMatrix load_dtn(const std::filesystem::path& dtn_file);
Eigen::MatrixXd read_matrix(std::istream& is, const std::string& tag, Eigen::Index* nb_out, double* omega2_out);

}  // namespace ibvp
