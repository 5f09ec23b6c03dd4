#include "ibvp/dtn.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>

#include "ibvp/errors.hpp"
#include "ibvp/field_io.hpp"

namespace ibvp {

BoundaryWeights build_boundary_weights(const Grid& grid) {
  const Eigen::Index nb = static_cast<Eigen::Index>(grid.boundary_nodes().size());
  const double hb = grid.boundary_spacing();
  Eigen::MatrixXd lb = Eigen::MatrixXd::Zero(nb, nb);
  for (Eigen::Index k = 0; k < nb; ++k) {
    lb(k, k) = 2.0 / (hb * hb);
    lb(k, (k + 1) % nb) -= 1.0 / (hb * hb);
    lb(k, (k + nb - 1) % nb) -= 1.0 / (hb * hb);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(lb);
  const Eigen::MatrixXd& v = es.eigenvectors();
  const Eigen::ArrayXd one_plus = (1.0 + es.eigenvalues().array()).max(1.0);

  BoundaryWeights w;
  w.hb = hb;
  w.plus = hb * v * one_plus.sqrt().matrix().asDiagonal() * v.transpose();
  w.minus = hb * v * one_plus.rsqrt().matrix().asDiagonal() * v.transpose();
  w.minus_sqrt = std::sqrt(hb) * v * one_plus.pow(-0.25).matrix().asDiagonal() * v.transpose();
  return w;
}

BoundaryWeightsPtr make_boundary_weights(const Grid& grid) {
  return std::make_shared<const BoundaryWeights>(build_boundary_weights(grid));
}

DtnMatrix dtn_from_extensions(const HelmholtzOperator& op, const Eigen::MatrixXd& extensions,
                              BoundaryWeightsPtr weights, NeumannScheme scheme) {
  const Grid& g = op.grid();
  const auto& boundary = g.boundary_nodes();
  const Eigen::Index nb = static_cast<Eigen::Index>(boundary.size());
  if (extensions.rows() != g.node_count() || extensions.cols() != nb) {
    throw ConfigError("boundary extensions have the wrong shape");
  }
  DtnMatrix d;
  d.omega2 = op.omega2();
  d.weights = weights ? std::move(weights) : make_boundary_weights(g);
  d.lambda.resize(nb, nb);

  if (scheme == NeumannScheme::variational) {
    // Row q of Q restricted to boundary nodes, applied to every extension.
    Eigen::SparseMatrix<double> rows(nb, g.node_count());
    std::vector<Eigen::Triplet<double>> t;
    const Eigen::SparseMatrix<double>& q = op.form();
    for (int k = 0; k < q.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(q, k); it; ++it) {
        const int slot = g.boundary_slot(static_cast<int>(it.row()));
        if (slot >= 0) t.emplace_back(slot, it.col(), it.value());
      }
    rows.setFromTriplets(t.begin(), t.end());
    d.lambda = rows * extensions;
    d.meta = "neumann=variational";
  } else {
    const int last = g.m() - 1;
    for (Eigen::Index q = 0; q < nb; ++q) {
      const int n = boundary[q];
      const int i = n % g.m();
      const int j = n / g.m();
      std::vector<int> inward;
      if (i == 0) inward.push_back(g.node(1, j));
      if (i == last) inward.push_back(g.node(last - 1, j));
      if (j == 0) inward.push_back(g.node(i, 1));
      if (j == last) inward.push_back(g.node(i, last - 1));
      for (Eigen::Index p = 0; p < nb; ++p) {
        double s = 0.0;
        for (int in : inward) s += extensions(n, p) - extensions(in, p);
        d.lambda(q, p) = s / static_cast<double>(inward.size());
      }
    }
    d.meta = "neumann=one_sided";
  }
  return d;
}

DtnMatrix assemble_dtn(const HelmholtzOperator& op, BoundaryWeightsPtr weights, NeumannScheme scheme,
                       kernels::Exec exec) {
  auto shared = std::make_shared<const HelmholtzOperator>(op);
  const HelmholtzSolver solver(shared);
  return dtn_from_extensions(*shared, solver.boundary_extensions(exec), std::move(weights), scheme);
}

namespace {

void require_compatible(const Eigen::MatrixXd& a, const BoundaryWeights& w) {
  if (a.rows() != w.size() || a.cols() != w.size()) {
    throw ConfigError("data matrix is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                      " but boundary weights are " + std::to_string(w.size()) + "x" + std::to_string(w.size()));
  }
}

}  // namespace

double dtn_data_norm(const Eigen::MatrixXd& a, const BoundaryWeights& w, DataNorm kind) {
  require_compatible(a, w);
  const Eigen::MatrixXd s = w.minus_sqrt * a * w.minus_sqrt;
  if (kind == DataNorm::hilbert_schmidt) return s.norm();
  if (s.size() == 0) return 0.0;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(s);
  return svd.singularValues()[0];
}

double data_inner(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const BoundaryWeights& w) {
  require_compatible(a, w);
  require_compatible(b, w);
  return pairing_representer(a, w).cwiseProduct(b).sum();
}

Eigen::MatrixXd pairing_representer(const Eigen::MatrixXd& r, const BoundaryWeights& w) {
  require_compatible(r, w);
  return w.minus * r * w.minus;
}

void write_weight(std::ostream& os, const char* tag, const Eigen::MatrixXd& w) {
  os << tag << ' ' << w.rows() << '\n';
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    for (Eigen::Index j = 0; j < w.cols(); ++j) os << (j ? " " : "") << format_number(w(i, j));
    os << '\n';
  }
}

void write_dtn(std::ostream& os, const DtnMatrix& d) {
  os << "dtn " << d.nb() << ' ' << format_number(d.omega2) << '\n';
  for (Eigen::Index i = 0; i < d.nb(); ++i) {
    for (Eigen::Index j = 0; j < d.nb(); ++j) os << (j ? " " : "") << format_number(d.lambda(i, j));
    os << '\n';
  }
}

namespace {

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& fn) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  fn(os);
  if (!os) throw IoError("write failed: " + path.string());
}

}  // namespace

void save_dtn(const std::filesystem::path& dir, const DtnMatrix& d) {
  write_file(dir / "dtn.txt", [&](std::ostream& os) { write_dtn(os, d); });
  write_file(dir / "wplus.txt", [&](std::ostream& os) { write_weight(os, "wplus", d.weights->plus); });
  write_file(dir / "wminus.txt", [&](std::ostream& os) { write_weight(os, "wminus", d.weights->minus); });
}

Eigen::MatrixXd read_matrix(std::istream& is, const std::string& tag, Eigen::Index* nb_out, double* omega2_out) {
  std::string head;
  if (!(is >> head) || head != tag) throw IoError("expected '" + tag + "' header");
  long nb = 0;
  if (!(is >> nb) || nb <= 0) throw IoError("bad size in '" + tag + "' header");
  if (omega2_out) {
    std::string w;
    if (!(is >> w)) throw IoError("missing omega2 in '" + tag + "' header");
    *omega2_out = parse_number(w);
  }
  Eigen::MatrixXd a(nb, nb);
  std::string tok;
  for (long i = 0; i < nb; ++i)
    for (long j = 0; j < nb; ++j) {
      if (!(is >> tok)) throw IoError("truncated '" + tag + "' matrix");
      a(i, j) = parse_number(tok);
    }
  if (nb_out) *nb_out = nb;
  return a;
}

DtnMatrix load_dtn(const std::filesystem::path& dtn_file) {
  std::ifstream is(dtn_file, std::ios::binary);
  if (!is) throw IoError("cannot open " + dtn_file.string());
  DtnMatrix d;
  Eigen::Index nb = 0;
  d.lambda = read_matrix(is, "dtn", &nb, &d.omega2);
  if (nb % 4 != 0) throw IoError("dtn size " + std::to_string(nb) + " is not 4 (m - 1)");
  const Grid grid(static_cast<int>(nb / 4) + 1);
  d.weights = make_boundary_weights(grid);
  d.meta = "loaded=" + dtn_file.filename().string();
  return d;
}

}  // namespace ibvp
