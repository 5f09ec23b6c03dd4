#include <doctest.h>

#include <cmath>
#include <random>

#include "ibvp/derivative.hpp"

using namespace ibvp;

namespace {

struct Setup {
  GridPtr g = make_grid(17);
  PartitionPtr p = make_uniform_partition(g, 2);
  PwcField c{p, Eigen::Vector4d(1.2, 1.8, 1.5, 1.3), {1, 2}};
  BoundaryWeightsPtr w = make_boundary_weights(*g);
};

PwcField random_delta(const PartitionPtr& p, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Eigen::VectorXd v(p->size());
  for (auto& x : v) x = nd(rng);
  return {p, v};
}

Eigen::MatrixXd random_symmetric(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXd r(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) r(i, j) = nd(rng);
  return 0.5 * (r + r.transpose());
}

}  // namespace

TEST_SUITE("derivative") {
  TEST_CASE("linear in the perturbation") {
    Setup s;
    const auto fe = evaluate_forward(s.c, 5.0, s.w);
    std::mt19937_64 rng(1);
    const auto d1 = random_delta(s.p, rng), d2 = random_delta(s.p, rng);
    const PwcField mix(s.p, 2.0 * d1.coeffs() - 3.0 * d2.coeffs());
    const Eigen::MatrixXd lhs = apply_DF(fe.bank, mix);
    const Eigen::MatrixXd rhs = 2.0 * apply_DF(fe.bank, d1) - 3.0 * apply_DF(fe.bank, d2);
    CHECK((lhs - rhs).norm() <= 1e-12 * rhs.norm());
    CHECK(apply_DF(fe.bank, PwcField::constant(s.p, 0.0)).norm() == 0.0);
    CHECK((lhs - lhs.transpose()).norm() <= 1e-12 * lhs.norm());
  }

  TEST_CASE("entries match a direct quadrature of solution products") {
    Setup s;
    const double w2 = 5.0;
    const auto fe = evaluate_forward(s.c, w2, s.w);
    const PwcField chi = PwcField::indicator(s.p, 2);
    const Eigen::MatrixXd d = apply_DF(fe.bank, chi);
    const HelmholtzOperator op(s.c, w2);
    const auto nb = s.g->boundary_nodes().size();
    for (auto [p, q] : {std::pair{0, 0}, std::pair{3, 17}, std::pair{10, 40}}) {
      const auto up = solve(op, Eigen::VectorXd::Unit(nb, p));
      const auto uq = solve(op, Eigen::VectorXd::Unit(nb, q));
      double sum = 0.0;
      for (int cell : s.p->cells(2)) {
        double avg = 0.0;
        for (int n : s.g->cell_corners(cell)) avg += 0.25 * up[n] * uq[n];
        sum += avg * s.g->cell_area();
      }
      CHECK(d(p, q) == doctest::Approx(kDtnDerivativeSign * w2 * sum).epsilon(1e-10));
    }
  }

  TEST_CASE("adjoint identity") {
    Setup s;
    const auto fe = evaluate_forward(s.c, 5.0, s.w);
    std::mt19937_64 rng(2);
    for (int t = 0; t < 5; ++t) {
      const auto d = random_delta(s.p, rng);
      const Eigen::MatrixXd r = random_symmetric(fe.dtn.nb(), rng);
      const NodalField gfield = apply_DF_adjoint(fe.bank, r, *s.w);
      const double a = data_inner(apply_DF(fe.bank, d), r, *s.w);
      const double b = l2_inner(d, gfield);
      CHECK(a == doctest::Approx(b).epsilon(1e-10));
      const PwcField pg = projected_gradient(fe.bank, r, *s.w, s.p);
      CHECK(l2_inner(d, pg) == doctest::Approx(b).epsilon(1e-10));
    }
  }

  TEST_CASE("remainder is second order") {
    Setup s;
    const double w2 = 5.0;
    const auto fe = evaluate_forward(s.c, w2, s.w);
    std::mt19937_64 rng(3);
    const auto d = random_delta(s.p, rng);
    const Eigen::MatrixXd dfd = apply_DF(fe.bank, d);
    std::vector<double> err;
    const std::vector<double> ts{4e-2, 2e-2, 1e-2};
    for (double t : ts) {
      const PwcField ct(s.p, s.c.coeffs() + t * d.coeffs(), Bounds{});
      const auto ft = evaluate_forward(ct, w2, {1, 2}, s.w);
      err.push_back(dtn_data_norm(ft.dtn.lambda - fe.dtn.lambda - t * dfd, *s.w));
    }
    CHECK(std::log2(err[0] / err[1]) == doctest::Approx(2.0).epsilon(0.1));
    CHECK(std::log2(err[1] / err[2]) == doctest::Approx(2.0).epsilon(0.1));
  }

  TEST_CASE("norm scales with the frequency") {
    Setup s;
    const PwcField chi = PwcField::indicator(s.p, 0);
    std::vector<double> n;
    for (double w2 : {1e-3, 1e-2, 1e-1}) {
      const auto fe = evaluate_forward(s.c, w2, s.w);
      n.push_back(dtn_data_norm(apply_DF(fe.bank, chi), *s.w));
    }
    CHECK(std::log10(n[1] / n[0]) == doctest::Approx(1.0).epsilon(0.02));
    CHECK(std::log10(n[2] / n[1]) == doctest::Approx(1.0).epsilon(0.02));
  }

  TEST_CASE("probes") {
    Setup s;
    const auto fe = evaluate_forward(s.c, 5.0, s.w);
    const double probe = df_norm_probe(fe.bank, s.p, *s.w);
    double direct = 0.0;
    for (int j = 0; j < s.p->size(); ++j) {
      const auto chi = PwcField::indicator(s.p, j);
      direct = std::max(direct, dtn_data_norm(apply_DF(fe.bank, chi), *s.w) / l2_norm(chi));
    }
    CHECK(probe == doctest::Approx(direct));
    CHECK(lipschitz_DF_probe(s.c, s.c, 5.0, s.w) == 0.0);
    const PwcField c2(s.p, Eigen::Vector4d(1.3, 1.7, 1.5, 1.3), {1, 2});
    CHECK(lipschitz_DF_probe(s.c, c2, 5.0, s.w) > 0.0);
  }

  TEST_CASE("serial and parallel evaluation agree") {
    Setup s;
    const auto a = evaluate_forward(s.c, 5.0, s.w, kernels::Exec::serial);
    const auto b = evaluate_forward(s.c, 5.0, s.w, kernels::Exec::parallel);
    CHECK((a.dtn.lambda.array() == b.dtn.lambda.array()).all());
    std::mt19937_64 rng(5);
    const Eigen::MatrixXd r = random_symmetric(a.dtn.nb(), rng);
    const auto ga = apply_DF_adjoint(a.bank, r, *s.w, kernels::Exec::serial);
    const auto gb = apply_DF_adjoint(b.bank, r, *s.w, kernels::Exec::parallel);
    CHECK((ga.values().array() == gb.values().array()).all());
  }
}
