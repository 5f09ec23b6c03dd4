#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "ibvp/dtn.hpp"
#include "ibvp/errors.hpp"
#include "ibvp/spectrum.hpp"

using namespace ibvp;

namespace {

Eigen::MatrixXd random_matrix(std::mt19937_64& rng, int r, int c) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXd m(r, c);
  for (int j = 0; j < c; ++j)
    for (int i = 0; i < r; ++i) m(i, j) = nd(rng);
  return m;
}

double max_error_manufactured(int m) {
  const auto g = make_grid(m);
  const auto c = PwcField::constant(make_uniform_partition(g, 1), 1.0, {1.0, 2.0});
  const HelmholtzOperator op(c, 1.0);
  const double pi = std::numbers::pi;
  const auto f = NodalField::sample(g, [&](double x, double y) { return (2 * pi * pi - 1) * std::sin(pi * x) * std::sin(pi * y); });
  const auto u = solve(op, Eigen::VectorXd::Zero(g->boundary_nodes().size()), &f);
  const auto ex = NodalField::sample(g, [&](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); });
  return (u.values() - ex.values()).cwiseAbs().maxCoeff();
}

Eigen::VectorXd boundary_trace(const Grid& g, double (*f)(double, double)) {
  Eigen::VectorXd v(g.boundary_nodes().size());
  for (std::size_t k = 0; k < g.boundary_nodes().size(); ++k) {
    const int n = g.boundary_nodes()[k];
    v[k] = f(g.x(n % g.m()), g.y(n / g.m()));
  }
  return v;
}

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("serial and parallel kernels agree bitwise") {
    std::mt19937_64 rng(11);
    const Eigen::MatrixXd u = random_matrix(rng, 300, 40);
    const Eigen::VectorXd w = random_matrix(rng, 300, 1);
    const Eigen::MatrixXd gs = kernels::serial::weighted_gram(u, w);
    const Eigen::MatrixXd gp = kernels::omp::weighted_gram(u, w);
    CHECK((gs.array() == gp.array()).all());
    CHECK((gs - u.transpose() * w.asDiagonal() * u).norm() < 1e-10 * gs.norm());

    const Eigen::MatrixXd ut = u.transpose();
    const Eigen::MatrixXd m = random_matrix(rng, 40, 40);
    const Eigen::VectorXd rs = kernels::serial::row_quadratic_forms(ut, m);
    const Eigen::VectorXd rp = kernels::omp::row_quadratic_forms(ut, m);
    CHECK((rs.array() == rp.array()).all());
    CHECK(rs[7] == doctest::Approx(u.row(7).dot(m * u.row(7).transpose())));

    const Eigen::MatrixXd rhs = random_matrix(rng, 20, 15);
    auto twice = [](const Eigen::VectorXd& b) -> Eigen::VectorXd { return 2.0 * b; };
    const Eigen::MatrixXd xs = kernels::serial::solve_columns(twice, rhs);
    const Eigen::MatrixXd xp = kernels::omp::solve_columns(twice, rhs);
    CHECK((xs.array() == xp.array()).all());
    CHECK((xs - 2.0 * rhs).norm() == 0.0);
  }

  TEST_CASE("boundary extensions agree across execution modes") {
    const auto g = make_grid(17);
    Eigen::Vector4d v(1.2, 1.8, 1.5, 1.3);
    const PwcField c(make_uniform_partition(g, 2), v, {1, 2});
    auto op = std::make_shared<const HelmholtzOperator>(c, 5.0);
    const HelmholtzSolver s(op);
    const Eigen::MatrixXd a = s.boundary_extensions(kernels::Exec::serial);
    const Eigen::MatrixXd b = s.boundary_extensions(kernels::Exec::parallel);
    CHECK((a.array() == b.array()).all());
  }
}

TEST_SUITE("spectrum") {
  TEST_CASE("windows") {
    const double l1 = 2 * std::numbers::pi * std::numbers::pi;
    const SpectrumWindow w = spectrum_guard(5.0, 1.0, 2.0);
    CHECK(w.kind == SpectrumWindow::Kind::low);
    CHECK(w.upper == doctest::Approx(l1 / 2));
    CHECK(w.margin == doctest::Approx(l1 / 2 - 5.0));
    CHECK_THROWS_AS(spectrum_guard(l1 / 2, 1.0, 2.0), AdmissibilityError);
    CHECK_THROWS_AS(spectrum_guard(l1, 1.0, 1.0), AdmissibilityError);
    const SpectrumWindow band = spectrum_guard(22.0, 1.0, 2.0);
    CHECK(band.kind == SpectrumWindow::Kind::band);
    CHECK(band.n == 1);
    CHECK(band.lower == doctest::Approx(l1));
    CHECK(band.upper == doctest::Approx(5 * std::numbers::pi * std::numbers::pi / 2));
    try {
      spectrum_guard(12.0, 1.0, 2.0);
      FAIL("12 lies in the first band");
    } catch (const AdmissibilityError& e) {
      CHECK(e.eigen_index() == 1);
      CHECK(e.band_lower() == doctest::Approx(l1 / 2));
      CHECK(e.band_upper() == doctest::Approx(l1));
    }
    CHECK_THROWS_AS(spectrum_guard(0.0, 1.0, 2.0), ConfigError);
    CHECK_THROWS_AS(spectrum_guard(1.0, 2.0, 1.0), ConfigError);
  }

  TEST_CASE("guard is monotone in the bounds") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> o(0.01, 200.0), b(0.0, 1.0);
    int admitted = 0;
    for (int t = 0; t < 2000; ++t) {
      const double w2 = o(rng);
      const double b1 = 1.0 + 0.5 * b(rng), b2 = b1 + 0.5 * b(rng);
      bool wide = true;
      try {
        spectrum_guard(w2, 1.0, 2.0);
      } catch (const AdmissibilityError&) {
        wide = false;
      }
      if (!wide) continue;
      ++admitted;
      CHECK_NOTHROW(spectrum_guard(w2, b1, b2));
    }
    CHECK(admitted > 100);
  }

  TEST_CASE("eigenvalue list") {
    const auto ev = unit_square_dirichlet_eigenvalues(60.0);
    const double pi2 = std::numbers::pi * std::numbers::pi;
    REQUIRE(ev.size() >= 4);
    CHECK(ev[0] == doctest::Approx(2 * pi2));
    CHECK(ev[1] == doctest::Approx(5 * pi2));
    CHECK(ev[2] == doctest::Approx(5 * pi2));
    CHECK(ev.back() > 60.0);
  }
}

TEST_SUITE("helmholtz") {
  TEST_CASE("manufactured solution converges at second order") {
    const double e17 = max_error_manufactured(17), e33 = max_error_manufactured(33), e65 = max_error_manufactured(65);
    CHECK(std::log2(e17 / e33) == doctest::Approx(2.0).epsilon(0.15));
    CHECK(std::log2(e33 / e65) == doctest::Approx(2.0).epsilon(0.15));
  }

  TEST_CASE("harmonic limit and trivial data") {
    const auto g = make_grid(17);
    const auto c = PwcField::constant(make_uniform_partition(g, 1), 1.0, {1.0, 1.0});
    const double w2 = 1e-6;
    const HelmholtzOperator op(c, w2);
    auto quad = [](double x, double y) { return x * x - y * y; };
    const auto exact = NodalField::sample(g, quad);
    const auto f = NodalField::sample(g, [&](double x, double y) { return -w2 * quad(x, y); });
    const auto u = solve(op, boundary_trace(*g, +[](double x, double y) { return x * x - y * y; }), &f);
    CHECK((u.values() - exact.values()).cwiseAbs().maxCoeff() < 1e-12);

    const auto z = solve(op, Eigen::VectorXd::Zero(g->boundary_nodes().size()));
    CHECK(z.values().cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("operator is symmetric and checks its coefficient") {
    const auto g = make_grid(9);
    const auto p = make_uniform_partition(g, 2);
    const HelmholtzOperator op(PwcField(p, Eigen::Vector4d(1.0, 2.0, 1.5, 1.2), {1, 2}), 5.0);
    const Eigen::SparseMatrix<double> a = op.form();
    CHECK((Eigen::MatrixXd(a) - Eigen::MatrixXd(a.transpose())).norm() == 0.0);
    CHECK(op.lumped_mass().sum() == doctest::Approx((1.0 + 2.0 + 1.5 + 1.2) / 4));
    CHECK_THROWS(HelmholtzOperator(PwcField(p, Eigen::Vector4d(1.0, 2.5, 1.5, 1.2), {1, 2}), 5.0));
    CHECK_THROWS_AS(HelmholtzOperator(PwcField(p, Eigen::Vector4d(1.0, 2.0, 1.5, 1.2), {1, 2}), 12.0),
                    AdmissibilityError);
    auto sp = std::make_shared<const HelmholtzOperator>(PwcField(p, Eigen::Vector4d(1.0, 2.0, 1.5, 1.2), {1, 2}), 5.0);
    CHECK(HelmholtzSolver(sp).smallest_pivot() > 0.0);
  }
}

TEST_SUITE("dtn") {
  TEST_CASE("boundary weights") {
    const auto g = make_grid(9);
    const BoundaryWeights w = build_boundary_weights(*g);
    const auto nb = w.size();
    const double hb = w.hb;
    CHECK(hb == doctest::Approx(0.125));
    const Eigen::VectorXd one = Eigen::VectorXd::Ones(nb);
    CHECK((w.plus * one - hb * one).norm() < 1e-12);
    CHECK((w.plus * w.minus - hb * hb * Eigen::MatrixXd::Identity(nb, nb)).norm() < 1e-10);
    CHECK((w.minus_sqrt * w.minus_sqrt - w.minus).norm() < 1e-12);
    Eigen::VectorXd alt(nb);
    for (Eigen::Index k = 0; k < nb; ++k) alt[k] = k % 2 ? -1.0 : 1.0;
    CHECK((w.plus * alt - hb * std::sqrt(1.0 + 4.0 / (hb * hb)) * alt).norm() < 1e-10);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(w.plus);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
  }

  TEST_CASE("data norms") {
    BoundaryWeights id;
    id.plus = id.minus = id.minus_sqrt = Eigen::MatrixXd::Identity(6, 6);
    id.hb = 1.0;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(6, 6);
    CHECK(dtn_data_norm(a, id) == 0.0);
    a(0, 0) = 3;
    a(1, 1) = 4;
    CHECK(dtn_data_norm(a, id) == doctest::Approx(5.0));
    CHECK(dtn_data_norm(a, id, DataNorm::operator_norm) == doctest::Approx(4.0));

    const auto g = make_grid(9);
    const BoundaryWeights w = build_boundary_weights(*g);
    std::mt19937_64 rng(3);
    const Eigen::MatrixXd r = random_matrix(rng, 32, 32);
    const Eigen::MatrixXd s = w.minus_sqrt * r * w.minus_sqrt;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(s);
    CHECK(dtn_data_norm(r, w) == doctest::Approx(svd.singularValues().norm()).epsilon(1e-12));
    CHECK(dtn_data_norm(r, w, DataNorm::operator_norm) == doctest::Approx(svd.singularValues()[0]).epsilon(1e-12));
    CHECK(data_inner(r, r, w) == doctest::Approx(std::pow(dtn_data_norm(r, w), 2)).epsilon(1e-12));
    CHECK_THROWS(dtn_data_norm(Eigen::MatrixXd::Zero(5, 5), w));
  }

  TEST_CASE("dtn is symmetric and annihilates constants in the Laplace limit") {
    const auto g = make_grid(33);
    const PwcField c(make_uniform_partition(g, 2), Eigen::Vector4d(1.2, 1.8, 1.5, 1.3), {1, 2});
    const DtnMatrix d = assemble_dtn(HelmholtzOperator(c, 5.0));
    CHECK((d.lambda - d.lambda.transpose()).norm() <= 1e-9 * d.lambda.norm());
    const auto c1 = PwcField::constant(make_uniform_partition(g, 1), 1.0, {1, 1});
    const DtnMatrix d0 = assemble_dtn(HelmholtzOperator(c1, 1e-6));
    const Eigen::VectorXd one = Eigen::VectorXd::Ones(d0.nb());
    CHECK((d0.lambda * one).norm() < 1e-5 * d0.lambda.norm());
  }

  TEST_CASE("dtn pairing converges under refinement") {
    auto fg = +[](double x, double y) { return x * x + x * y; };
    auto fh = +[](double x, double y) { return std::cos(x) * std::exp(y); };
    std::vector<double> s;
    for (int m : {17, 33, 65}) {
      const auto g = make_grid(m);
      const auto c = PwcField::constant(make_uniform_partition(g, 1), 1.0, {1, 2});
      const DtnMatrix d = assemble_dtn(HelmholtzOperator(c, 1.0));
      s.push_back(boundary_trace(*g, fh).dot(d.lambda * boundary_trace(*g, fg)));
    }
    const double order = std::log2(std::abs(s[0] - s[1]) / std::abs(s[1] - s[2]));
    CHECK(order >= 1.0);
  }

  TEST_CASE("dtn files") {
    const auto g = make_grid(17);
    const auto c = PwcField::constant(make_uniform_partition(g, 1), 1.5, {1, 2});
    const DtnMatrix d = assemble_dtn(HelmholtzOperator(c, 1.0), make_boundary_weights(*g));
    const auto dir = std::filesystem::temp_directory_path() / "ibvp_dtn_test";
    std::filesystem::create_directories(dir);
    save_dtn(dir, d);
    std::ifstream in(dir / "dtn.txt");
    std::string header;
    std::getline(in, header);
    CHECK(header == "dtn 64 1.0");
    std::ifstream wp(dir / "wplus.txt");
    std::getline(wp, header);
    CHECK(header == "wplus 64");
    const DtnMatrix back = load_dtn(dir / "dtn.txt");
    CHECK((back.lambda - d.lambda).norm() == 0.0);
    CHECK(back.omega2 == 1.0);
    CHECK((back.weights->minus - d.weights->minus).norm() == 0.0);
    std::filesystem::remove_all(dir);
    CHECK_THROWS_AS(load_dtn(dir / "dtn.txt"), IoError);
  }
}
