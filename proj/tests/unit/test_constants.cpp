#include <doctest.h>

#include <cmath>
#include <random>

#include "ibvp/constants.hpp"
#include "ibvp/errors.hpp"

using namespace ibvp;

namespace {

ConstantsBundle unit_bundle() {
  ConstantsBundle b;
  b.lhat0 = 1.0;
  b.l0 = 1.0;
  b.big_k = 0.1;
  b.b1 = 1.0;
  b.b2 = 1.0;
  b.omega2 = 1.0;
  b.exponent = 4.0 / 7.0;
  return b;
}

}  // namespace

TEST_SUITE("constants") {
  TEST_CASE("level constants") {
    const auto lc = derive_level(unit_bundle(), 1);
    CHECK(lc.stab == doctest::Approx(std::exp(0.2)));
    CHECK(lc.ctilde == doctest::Approx(std::exp(0.4)));
    CHECK(lc.lhat == doctest::Approx(1.0));
    CHECK(lc.lip == doctest::Approx(1.0));
    CHECK(lc.eta == 0.0);
    REQUIRE(lc.rho);
    CHECK(*lc.rho == doctest::Approx(1.0 / (2 * std::exp(0.8))));

    auto b = unit_bundle();
    b.omega2 = 2.0;
    const auto l2 = derive_level(b, 8);
    CHECK(stability_argument(b, 8) == doctest::Approx(0.1 * 3.0 * std::pow(8.0, 4.0 / 7.0)));
    CHECK(l2.lhat == doctest::Approx(2.0));
    CHECK(l2.lip == doctest::Approx(4.0));
    CHECK(l2.stab == doctest::Approx(std::exp(stability_argument(b, 8)) / 2.0));

    b.big_k = 100.0;
    CHECK_THROWS_AS(derive_level(b, 1000000), ConfigError);
  }

  TEST_CASE("convergence radius") {
    CHECK(compute_rho(1.0, 1.0, 0.0) == doctest::Approx(0.5));
    CHECK(compute_rho(2.0, 2.0, 0.0) == doctest::Approx(0.03125));
    CHECK(compute_rho(1.0, 1.0, 0.125) == 0.03125);
    CHECK_THROWS_AS(compute_rho(1.0, 1.0, 0.13), LevelInadmissible);
    CHECK_THROWS_AS(compute_rho(2.0, 1.0, 0.1), LevelInadmissible);
    double prev = compute_rho(1.5, 0.7, 0.0);
    for (double eta = 0.01; eta < 1.0 / 12; eta += 0.01) {
      const double r = compute_rho(1.5, 0.7, eta);
      CHECK(r < prev);
      CHECK(std::sqrt(2 * r) * 2 * 1.5 * 0.7 ==
            doctest::Approx(1 + std::sqrt(1 - 8 * 1.5 * eta) - 4 * eta * 1.5));
      prev = r;
    }
  }

  TEST_CASE("compression models") {
    CHECK(CompressionModel::exact()(7.0) == 0.0);
    const auto pl = CompressionModel::power_law(2.0, 0.5);
    CHECK(pl(4.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(CompressionModel::power_law(1.0, 0.0), ConfigError);
    CHECK_THROWS_AS(CompressionModel::power_law(0.0, 1.0), ConfigError);
    const auto tb = CompressionModel::tabulated({{1, 1.0}, {4, 0.25}, {16, 0.0625}});
    CHECK(tb(2.0) == doctest::Approx(0.5));
    CHECK(tb(64.0) == doctest::Approx(0.015625));
    CHECK_THROWS_AS(CompressionModel::tabulated({{1, 1.0}, {4, 1.0}}), ConfigError);
  }

  TEST_CASE("frequency conditions imply the level conditions") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int passed = 0;
    for (int t = 0; t < 1000; ++t) {
      ConstantsBundle b;
      b.lhat0 = std::pow(10.0, -3 + 3 * u(rng));
      b.l0 = std::pow(10.0, -3 + 3 * u(rng));
      b.big_k = std::pow(10.0, -3 + 2 * u(rng));
      b.b1 = 1.0;
      b.b2 = 1.0 + u(rng);
      b.omega2 = 0.01 + 5 * u(rng);
      b.eps = 0.01 + 0.5 * u(rng);
      b.phi = CompressionModel::power_law(std::pow(10.0, -4 + 3 * u(rng)), 0.25 + u(rng));
      const int n = 1 << (2 * static_cast<int>(3 * u(rng)));
      const OmegaCheck oc = check_omega_conditions(b, n, 4 * n);
      CHECK(oc.implication_holds);
      CHECK(oc.level.implication_holds);
      if (oc.pass()) {
        ++passed;
        CHECK(oc.level.pass());
        CHECK(oc.level.original);
      }
    }
    CHECK(passed > 50);
  }

  TEST_CASE("transition check") {
    auto b = unit_bundle();
    b.big_k = 0.01;
    const auto cur = derive_level(b, 1, 0), next = derive_level(b, 4, 1);
    const auto tc = check_level_transition(cur, next, 0.1);
    CHECK(tc.pass());
    b.phi = CompressionModel::power_law(1.0, 1.0);
    const auto bad = check_level_transition(derive_level(b, 1, 0), derive_level(b, 4, 1), 0.1);
    CHECK_FALSE(bad.pass());
    CHECK_FALSE(bad.reasons.empty());
  }

  TEST_CASE("maximal level count") {
    auto b = unit_bundle();
    b.phi = CompressionModel::power_law(1e-3, 1.0);
    const NMaxResult r = solve_n_max(b);
    REQUIRE(r.kind == NMaxResult::Kind::finite);
    CHECK(r.root > 10.0);
    CHECK(r.root < 1000.0);
    CHECK(std::abs(n_max_lhs(b, r.root)) < 1e-9);
    long long first_positive = 1;
    while (n_max_lhs(b, static_cast<double>(first_positive)) <= 0.0) ++first_positive;
    CHECK(r.value == first_positive - 1);

    b.phi = CompressionModel::exact();
    CHECK(solve_n_max(b).kind == NMaxResult::Kind::unbounded);
    b.phi = CompressionModel::power_law(1.0, 1.0);
    CHECK(solve_n_max(b).kind == NMaxResult::Kind::infeasible);
    CHECK(to_string(NMaxResult::Kind::infeasible) == "infeasible");
  }

  TEST_CASE("radius against frequency") {
    auto b = unit_bundle();
    b.b2 = 2.0;
    b.phi = CompressionModel::power_law(1e-4, 1.0);
    const auto rows = rho_vs_omega(b, 4, {1.0, 0.5, 0.25, 0.125});
    REQUIRE(rows.size() == 4);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      REQUIRE(rows[i].rho);
      CHECK(rows[i].lower_bound_ok);
      if (i) CHECK(*rows[i].rho > *rows[i - 1].rho);
    }
    const auto sweep = sweep_until_radius(b, 4, 1e3, 1.0);
    REQUIRE_FALSE(sweep.empty());
    REQUIRE(sweep.back().rho);
    CHECK(*sweep.back().rho >= 1e3);
    CHECK(sweep.back().omega2 < 1.0);
  }

  TEST_CASE("bundle validation") {
    auto b = unit_bundle();
    CHECK_NOTHROW(b.validate());
    b.l0 = -1.0;
    CHECK_THROWS_AS(b.validate(), ConfigError);
    b = unit_bundle();
    b.omega2 = 2 * M_PI * M_PI;
    CHECK_THROWS_AS(b.validate(), AdmissibilityError);
    CHECK(unit_bundle().at_frequency(0.5).omega2 == 0.5);
  }
}
