#include <doctest.h>

#include <cmath>

#include "ibvp/calibrate.hpp"
#include "ibvp/errors.hpp"
#include "ibvp/verify.hpp"

using namespace ibvp;

namespace {

struct Pair {
  GridPtr g = make_grid(17);
  PartitionPtr p = make_uniform_partition(g, 2);
  PwcField c1{p, Eigen::Vector4d(1.2, 1.8, 1.5, 1.3), {1, 2}};
  PwcField c2{p, Eigen::Vector4d(1.4, 1.1, 1.6, 1.9), {1, 2}};
};

ConstantsBundle small_bundle() {
  ConstantsBundle b;
  b.omega2 = 1.0;
  b.calibration = ConstantsBundle::Calibration::empirical;
  return b;
}

}  // namespace

TEST_SUITE("verify") {
  TEST_CASE("Alessandrini identity holds for the variational map only") {
    Pair s;
    const auto v = audit_alessandrini(s.c1, s.c2, 5.0, 10, 7);
    CHECK(v.trials == 10);
    CHECK(v.max_defect < 1e-9);
    const auto o = audit_alessandrini(s.c1, s.c2, 5.0, 10, 7, NeumannScheme::one_sided);
    CHECK(o.max_defect > 1e-3);
  }

  TEST_CASE("gradient and adjoint oracles") {
    Pair s;
    const auto rep = gradient_check(s.c1, 5.0, {PwcField::indicator(s.p, 0), s.c2.with_bounds({})});
    CHECK(rep.pass);
    for (const auto& d : rep.directions) {
      CHECK(d.slope > 1.8);
      CHECK(d.points_in_fit >= 2);
    }
    const auto zero = gradient_check(s.c1, 5.0, {PwcField::constant(s.p, 0.0)});
    CHECK(zero.directions[0].exact);
    CHECK(zero.pass);
    const auto adj = adjoint_check(s.c1, 5.0, 5, 1);
    CHECK(adj.pairs == 5);
    CHECK(adj.max_rel_error < 1e-10);
  }

  TEST_CASE("frequency scaling slopes") {
    Pair s;
    const auto sc = frequency_scaling(s.c1, s.c2, {1e-3, 1e-2, 1e-1});
    CHECK(sc.df_slope == doctest::Approx(1.0).epsilon(0.05));
    CHECK(sc.lipschitz_slope == doctest::Approx(2.0).epsilon(0.05));
  }

  TEST_CASE("line fit") {
    const auto [a, b] = fit_line({0, 1, 2, 3}, {1, 3, 5, 7});
    CHECK(a == doctest::Approx(2.0));
    CHECK(b == doctest::Approx(1.0));
    ConstantsBundle cb;
    cb.omega2 = 2.0;
    cb.b2 = 2.0;
    cb.exponent = 0.5;
    CHECK(growth_argument(cb, 16) == doctest::Approx(20.0));
  }

  TEST_CASE("stability table is seeded and bounded by its envelope") {
    const auto g = make_grid(17);
    const auto b = small_bundle();
    const auto t1 = estimate_lipschitz_constant(b, g, {1, 4}, 4, 11);
    const auto t2 = estimate_lipschitz_constant(b, g, {1, 4}, 4, 11);
    REQUIRE(t1.samples.size() == 8);
    for (std::size_t i = 0; i < t1.samples.size(); ++i) CHECK(t1.samples[i].ratio == t2.samples[i].ratio);
    CHECK(t1.rows.size() == 2);
    for (const auto& smp : t1.samples) {
      CHECK(std::exp(t1.k_envelope * growth_argument(b, smp.big_n)) / b.omega2 >= smp.ratio * (1 - 1e-12));
    }
  }
}

TEST_SUITE("calibrate") {
  TEST_CASE("analytic bundles pass through") {
    ConstantsBundle b;
    b.lhat0 = 0.3;
    b.l0 = 0.2;
    b.big_k = 0.05;
    const auto r = calibrate(b, make_grid(9), {});
    CHECK(r.bundle.lhat0 == 0.3);
    CHECK(r.bundle.l0 == 0.2);
    CHECK(r.bundle.big_k == 0.05);
    CHECK(r.lhat0_samples.empty());
  }

  TEST_CASE("empirical calibration") {
    const auto g = make_grid(17);
    CalibrationOptions opt;
    opt.big_ns = {1, 4};
    opt.samples_per_n = 5;
    opt.seed = 3;
    const auto r = calibrate(small_bundle(), g, opt);
    CHECK(r.bundle.lhat0 > 0.0);
    CHECK(r.bundle.l0 > 0.0);
    CHECK(r.bundle.big_k == r.stability.k_envelope);
    CHECK(r.envelope_coverage == 1.0);
    for (double v : r.lhat0_samples) CHECK(v <= r.bundle.lhat0);
    for (double v : r.l0_samples) CHECK(v <= r.bundle.l0);
    const auto again = calibrate(small_bundle(), g, opt);
    CHECK(again.bundle.big_k == r.bundle.big_k);

    opt.samples_per_n = 4;
    opt.big_ns = {1, 4};
    CHECK_THROWS_AS(calibrate(small_bundle(), g, opt), ConfigError);
  }
}
