#include <doctest.h>

#include <cmath>

#include "ibvp/errors.hpp"
#include "ibvp/optimizer.hpp"

using namespace ibvp;

namespace {

struct Problem {
  GridPtr g = make_grid(17);
  PartitionPtr p1 = make_uniform_partition(g, 1);
  PartitionPtr p4 = refine_partition(p1, 2);
  PwcField truth{p4, Eigen::Vector4d(1.2, 1.8, 1.5, 1.3), {1, 2}};
  double omega2 = 5.0;
  DtnMatrix y = evaluate_forward(truth, omega2).dtn;
  ConstantsBundle bundle = [] {
    ConstantsBundle b;
    b.lhat0 = b.l0 = 1.0;
    b.big_k = 0.01;
    b.omega2 = 5.0;
    return b;
  }();
};

}  // namespace

TEST_SUITE("optimizer") {
  TEST_CASE("step quantities") {
    const auto s = step_quantities(0.5, 2.0, 1.0, 0.0, 3.0);
    CHECK(s.u == doctest::Approx(0.25));
    CHECK(s.mu == doctest::Approx(0.03125));
    CHECK(s.v == doctest::Approx(0.005859375));
    CHECK(s.w == doctest::Approx(0.015625 * 3.0));
    const double c = 1.7, eta = 0.01;
    CHECK(step_quantities(eta, 1.0, c, eta, 1.0).u == doctest::Approx(-4 * c * eta * eta));
  }

  TEST_CASE("state at the truth") {
    Problem pr;
    const auto s = make_state(pr.truth, 0, pr.y, pr.omega2);
    CHECK(s.residual.norm < 1e-12);
    CHECK(s.t < 1e-10);
    LevelOptions opt;
    const auto run = run_level(pr.truth, derive_level(pr.bundle, 4), pr.y, opt);
    CHECK(run.stop == StopReason::discrepancy);
    CHECK(run.k_stop == 0);
    CHECK(run.history.size() == 1);
  }

  TEST_CASE("zero iteration budget") {
    Problem pr;
    LevelOptions opt;
    opt.max_iter = 0;
    const auto start = PwcField::constant(pr.p4, 1.5, {1, 2});
    const auto run = run_level(start, derive_level(pr.bundle, 4), pr.y, opt);
    CHECK(run.stop == StopReason::max_iter);
    CHECK(run.k_stop == 0);
    CHECK((run.final_field.coeffs() - start.coeffs()).norm() == 0.0);
    CHECK(to_string(StopReason::max_iter) == "max_iter");
  }

  TEST_CASE("descent decreases the Bregman distance and stays in the box") {
    Problem pr;
    LevelOptions opt;
    opt.max_iter = 15;
    opt.best_approximation = pr.truth;
    const auto start = PwcField::constant(pr.p4, 1.0, {1, 2});
    const auto run = run_level(start, derive_level(pr.bundle, 4), pr.y, opt);
    REQUIRE(run.history.size() >= 10);
    for (std::size_t i = 1; i < run.history.size(); ++i) {
      CHECK(*run.history[i].bregman <= *run.history[i - 1].bregman);
    }
    CHECK(run.history.back().r < run.history.front().r);
    CHECK(run.final_field.coeffs().minCoeff() >= 1.0);
    CHECK(run.final_field.coeffs().maxCoeff() <= 2.0);
    REQUIRE(run.start_bregman);
    CHECK(*run.start_bregman == doctest::Approx(bregman(start, pr.truth)));
  }

  TEST_CASE("projected step clamps to the bounds") {
    Problem pr;
    const auto lc = derive_level(pr.bundle, 4);
    auto s = make_state(PwcField::constant(pr.p4, 1.0, {1, 2}), 0, pr.y, pr.omega2);
    s.step = step_quantities(s.residual.norm, s.t, lc.ctilde, 0.0, lc.lip);
    const auto next = descent_step(s, lc, 0.0, pr.y);
    CHECK(next.k == 1);
    CHECK(next.c.coeffs().minCoeff() >= 1.0);
    CHECK(next.c.coeffs().maxCoeff() <= 2.0);
    CHECK(next.residual.norm < s.residual.norm);
  }

  TEST_CASE("multilevel run") {
    Problem pr;
    MultilevelOptions opt;
    opt.eta_mode = EtaMode::oracle;
    opt.truth = pr.truth;
    opt.discrepancy_floor = 1e-8;
    opt.max_iter_per_level = 200;
    const auto start = PwcField::constant(pr.p1, 1.5, {1, 2});
    const auto res = run_multilevel({pr.p1, pr.p4}, pr.bundle, pr.y, start, opt);
    REQUIRE(res.levels.size() == 2);
    CHECK(res.transitions.size() == 1);
    CHECK(res.levels[0].eta > 0.0);
    CHECK(res.levels[1].eta == 0.0);
    CHECK(res.levels[1].stop == StopReason::discrepancy);
    CHECK(l2_dist(res.final_field(), pr.truth) / l2_norm(pr.truth) < 1e-3);
    CHECK(res.approximation_term == 0.0);
    CHECK(res.error_bound >= 0.0);

    CHECK_THROWS_AS(run_multilevel({}, pr.bundle, pr.y, start, opt), ConfigError);

    MultilevelOptions tight = opt;
    tight.total_budget = 3;
    const auto short_run = run_multilevel({pr.p1, pr.p4}, pr.bundle, pr.y, start, tight);
    CHECK(short_run.levels[0].k_stop + short_run.levels[1].k_stop <= 3);

    auto bad = pr.bundle;
    bad.phi = CompressionModel::power_law(1.0, 1.0);
    MultilevelOptions bundle_eta;
    bundle_eta.max_iter_per_level = 1;
    CHECK_THROWS_AS(run_multilevel({pr.p1, pr.p4}, bad, pr.y, start, bundle_eta), LevelTransitionRefused);
    bundle_eta.override_level_check = true;
    const auto forced = run_multilevel({pr.p1, pr.p4}, bad, pr.y, start, bundle_eta);
    CHECK_FALSE(forced.warnings.empty());
  }
}
