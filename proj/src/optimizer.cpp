#include "ibvp/optimizer.hpp"

#include <cmath>
#include <limits>

#include "ibvp/errors.hpp"
#include "ibvp/field_io.hpp"

namespace ibvp {

StepQuantities step_quantities(double r, double t, double ctilde, double eta, double lip) {
  StepQuantities s;
  s.u = -ctilde * r * r + (1.0 - 2.0 * ctilde * eta) * r - eta - ctilde * eta * eta;
  const double inv_t2 = t > 0.0 ? 1.0 / (t * t) : std::numeric_limits<double>::quiet_NaN();
  s.v = inv_t2 * s.u * r * r * (r - eta) - 0.5 * inv_t2 * s.u * s.u * r * r;
  s.w = lip * inv_t2 * s.u * r * r;
  s.mu = inv_t2 * s.u * r;
  return s;
}

std::string to_string(StopReason s) {
  switch (s) {
    case StopReason::discrepancy:
      return "discrepancy";
    case StopReason::u_nonpositive:
      return "u_nonpositive";
    case StopReason::stationary:
      return "stationary";
    case StopReason::max_iter:
      return "max_iter";
  }
  return "max_iter";
}

DescentState make_state(const PwcField& c, int k, const DtnMatrix& y, double omega2, kernels::Exec exec) {
  auto fwd = std::make_shared<const ForwardEvaluation>(evaluate_forward(c, omega2, y.weights, exec));
  Residual res = make_residual(fwd->dtn, y);
  NodalField dir = apply_DF_adjoint(fwd->bank, res.matrix, *y.weights, exec);
  const double t = l2_norm(dir);
  return DescentState{k, c, std::move(res), std::move(dir), t, {}, std::move(fwd)};
}

DescentState descent_step(const DescentState& s, const LevelConstants& lc, double eta, const DtnMatrix& y,
                          kernels::Exec exec) {
  const StepQuantities q = step_quantities(s.residual.norm, s.t, lc.ctilde, eta, lc.lip);
  if (!(q.u > 0.0)) throw ConfigError("descent step needs u_k > 0, got " + format_number(q.u));
  if (!(s.t > 0.0)) throw ConfigError("descent step needs a nonzero direction");
  // P_Z: L2 projection of c - mu T onto span{chi_j}, then the box clamp.
  const PwcField step = project(s.direction, s.c.partition_ptr());
  const PwcField trial = s.c.with_coeffs(s.c.coeffs() - q.mu * step.coeffs());
  return make_state(clamp_to_bounds(trial), s.k + 1, y, lc.omega2, exec);
}

LevelRun run_level(const PwcField& start, const LevelConstants& lc, const DtnMatrix& y, const LevelOptions& opt) {
  LevelRun run(start);
  run.level = lc.level;
  run.partition = start.partition_ptr();
  run.constants = lc;
  run.eta = opt.eta_override.value_or(lc.eta);
  run.threshold = std::max((3.0 + opt.eps) * run.eta, opt.discrepancy_floor);

  if (opt.best_approximation) {
    run.start_bregman = bregman(start, *opt.best_approximation);
    if (lc.rho) run.start_in_ball = *run.start_bregman < *lc.rho;
  }

  DescentState s = make_state(clamp_to_bounds(start), 0, y, lc.omega2, opt.exec);
  for (;;) {
    IterationRecord rec;
    rec.k = s.k;
    rec.r = s.residual.norm;
    rec.t = s.t;
    rec.step = step_quantities(s.residual.norm, s.t, lc.ctilde, run.eta, lc.lip);
    if (opt.best_approximation) rec.bregman = bregman(s.c, *opt.best_approximation);
    run.history.push_back(rec);

    if (s.residual.norm <= run.threshold) {
      run.stop = StopReason::discrepancy;
      break;
    }
    if (s.k >= opt.max_iter) {
      run.stop = StopReason::max_iter;
      break;
    }
    if (!(rec.step.u > 0.0)) {
      run.stop = StopReason::u_nonpositive;
      run.warnings.push_back("level " + std::to_string(run.level) + ": u_k <= 0 at k = " + std::to_string(s.k) +
                             " before the discrepancy level was reached");
      break;
    }
    if (!(s.t > 0.0)) {
      run.stop = StopReason::stationary;
      run.warnings.push_back("level " + std::to_string(run.level) + ": zero descent direction with r_k = " +
                             format_number(s.residual.norm) + " above the discrepancy level");
      break;
    }
    s = descent_step(s, lc, run.eta, y, opt.exec);
  }
  run.k_stop = s.k;
  run.final_field = s.c;
  run.final_residual = s.residual.norm;
  return run;
}

namespace {

double oracle_eta(const PwcField& truth, const PartitionPtr& p, const DtnMatrix& y, double omega2,
                  kernels::Exec exec) {
  const PwcField best = project(truth, p);
  const auto fwd = evaluate_forward(best, omega2, y.weights, exec);
  return make_residual(fwd.dtn, y).norm;
}

}  // namespace

MultilevelResult run_multilevel(const std::vector<PartitionPtr>& schedule, const ConstantsBundle& bundle,
                                const DtnMatrix& y, const PwcField& start, const MultilevelOptions& opt) {
  if (schedule.empty()) throw ConfigError("multi-level schedule is empty");
  if (opt.eta_mode == EtaMode::oracle && !opt.truth) throw ConfigError("oracle eta needs the synthetic truth");
  MultilevelResult out;

  for (std::size_t n = 0; n + 1 < schedule.size(); ++n) {
    const OmegaCheck oc = check_omega_conditions(bundle, schedule[n]->size(), schedule[n + 1]->size());
    out.transitions.push_back(oc);
    if (oc.pass()) continue;
    std::string what = "level transition N=" + std::to_string(schedule[n]->size()) + " -> N=" +
                       std::to_string(schedule[n + 1]->size()) + " violates";
    if (!oc.om1) what += " [phi(N_{n+1}) - ... < 0: lhs = " + format_number(oc.om1_lhs) + "]";
    if (!oc.om2) what += " [(3+eps) phi(N_n) + phi(N_{n+1}) - ... <= 0: lhs = " + format_number(oc.om2_lhs) + "]";
    if (!opt.override_level_check) throw LevelTransitionRefused(what);
    out.warnings.push_back(what + " (overridden; constants-based check " +
                           (oc.level.pass() ? std::string("passes") : std::string("fails")) + ")");
  }

  PwcField current = start;
  int used = 0;
  for (std::size_t n = 0; n < schedule.size(); ++n) {
    const PartitionPtr& p = schedule[n];
    const LevelConstants lc = derive_level(bundle, p->size(), static_cast<int>(n));
    LevelOptions lo;
    lo.eps = bundle.eps;
    lo.discrepancy_floor = opt.discrepancy_floor;
    lo.exec = opt.exec;
    lo.max_iter = opt.max_iter_per_level;
    if (opt.total_budget) lo.max_iter = std::min(lo.max_iter, std::max(0, *opt.total_budget - used));
    switch (opt.eta_mode) {
      case EtaMode::bundle:
        break;
      case EtaMode::oracle:
        lo.eta_override = oracle_eta(*opt.truth, p, y, bundle.omega2, opt.exec);
        break;
      case EtaMode::fixed:
        lo.eta_override = opt.eta_fixed;
        break;
    }
    if (opt.truth) lo.best_approximation = project(*opt.truth, p);

    // Warm start: the previous level's iterate re-expressed on the finer partition.
    LevelRun run = run_level(project(current, p), lc, y, lo);
    used += run.k_stop;
    current = run.final_field;
    for (const auto& w : run.warnings) out.warnings.push_back(w);
    out.levels.push_back(std::move(run));
  }

  const LevelRun& last = out.levels.back();
  const double x = stability_argument(bundle, last.partition->size());
  out.approximation_term = opt.truth ? l2_dist(project(*opt.truth, last.partition), *opt.truth)
                                     : bundle.phi(last.partition->size());
  out.error_bound = (4.0 + bundle.eps) * std::exp(x) / bundle.omega2 * last.eta + out.approximation_term;
  return out;
}

}  // namespace ibvp
