#include "ibvp/app.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <random>

#include "ibvp/errors.hpp"
#include "ibvp/field_io.hpp"

namespace ibvp {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path.string());
  return os;
}

void prepare_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
}

void snapshot(const ExperimentConfig& c, const fs::path& dir) {
  auto os = open_out(dir / "config.ini");
  write_config(os, c);
}

std::string num(double v) { return format_number(v); }
std::string num(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }
const char* flag(bool b) { return b ? "pass" : "fail"; }

PwcField random_field(std::mt19937_64& rng, const PartitionPtr& p, Bounds box) {
  std::uniform_real_distribution<double> ud(box.lower, box.upper);
  Eigen::VectorXd v(p->size());
  for (int j = 0; j < p->size(); ++j) v[j] = ud(rng);
  return {p, v, box};
}

ConstantsBundle resolve_bundle(const ExperimentConfig& c, const GridPtr& grid, std::ostream& log) {
  if (c.bundle.calibration == ConstantsBundle::Calibration::analytic) return c.bundle;
  CalibrationOptions co = c.calibration;
  co.seed = c.seed;
  log << "calibrating constants on N = ";
  for (int n : co.big_ns) log << n << ' ';
  log << '\n';
  return calibrate(c.bundle, grid, co).bundle;
}

}  // namespace

int cmd_forward(const ExperimentConfig& c, const RunOptions& opt, std::ostream& log) {
  validate(c, false);
  const GridPtr grid = make_grid(c.m);
  const PwcField truth = build_truth(c, grid);
  const auto op = HelmholtzOperator(truth, c.omega2, c.bounds());
  const DtnMatrix d = assemble_dtn(op, make_boundary_weights(*grid));
  prepare_dir(opt.out_dir);
  save_dtn(opt.out_dir, d);
  save_pwc(opt.out_dir / "truth.pwc", truth);
  snapshot(c, opt.out_dir);
  log << "forward: m = " << c.m << ", nb = " << d.nb() << ", omega2 = " << num(c.omega2) << " -> "
      << (opt.out_dir / "dtn.txt").string() << '\n';
  return exit_code::ok;
}

int cmd_reconstruct(const ExperimentConfig& c, const RunOptions& opt, std::ostream& log) {
  validate(c);
  const GridPtr grid = make_grid(c.m);
  std::optional<PwcField> truth;
  if (c.truth) truth = build_truth(c, grid);

  DtnMatrix data;
  if (c.data_file) {
    if (!fs::exists(*c.data_file)) throw IoError("data file not found: " + c.data_file->string());
    data = load_dtn(*c.data_file);
    if (data.nb() != 4 * (c.m - 1)) {
      throw ConfigError("data file has nb = " + std::to_string(data.nb()) + ", grid m = " + std::to_string(c.m) +
                        " needs " + std::to_string(4 * (c.m - 1)));
    }
    if (data.omega2 != c.omega2) {
      throw ConfigError("data file omega2 = " + num(data.omega2) + " differs from physics.omega2 = " + num(c.omega2));
    }
  } else if (truth) {
    data = evaluate_forward(*truth, c.omega2, make_boundary_weights(*grid)).dtn;
  } else {
    throw UsageError("reconstruct needs [data] file or a [truth] section");
  }

  const ConstantsBundle bundle = resolve_bundle(c, grid, log);
  const auto schedule = build_schedule(c, grid);
  MultilevelOptions mo;
  mo.max_iter_per_level = c.max_iter;
  mo.total_budget = c.total_budget;
  mo.eta_mode = c.eta_mode;
  mo.eta_fixed = c.eta_fixed;
  mo.discrepancy_floor = c.discrepancy_floor;
  mo.override_level_check = opt.override_level_check;
  mo.truth = truth;
  const PwcField start = PwcField::constant(schedule.front(), c.start_value(), c.bounds());
  const MultilevelResult res = run_multilevel(schedule, bundle, data, start, mo);

  prepare_dir(opt.out_dir);
  for (const LevelRun& run : res.levels) {
    auto os = open_out(opt.out_dir / ("level_" + std::to_string(run.level) + ".csv"));
    os << "k,r_k,t_k,u_k,mu_k,bregman_opt\n";
    for (const auto& h : run.history) {
      os << h.k << ',' << num(h.r) << ',' << num(h.t) << ',' << num(h.step.u) << ',' << num(h.step.mu) << ','
         << num(h.bregman) << '\n';
    }
    log << "level " << run.level << " (N = " << run.partition->size() << "): " << to_string(run.stop)
        << " after " << run.k_stop << " steps, r = " << num(run.final_residual) << '\n';
  }
  save_pwc(opt.out_dir / "final.pwc", res.final_field());

  {
    auto os = open_out(opt.out_dir / "report.txt");
    const LevelRun& last = res.levels.back();
    os << "final_n = " << last.partition->size() << '\n';
    os << "final_residual = " << num(last.final_residual) << '\n';
    os << "eta = " << num(last.eta) << '\n';
    os << "error_bound = " << num(res.error_bound) << '\n';
    os << "approximation_term = " << num(res.approximation_term) << '\n';
    if (truth) {
      const double rel = l2_dist(project(*truth, last.partition), res.final_field()) / l2_norm(*truth);
      const double rel_full = l2_dist(res.final_field(), *truth) / l2_norm(*truth);
      os << "relative_error_best_approximation = " << num(rel) << '\n';
      os << "relative_error = " << num(rel_full) << '\n';
    }
  }
  {
    auto os = open_out(opt.out_dir / "metadata.txt");
    os << "schedule = ";
    for (std::size_t i = 0; i < schedule.size(); ++i) os << (i ? "," : "") << schedule[i]->size();
    os << "\nbundle.lhat0 = " << num(bundle.lhat0) << "\nbundle.l0 = " << num(bundle.l0)
       << "\nbundle.k = " << num(bundle.big_k) << "\nbundle.eps = " << num(bundle.eps)
       << "\nbundle.exponent = " << num(bundle.exponent) << "\nbundle.phi = " << bundle.phi.describe()
       << "\nseed = " << c.seed << "\noverride_level_check = " << (opt.override_level_check ? 1 : 0) << '\n';
    for (const LevelRun& run : res.levels) {
      const std::string p = "level." + std::to_string(run.level) + ".";
      os << p << "n = " << run.partition->size() << '\n';
      os << p << "stop = " << to_string(run.stop) << '\n';
      os << p << "k_stop = " << run.k_stop << '\n';
      os << p << "threshold = " << num(run.threshold) << '\n';
      os << p << "ctilde = " << num(run.constants.ctilde) << '\n';
      os << p << "rho = " << (run.constants.rho ? num(*run.constants.rho) : std::string("undefined")) << '\n';
      os << p << "start_bregman = " << num(run.start_bregman) << '\n';
      os << p << "start_in_ball = "
         << (run.start_in_ball ? (*run.start_in_ball ? "yes" : "no") : "unverifiable") << '\n';
    }
    for (std::size_t i = 0; i < res.warnings.size(); ++i) os << "warning." << i << " = " << res.warnings[i] << '\n';
  }
  snapshot(c, opt.out_dir);
  for (const auto& w : res.warnings) log << "warning: " << w << '\n';
  log << "error bound = " << num(res.error_bound) << '\n';
  return exit_code::ok;
}

int cmd_verify(const ExperimentConfig& c, const RunOptions& opt, std::ostream& log) {
  validate(c);
  const GridPtr grid = make_grid(c.m);
  const auto schedule = build_schedule(c, grid);
  const PartitionPtr p = schedule.back();
  const VerifySettings& vs = c.verify;
  std::mt19937_64 rng(c.seed);
  prepare_dir(opt.out_dir);
  auto report = open_out(opt.out_dir / "verify_report.txt");
  bool all = true;

  double ales = 0.0, ales_signed = 0.0;
  for (int i = 0; i < vs.alessandrini_pairs; ++i) {
    const PwcField c1 = random_field(rng, p, c.bounds());
    const PwcField c2 = random_field(rng, p, c.bounds());
    const AlessandriniAudit a = audit_alessandrini(c1, c2, c.omega2, vs.alessandrini_trials, rng());
    ales = std::max(ales, a.max_defect);
    ales_signed = std::max(ales_signed, a.max_defect_signed);
  }
  const bool ales_ok = ales <= 1e-9;
  report << "alessandrini.max_defect = " << num(ales) << "\nalessandrini.max_defect_signed = " << num(ales_signed)
         << "\nalessandrini = " << flag(ales_ok) << '\n';
  all = all && ales_ok;

  const PwcField base = random_field(rng, p, c.bounds());
  std::vector<PwcField> dirs;
  std::normal_distribution<double> nd;
  for (int i = 0; i < vs.gradient_directions; ++i) {
    Eigen::VectorXd d(p->size());
    for (int j = 0; j < p->size(); ++j) d[j] = nd(rng);
    dirs.emplace_back(p, d);
  }
  const GradientReport gr = gradient_check(base, c.omega2, dirs);
  {
    auto os = open_out(opt.out_dir / "gradient.csv");
    os << "direction,t,rel_error\n";
    for (std::size_t i = 0; i < gr.directions.size(); ++i)
      for (std::size_t k = 0; k < gr.directions[i].t.size(); ++k)
        os << i << ',' << num(gr.directions[i].t[k]) << ',' << num(gr.directions[i].rel_error[k]) << '\n';
  }
  double min_slope = INFINITY, max_small = 0.0;
  for (const auto& d : gr.directions) {
    if (!d.exact) min_slope = std::min(min_slope, d.slope);
    max_small = std::max(max_small, d.smallest_t_error);
  }
  report << "gradient.min_slope = " << num(min_slope) << "\ngradient.max_smallest_t_error = " << num(max_small)
         << "\ngradient = " << flag(gr.pass) << '\n';
  all = all && gr.pass;

  const AdjointReport ad = adjoint_check(base, c.omega2, vs.adjoint_pairs, rng());
  const bool ad_ok = ad.max_rel_error <= 1e-10;
  report << "adjoint.max_rel_error = " << num(ad.max_rel_error) << "\nadjoint = " << flag(ad_ok) << '\n';
  all = all && ad_ok;

  std::vector<double> grid_ok;
  for (double o2 : vs.scaling_omega2) {
    try {
      spectrum_guard(o2, c.b1, c.b2);
      grid_ok.push_back(o2);
    } catch (const AdmissibilityError&) {
      report << "scaling.skipped = " << num(o2) << '\n';
    }
  }
  if (grid_ok.size() >= 2) {
    const ScalingReport sc = frequency_scaling(base, random_field(rng, p, c.bounds()), grid_ok);
    const bool sc_ok = std::abs(sc.df_slope - 1.0) <= 0.1 && std::abs(sc.lipschitz_slope / 2.0 - 1.0) <= 0.1;
    report << "scaling.df_slope = " << num(sc.df_slope) << "\nscaling.lipschitz_slope = " << num(sc.lipschitz_slope)
           << "\nscaling = " << flag(sc_ok) << '\n';
    all = all && sc_ok;
  }

  if (!vs.stability_ns.empty()) {
    ConstantsBundle b = c.bundle;
    const StabilityTable st = estimate_lipschitz_constant(b, grid, vs.stability_ns, vs.stability_samples, rng());
    auto os = open_out(opt.out_dir / "stability.csv");
    os << "n,x,max_ratio,max_ratio_operator\n";
    bool mono = true;
    for (std::size_t i = 0; i < st.rows.size(); ++i) {
      const auto& r = st.rows[i];
      os << r.big_n << ',' << num(r.x) << ',' << num(r.max_ratio) << ',' << num(r.max_ratio_operator) << '\n';
      if (i > 0 && r.max_ratio < 0.9 * st.rows[i - 1].max_ratio) mono = false;
    }
    const bool st_ok = mono && (st.rows.size() < 2 || st.k_hat > 0.0);
    report << "stability.k_hat = " << num(st.k_hat) << "\nstability.k_envelope = " << num(st.k_envelope)
           << "\nstability = " << flag(st_ok) << '\n';
    all = all && st_ok;
  }

  report << "overall = " << flag(all) << '\n';
  log << "verify: " << flag(all) << '\n';
  return all ? exit_code::ok : exit_code::verification_failure;
}

int cmd_constants(const ExperimentConfig& c, const RunOptions& opt, std::ostream& log) {
  validate(c);
  const GridPtr grid = make_grid(c.m);
  const ConstantsBundle b = resolve_bundle(c, grid, log);
  prepare_dir(opt.out_dir);

  {
    auto os = open_out(opt.out_dir / "levels.csv");
    os << "level,n,lhat,lip,stab,ctilde,eta,rho\n";
    for (std::size_t i = 0; i < c.schedule.size(); ++i) {
      const LevelConstants lc = derive_level(b, c.schedule[i], static_cast<int>(i));
      os << i << ',' << lc.big_n << ',' << num(lc.lhat) << ',' << num(lc.lip) << ',' << num(lc.stab) << ','
         << num(lc.ctilde) << ',' << num(lc.eta) << ',' << num(lc.rho) << '\n';
    }
  }
  {
    auto os = open_out(opt.out_dir / "transitions.csv");
    os << "from,to,om1,om1_lhs,om2,om2_lhs,level_first,level_second,original,implication_holds\n";
    for (std::size_t i = 0; i + 1 < c.schedule.size(); ++i) {
      const OmegaCheck oc = check_omega_conditions(b, c.schedule[i], c.schedule[i + 1]);
      os << c.schedule[i] << ',' << c.schedule[i + 1] << ',' << oc.om1 << ',' << num(oc.om1_lhs) << ',' << oc.om2
         << ',' << num(oc.om2_lhs) << ',' << oc.level.first << ',' << oc.level.second << ',' << oc.level.original
         << ',' << oc.implication_holds << '\n';
    }
  }

  bool ok = true;
  {
    const auto rows = rho_vs_omega(b, c.constants.big_n, c.constants.omega2_grid);
    auto os = open_out(opt.out_dir / "rho.csv");
    os << "omega2,admissible,rho,denominator,lower_bound_ok,note\n";
    std::optional<std::pair<double, double>> prev;  // (omega2, rho)
    for (const auto& r : rows) {
      os << num(r.omega2) << ',' << r.admissible << ',' << num(r.rho) << ',' << num(r.denominator) << ','
         << r.lower_bound_ok << ',' << r.note << '\n';
      if (!r.rho) continue;
      if (prev && r.omega2 < prev->first && !(*r.rho > prev->second)) ok = false;
      prev = std::make_pair(r.omega2, *r.rho);
    }
  }
  if (c.constants.target_radius) {
    const auto rows = sweep_until_radius(b, c.constants.big_n, *c.constants.target_radius, c.omega2);
    auto os = open_out(opt.out_dir / "sweep.csv");
    os << "omega2,rho\n";
    for (const auto& r : rows) os << num(r.omega2) << ',' << num(r.rho) << '\n';
    const bool reached = !rows.empty() && rows.back().rho && *rows.back().rho >= *c.constants.target_radius;
    log << "sweep: target " << num(*c.constants.target_radius) << (reached ? " reached" : " not reached") << '\n';
    ok = ok && reached;
  }
  {
    const NMaxResult nm = solve_n_max(b);
    auto os = open_out(opt.out_dir / "n_max.txt");
    os << "kind = " << to_string(nm.kind) << '\n';
    if (nm.kind == NMaxResult::Kind::finite) os << "value = " << nm.value << "\nroot = " << num(nm.root) << '\n';
  }
  log << "constants: " << (ok ? "rho increases as omega^2 decreases" : "rho table not monotone") << '\n';
  return ok ? exit_code::ok : exit_code::verification_failure;
}

int cmd_calibrate(const ExperimentConfig& c, const RunOptions& opt, std::ostream& log) {
  validate(c, false);
  const GridPtr grid = make_grid(c.m);
  CalibrationOptions co = c.calibration;
  co.seed = c.seed;
  ConstantsBundle in = c.bundle;
  in.calibration = ConstantsBundle::Calibration::empirical;
  const CalibrationResult cr = calibrate(in, grid, co);
  prepare_dir(opt.out_dir);
  ExperimentConfig out = c;
  out.bundle = cr.bundle;
  out.bundle.calibration = ConstantsBundle::Calibration::analytic;
  {
    auto os = open_out(opt.out_dir / "calibrated.ini");
    write_config(os, out);
  }
  {
    auto os = open_out(opt.out_dir / "calibration.csv");
    os << "quantity,n,value\n";
    for (double v : cr.lhat0_samples) os << "lhat0,," << num(v) << '\n';
    for (double v : cr.l0_samples) os << "l0,," << num(v) << '\n';
    for (const auto& s : cr.stability.samples) os << "stability_ratio," << s.big_n << ',' << num(s.ratio) << '\n';
    os << "k_hat,," << num(cr.stability.k_hat) << '\n';
    os << "k_hat_residual,," << num(cr.stability.fit_residual) << '\n';
    os << "k_envelope,," << num(cr.stability.k_envelope) << '\n';
  }
  log << "calibrated: lhat0 = " << num(cr.bundle.lhat0) << ", l0 = " << num(cr.bundle.l0)
      << ", K = " << num(cr.bundle.big_k) << '\n';
  return exit_code::ok;
}

int run_command(const std::string& command, const fs::path& config_path, const RunOptions& opt, std::ostream& log,
                std::ostream& err) {
  try {
    ExperimentConfig c = load_config(config_path);
    if (opt.seed) c.seed = *opt.seed;
    if (command == "forward") return cmd_forward(c, opt, log);
    if (command == "reconstruct") return cmd_reconstruct(c, opt, log);
    if (command == "verify") return cmd_verify(c, opt, log);
    if (command == "constants") return cmd_constants(c, opt, log);
    if (command == "calibrate") return cmd_calibrate(c, opt, log);
    throw UsageError("unknown command '" + command + "'");
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return exit_code::usage;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return exit_code::io;
  } catch (const AdmissibilityError& e) {
    err << "admissibility error: " << e.what() << '\n';
    return exit_code::admissibility;
  } catch (const LevelTransitionRefused& e) {
    err << "admissibility error: " << e.what() << '\n';
    return exit_code::admissibility;
  } catch (const LevelInadmissible& e) {
    err << "admissibility error: " << e.what() << '\n';
    return exit_code::admissibility;
  } catch (const SolverError& e) {
    err << "admissibility error: " << e.what() << '\n';
    return exit_code::admissibility;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return exit_code::usage;
  }
}

}  // namespace ibvp
