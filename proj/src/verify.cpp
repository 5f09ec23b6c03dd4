#include "ibvp/verify.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "ibvp/errors.hpp"

namespace ibvp {

namespace {

Eigen::VectorXd random_normal(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> nd;
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = nd(rng);
  return v;
}

Eigen::VectorXd random_uniform(std::mt19937_64& rng, Eigen::Index n, double lo, double hi) {
  std::uniform_real_distribution<double> ud(lo, hi);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = ud(rng);
  return v;
}

// sum over grid cells of f_cell * area * mean of the corner products a b,
// with the matching sum of magnitudes.
std::pair<double, double> cell_loop_pairing(const Grid& g, const Eigen::VectorXd& f_cells, const NodalField& a,
                                            const NodalField& b) {
  double s = 0.0, s_abs = 0.0;
  for (int c = 0; c < g.cell_count(); ++c) {
    if (f_cells[c] == 0.0) continue;
    double prod = 0.0;
    for (int n : g.cell_corners(c)) prod += a[n] * b[n];
    s += f_cells[c] * g.cell_area() * 0.25 * prod;
    s_abs += std::abs(f_cells[c] * prod) * g.cell_area() * 0.25;
  }
  return {s, s_abs};
}

}  // namespace

double growth_argument(const ConstantsBundle& b, double big_n) {
  return (1.0 + b.omega2 * b.b2) * std::pow(big_n, b.exponent);
}

std::pair<double, double> fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) {
    return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxx > 0.0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
  return {slope, my - slope * mx};
}

AlessandriniAudit audit_alessandrini(const PwcField& c1, const PwcField& c2, double omega2, int trials,
                                     std::uint64_t seed, NeumannScheme scheme) {
  if (!c1.partition().same_layout(c2.partition())) throw ConfigError("audit fields must share a partition");
  const Grid& g = c1.partition().grid();
  auto w = make_boundary_weights(g);
  auto op1 = std::make_shared<const HelmholtzOperator>(c1, omega2);
  auto op2 = std::make_shared<const HelmholtzOperator>(c2, omega2);
  const HelmholtzSolver s1(op1), s2(op2);
  const DtnMatrix d1 = assemble_dtn(*op1, w, scheme);
  const DtnMatrix d2 = assemble_dtn(*op2, w, scheme);
  const Eigen::MatrixXd diff = d1.lambda - d2.lambda;
  const Eigen::VectorXd dc = c1.cell_values() - c2.cell_values();

  AlessandriniAudit out;
  out.trials = trials;
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    const Eigen::VectorXd gv = random_normal(rng, diff.rows());
    const Eigen::VectorXd hv = random_normal(rng, diff.rows());
    const NodalField u1 = s1.solve(gv);
    const NodalField u2 = s2.solve(hv);
    const double boundary = hv.dot(diff * gv);
    const auto [pairing, magnitude] = cell_loop_pairing(g, dc, u1, u2);
    const double interior = kDtnDerivativeSign * omega2 * pairing;
    const double defect = std::abs(boundary - interior);
    const double scale = omega2 * magnitude;
    if (scale > 0.0) out.max_defect = std::max(out.max_defect, defect / scale);
    const double signed_scale = std::max(std::abs(boundary), std::abs(interior));
    if (signed_scale > 0.0) out.max_defect_signed = std::max(out.max_defect_signed, defect / signed_scale);
  }
  return out;
}

std::vector<double> default_t_grid() { return {1e-1, 3e-2, 1e-2, 3e-3, 1e-3}; }

GradientReport gradient_check(const PwcField& c, double omega2, const std::vector<PwcField>& deltas,
                              const std::vector<double>& t_grid, double min_slope, double max_error) {
  for (double t : t_grid)
    if (!(t > 0.0 && t <= 1e-1)) throw ConfigError("gradient check step sizes must lie in (0, 0.1]");
  auto w = make_boundary_weights(c.partition().grid());
  const auto base = evaluate_forward(c, omega2, w);
  const double f_norm = dtn_data_norm(base.dtn.lambda, *w);
  constexpr double kEps = std::numeric_limits<double>::epsilon();

  GradientReport report;
  report.pass = true;
  for (const PwcField& d : deltas) {
    const Eigen::MatrixXd dfd = apply_DF(base.bank, d);
    const double dfd_norm = dtn_data_norm(dfd, *w);
    GradientDirectionReport r;
    std::vector<double> lx, ly;
    bool all_zero = true;
    for (double t0 : t_grid) {
      double t = t0;
      Eigen::MatrixXd fd;
      for (int attempt = 0;; ++attempt) {
        const PwcField cp = c.with_coeffs(c.coeffs() + t * d.coeffs());
        const PwcField cm = c.with_coeffs(c.coeffs() - t * d.coeffs());
        if (!cp.admissible() || !cm.admissible()) {
          if (attempt >= 60) throw ConfigError("gradient check: no admissible step along the direction");
          t *= 0.5;
          continue;
        }
        try {
          const auto fp = evaluate_forward(cp, omega2, w);
          const auto fm = evaluate_forward(cm, omega2, w);
          fd = (fp.dtn.lambda - fm.dtn.lambda) / (2.0 * t);
          break;
        } catch (const AdmissibilityError&) {
          if (attempt >= 60) throw;
          t *= 0.5;
        }
      }
      const double err = dtn_data_norm(fd - dfd, *w);
      if (err != 0.0) all_zero = false;
      const double rel = dfd_norm > 0.0 ? err / dfd_norm : err;
      r.t.push_back(t);
      r.rel_error.push_back(rel);
      const double roundoff = dfd_norm > 0.0 ? kEps * f_norm / (t * dfd_norm) : 0.0;
      if (rel > 100.0 * roundoff && rel > 0.0) {
        lx.push_back(std::log(t));
        ly.push_back(std::log(rel));
      }
    }
    r.points_in_fit = static_cast<int>(lx.size());
    r.slope = fit_line(lx, ly).first;
    std::size_t smallest = 0;
    for (std::size_t i = 1; i < r.t.size(); ++i)
      if (r.t[i] < r.t[smallest]) smallest = i;
    r.smallest_t_error = r.rel_error.empty() ? 0.0 : r.rel_error[smallest];
    r.exact = dfd_norm == 0.0 && all_zero;
    r.pass = r.exact || (r.slope >= min_slope && r.smallest_t_error <= max_error);
    report.pass = report.pass && r.pass;
    report.directions.push_back(std::move(r));
  }
  return report;
}

AdjointReport adjoint_check(const PwcField& c, double omega2, int pairs, std::uint64_t seed) {
  auto w = make_boundary_weights(c.partition().grid());
  const auto base = evaluate_forward(c, omega2, w);
  const Eigen::Index nb = base.dtn.nb();
  AdjointReport out;
  out.pairs = pairs;
  std::mt19937_64 rng(seed);
  for (int i = 0; i < pairs; ++i) {
    const PwcField d(c.partition_ptr(), random_normal(rng, c.size()));
    Eigen::MatrixXd r(nb, nb);
    for (Eigen::Index q = 0; q < nb; ++q) r.col(q) = random_normal(rng, nb);
    r = 0.5 * (r + r.transpose()).eval();
    const double lhs = data_inner(apply_DF(base.bank, d), r, *w);
    const double rhs = l2_inner(d, apply_DF_adjoint(base.bank, r, *w));
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    if (scale > 0.0) out.max_rel_error = std::max(out.max_rel_error, std::abs(lhs - rhs) / scale);
  }
  return out;
}

ScalingReport frequency_scaling(const PwcField& c1, const PwcField& c2, const std::vector<double>& omega2_grid) {
  auto w = make_boundary_weights(c1.partition().grid());
  ScalingReport out;
  std::vector<double> lx, ly_df, ly_lip;
  for (double o2 : omega2_grid) {
    const auto e1 = evaluate_forward(c1, o2, w);
    const auto e2 = evaluate_forward(c2, o2, w);
    const double df = df_norm_probe(e1.bank, c1.partition_ptr(), *w);
    const double lip = lipschitz_DF_probe(e1.bank, e2.bank, c1.partition_ptr(), *w);
    out.omega2.push_back(o2);
    out.df_norm.push_back(df);
    out.lipschitz.push_back(lip);
    lx.push_back(std::log(o2));
    ly_df.push_back(std::log(df));
    ly_lip.push_back(std::log(lip));
  }
  out.df_slope = fit_line(lx, ly_df).first;
  out.lipschitz_slope = fit_line(lx, ly_lip).first;
  return out;
}

StabilityTable estimate_lipschitz_constant(const ConstantsBundle& b, GridPtr grid, const std::vector<int>& big_ns,
                                           int samples_per_n, std::uint64_t seed) {
  if (samples_per_n < 1) throw ConfigError("stability sampling needs at least one sample per N");
  spectrum_guard(b.omega2, b.b1, b.b2);
  auto w = make_boundary_weights(*grid);
  const Bounds box{b.b1, b.b2};

  StabilityTable table;
  std::uint64_t stream = 0;
  for (int big_n : big_ns) {
    const int k = static_cast<int>(std::lround(std::sqrt(static_cast<double>(big_n))));
    if (k * k != big_n) throw ConfigError("N = " + std::to_string(big_n) + " is not a square");
    const PartitionPtr p = make_uniform_partition(grid, k);
    const int deep = p->most_interior_cell();

    struct Pair {
      PwcField c1, c2;
      bool adversarial;
    };
    std::vector<Pair> pairs;
    for (int s = 0; s < samples_per_n; ++s) {
      std::mt19937_64 rng(seed + stream++);
      Eigen::VectorXd v1 = random_uniform(rng, big_n, b.b1, b.b2);
      Eigen::VectorXd v2;
      const bool adversarial = s % 2 == 1;
      if (adversarial) {
        v2 = v1;
        v2[deep] = random_uniform(rng, 1, b.b1, b.b2)[0];
      } else {
        v2 = random_uniform(rng, big_n, b.b1, b.b2);
      }
      pairs.push_back({PwcField(p, v1, box), PwcField(p, v2, box), adversarial});
    }

    std::vector<double> hs(pairs.size(), 0.0), op(pairs.size(), 0.0);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const double dist = l2_dist(pairs[i].c1, pairs[i].c2);
      if (dist == 0.0) continue;
      const auto e1 = evaluate_forward(pairs[i].c1, b.omega2, w, kernels::Exec::serial);
      const auto e2 = evaluate_forward(pairs[i].c2, b.omega2, w, kernels::Exec::serial);
      const Eigen::MatrixXd diff = e1.dtn.lambda - e2.dtn.lambda;
      const double y_hs = dtn_data_norm(diff, *w);
      const double y_op = dtn_data_norm(diff, *w, DataNorm::operator_norm);
      if (y_hs > 0.0) hs[i] = dist / y_hs;
      if (y_op > 0.0) op[i] = dist / y_op;
    }

    StabilityRow row;
    row.big_n = big_n;
    row.x = growth_argument(b, big_n);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (hs[i] <= 0.0) continue;
      table.samples.push_back({big_n, hs[i], pairs[i].adversarial});
      row.max_ratio = std::max(row.max_ratio, hs[i]);
      row.max_ratio_operator = std::max(row.max_ratio_operator, op[i]);
    }
    table.rows.push_back(row);
  }

  std::vector<double> xs, ys;
  for (const auto& r : table.rows) {
    if (r.max_ratio <= 0.0) continue;
    xs.push_back(r.x);
    ys.push_back(std::log(r.max_ratio * b.omega2));
  }
  if (xs.size() >= 2) {
    std::tie(table.k_hat, table.intercept) = fit_line(xs, ys);
    double ss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double e = ys[i] - (table.intercept + table.k_hat * xs[i]);
      ss += e * e;
    }
    table.fit_residual = std::sqrt(ss / xs.size());
  }
  for (const auto& s : table.samples) {
    const double x = growth_argument(b, s.big_n);
    if (x > 0.0) table.k_envelope = std::max(table.k_envelope, std::log(s.ratio * b.omega2) / x);
  }
  return table;
}

}  // namespace ibvp
