#include "ibvp/constants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ibvp/errors.hpp"
#include "ibvp/field_io.hpp"
#include "ibvp/spectrum.hpp"

namespace ibvp {

namespace {

// exp() overflows past ~709.78.
constexpr double kMaxLog = 700.0;
const double kTwoPowMinus52 = std::pow(2.0, -2.5);

}  // namespace

CompressionModel CompressionModel::exact() { return CompressionModel(); }

CompressionModel CompressionModel::power_law(double c_phi, double beta) {
  if (!(c_phi > 0.0) || !std::isfinite(c_phi)) throw ConfigError("compression model needs c_phi > 0");
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw ConfigError("compression model phi(N) = c N^-beta must decrease monotonically in N (beta > 0), got beta = " +
                      format_number(beta));
  }
  CompressionModel m;
  m.form_ = Form::power_law;
  m.c_phi_ = c_phi;
  m.beta_ = beta;
  return m;
}

CompressionModel CompressionModel::tabulated(std::vector<std::pair<double, double>> samples) {
  if (samples.size() < 2) throw ConfigError("tabulated compression model needs at least two samples");
  std::sort(samples.begin(), samples.end());
  for (std::size_t k = 0; k < samples.size(); ++k) {
    if (!(samples[k].first >= 1.0) || !(samples[k].second > 0.0)) throw ConfigError("table entries need N >= 1, phi > 0");
    if (k > 0 && !(samples[k].second < samples[k - 1].second && samples[k].first > samples[k - 1].first)) {
      throw ConfigError("tabulated phi must decrease strictly in N");
    }
  }
  CompressionModel m;
  m.form_ = Form::table;
  m.table_ = std::move(samples);
  return m;
}

double CompressionModel::operator()(double n) const {
  switch (form_) {
    case Form::exact:
      return 0.0;
    case Form::power_law:
      return c_phi_ * std::pow(n, -beta_);
    case Form::table: {
      auto seg = std::upper_bound(table_.begin(), table_.end(), n,
                                  [](double v, const auto& s) { return v < s.first; });
      if (seg == table_.begin()) seg = table_.begin() + 1;
      if (seg == table_.end()) seg = table_.end() - 1;
      const auto& [n0, p0] = *(seg - 1);
      const auto& [n1, p1] = *seg;
      const double slope = std::log(p1 / p0) / std::log(n1 / n0);
      return p0 * std::exp(slope * std::log(n / n0));
    }
  }
  return 0.0;
}

std::string CompressionModel::describe() const {
  std::ostringstream os;
  switch (form_) {
    case Form::exact:
      os << "exact";
      break;
    case Form::power_law:
      os << "power " << format_number(c_phi_) << " " << format_number(beta_);
      break;
    case Form::table:
      os << "table";
      for (const auto& [n, p] : table_) os << " " << format_number(n) << ":" << format_number(p);
      break;
  }
  return os.str();
}

void ConstantsBundle::validate() const {
  auto positive = [](double v, const char* name, bool allow_zero) {
    if (!std::isfinite(v) || v < 0.0 || (!allow_zero && v == 0.0)) {
      throw ConfigError(std::string("constant ") + name + " must be " + (allow_zero ? "non-negative" : "positive") +
                        " and finite, got " + format_number(v));
    }
  };
  positive(lhat0, "lhat0", true);
  positive(l0, "l0", true);
  positive(big_k, "K", true);
  positive(eps, "eps", false);
  positive(exponent, "exponent", false);
  spectrum_guard(omega2, b1, b2);
}

ConstantsBundle ConstantsBundle::at_frequency(double w2) const {
  ConstantsBundle b = *this;
  b.omega2 = w2;
  return b;
}

double stability_argument(const ConstantsBundle& b, double big_n) {
  return b.big_k * (1.0 + b.omega2 * b.b2) * std::pow(big_n, b.exponent);
}

LevelConstants derive_level(const ConstantsBundle& b, int big_n, int level) {
  if (big_n < 1) throw ConfigError("level needs N >= 1");
  LevelConstants lc;
  lc.level = level;
  lc.big_n = big_n;
  lc.omega2 = b.omega2;
  const double arg = stability_argument(b, big_n);
  const double log_stab = arg - std::log(b.omega2);
  if (!(2.0 * log_stab < kMaxLog)) {
    throw ConfigError("stability constant exp(K (1 + omega^2 B2) N^" + format_number(b.exponent) + ") overflows at N = " +
                      std::to_string(big_n) + " (exponent " + format_number(arg) +
                      "); use a smaller K, omega^2 or N");
  }
  lc.lhat = b.lhat0 * b.omega2;
  lc.lip = b.l0 * b.omega2 * b.omega2;
  lc.stab = std::exp(log_stab);
  lc.ctilde = lc.lip * lc.stab * lc.stab;
  lc.eta = b.lhat0 * b.omega2 * b.phi(big_n);
  if (8.0 * lc.ctilde * lc.eta < 1.0) lc.rho = compute_rho(lc);
  return lc;
}

double compute_rho(double ctilde, double lhat, double eta) {
  const double x = ctilde * eta;
  if (!(8.0 * x <= 1.0)) {
    throw LevelInadmissible("level inadmissible: 8 ctilde eta = " + format_number(8.0 * x) + " > 1");
  }
  const double denom = 2.0 * ctilde * lhat;
  if (denom == 0.0) return std::numeric_limits<double>::infinity();
  const double inner = 1.0 + std::sqrt(1.0 - 8.0 * x) - 4.0 * x;
  return 0.5 * inner * inner / (denom * denom);
}

double compute_rho(const LevelConstants& lc) { return compute_rho(lc.ctilde, lc.lhat, lc.eta); }

TransitionCheck check_level_transition(const LevelConstants& cur, const LevelConstants& next, double eps) {
  TransitionCheck t;
  const double x = next.ctilde * next.eta;
  t.first_lhs = 8.0 * x;
  t.first = t.first_lhs < 1.0;
  if (!t.first) t.reasons.push_back("8 ctilde_{n+1} eta_{n+1} = " + format_number(t.first_lhs) + " >= 1");

  const double prod = next.lhat * next.stab * next.ctilde;
  t.second_lhs = (3.0 + eps) * cur.eta + next.eta;
  t.second_rhs = prod > 0.0 ? kTwoPowMinus52 / prod : std::numeric_limits<double>::infinity();
  t.second = t.second_lhs <= t.second_rhs;
  if (!t.second) {
    t.reasons.push_back("(3 + eps) eta_n + eta_{n+1} = " + format_number(t.second_lhs) + " > " +
                        format_number(t.second_rhs));
  }

  t.original_lhs = (3.0 + eps) * cur.eta;
  if (t.first) {
    const double ls = next.lhat * next.stab;
    const double root = 1.0 + std::sqrt(1.0 - 8.0 * x);
    if (ls == 0.0 || next.ctilde == 0.0) {
      t.original_rhs = std::numeric_limits<double>::infinity();
    } else {
      t.original_rhs = std::sqrt(0.5) / ls * (root / (2.0 * next.ctilde) - 2.0 * next.eta) - next.eta;
    }
    t.original = t.original_lhs < t.original_rhs;
  } else {
    t.original_rhs = std::numeric_limits<double>::quiet_NaN();
    t.original = false;
  }
  t.implication_holds = !t.pass() || t.original;
  return t;
}

OmegaCheck check_omega_conditions(const ConstantsBundle& b, int n_cur, int n_next) {
  OmegaCheck o;
  const double x = stability_argument(b, n_next);
  const double w2 = b.omega2;
  const double a1 = b.l0 * b.lhat0;
  const double a2 = b.lhat0 * b.lhat0 * b.l0;
  const double t1 = a1 > 0.0 ? 0.125 / (w2 * a1) * std::exp(-2.0 * x) : std::numeric_limits<double>::infinity();
  const double t2 = a2 > 0.0 ? kTwoPowMinus52 / (w2 * a2) * std::exp(-3.0 * x) : std::numeric_limits<double>::infinity();
  o.om1_lhs = b.phi(n_next) - t1;
  o.om1 = o.om1_lhs < 0.0;
  o.om2_lhs = (3.0 + b.eps) * b.phi(n_cur) + b.phi(n_next) - t2;
  o.om2 = o.om2_lhs <= 0.0;
  o.level = check_level_transition(derive_level(b, n_cur), derive_level(b, n_next, 1), b.eps);
  o.implication_holds = !o.pass() || o.level.pass();
  return o;
}

double n_max_lhs(const ConstantsBundle& b, double big_n) {
  const double a = b.lhat0 * b.lhat0 * b.l0;
  const double t = a > 0.0 ? kTwoPowMinus52 / (b.omega2 * a) * std::exp(-3.0 * stability_argument(b, big_n))
                           : std::numeric_limits<double>::infinity();
  return (4.0 + b.eps) * b.phi(big_n) - t;
}

namespace {

// Sign-exact log form of n_max_lhs: positive iff n_max_lhs > 0.
double n_max_log_gap(const ConstantsBundle& b, double big_n) {
  const double a = b.lhat0 * b.lhat0 * b.l0;
  if (a == 0.0) return -std::numeric_limits<double>::infinity();
  const double log_phi_term = std::log((4.0 + b.eps) * b.phi(big_n));
  const double log_threshold = std::log(kTwoPowMinus52 / (b.omega2 * a)) - 3.0 * stability_argument(b, big_n);
  return log_phi_term - log_threshold;
}

}  // namespace

NMaxResult solve_n_max(const ConstantsBundle& b, double cap) {
  NMaxResult r;
  if (b.phi.form() == CompressionModel::Form::exact) {
    r.kind = NMaxResult::Kind::unbounded;
    return r;
  }
  auto gap = [&](double n) { return n_max_log_gap(b, n); };
  const double g1 = gap(1.0);
  if (std::isnan(g1)) return r;
  if (g1 > 0.0) {
    r.kind = NMaxResult::Kind::infeasible;
    return r;
  }
  double lo = 1.0;
  double hi = 0.0;
  for (double n = 2.0; n <= cap; n *= 2.0) {
    const double g = gap(n);
    if (std::isnan(g)) return r;
    if (g > 0.0) {
      hi = n;
      break;
    }
    lo = n;
  }
  if (hi == 0.0) {
    const double g = gap(cap);
    if (std::isnan(g)) return r;
    if (g <= 0.0) {
      r.kind = NMaxResult::Kind::unbounded;
      return r;
    }
    hi = cap;
  }
  // Integer bisection: gap(lo) <= 0 < gap(hi).
  long long ilo = static_cast<long long>(lo);
  long long ihi = static_cast<long long>(std::ceil(hi));
  while (ihi - ilo > 1) {
    const long long mid = ilo + (ihi - ilo) / 2;
    (gap(static_cast<double>(mid)) > 0.0 ? ihi : ilo) = mid;
  }
  double clo = static_cast<double>(ilo);
  double chi = static_cast<double>(ihi);
  for (int it = 0; it < 200 && chi - clo > 1e-12 * chi; ++it) {
    const double mid = 0.5 * (clo + chi);
    (gap(mid) > 0.0 ? chi : clo) = mid;
  }
  r.kind = NMaxResult::Kind::finite;
  r.value = ilo;
  r.root = 0.5 * (clo + chi);
  return r;
}

std::string to_string(NMaxResult::Kind k) {
  switch (k) {
    case NMaxResult::Kind::finite:
      return "finite";
    case NMaxResult::Kind::unbounded:
      return "unbounded";
    case NMaxResult::Kind::infeasible:
      return "infeasible";
    case NMaxResult::Kind::indeterminate:
      return "indeterminate";
  }
  return "indeterminate";
}

namespace {

RhoRow rho_row(const ConstantsBundle& base, int big_n, double w2) {
  RhoRow row;
  row.omega2 = w2;
  try {
    spectrum_guard(w2, base.b1, base.b2);
  } catch (const AdmissibilityError& e) {
    row.note = e.what();
    return row;
  }
  row.admissible = true;
  const ConstantsBundle b = base.at_frequency(w2);
  const LevelConstants lc = derive_level(b, big_n);
  row.denominator = lc.lip * lc.stab * lc.stab * lc.lhat;
  if (lc.rho) {
    row.rho = lc.rho;
    row.lower_bound_ok = *lc.rho >= 1.0 / (32.0 * row.denominator * row.denominator);
  } else {
    row.note = "8 ctilde eta >= 1";
  }
  return row;
}

}  // namespace

std::vector<RhoRow> rho_vs_omega(const ConstantsBundle& b, int big_n, const std::vector<double>& omega2_grid) {
  std::vector<RhoRow> rows;
  rows.reserve(omega2_grid.size());
  for (double w2 : omega2_grid) rows.push_back(rho_row(b, big_n, w2));
  return rows;
}

std::vector<RhoRow> sweep_until_radius(const ConstantsBundle& b, int big_n, double target, double start,
                                       int max_steps) {
  std::vector<RhoRow> rows;
  double w2 = start;
  for (int s = 0; s < max_steps; ++s, w2 *= 0.5) {
    rows.push_back(rho_row(b, big_n, w2));
    if (rows.back().rho && *rows.back().rho >= target) break;
  }
  return rows;
}

}  // namespace ibvp
