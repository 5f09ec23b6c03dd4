#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ibvp {

/// Bound phi(N) >= dist(c_dagger^-2, W_N) on the best-approximation error by
/// N-subdomain piecewise constants. Must decrease strictly in N.
class CompressionModel {
 public:
  enum class Form { exact, power_law, table };

  /// phi == 0: the truth is representable on every partition.
  static CompressionModel exact();
  /// phi(N) = c_phi * N^-beta with c_phi > 0, beta > 0.
  static CompressionModel power_law(double c_phi, double beta);
  /// Strictly decreasing samples (N, phi); log-log interpolation between
  /// samples, extension with the end slopes outside them.
  static CompressionModel tabulated(std::vector<std::pair<double, double>> samples);

  double operator()(double n) const;
  Form form() const { return form_; }
  double c_phi() const { return c_phi_; }
  double beta() const { return beta_; }
  const std::vector<std::pair<double, double>>& samples() const { return table_; }

  std::string describe() const;

 private:
  CompressionModel() = default;
  Form form_ = Form::exact;
  double c_phi_ = 0.0;
  double beta_ = 0.0;
  std::vector<std::pair<double, double>> table_;
};

/// A-priori data and the frequency at which the constants are evaluated.
struct ConstantsBundle {
  enum class Calibration { analytic, empirical };

  double lhat0 = 1.0;  ///< bound on ||DF|| / omega^2
  double l0 = 1.0;     ///< Lipschitz constant of DF / omega^4
  double big_k = 0.1;  ///< stability exponent constant K
  double b1 = 1.0;
  double b2 = 2.0;
  double omega2 = 1.0;
  double eps = 0.1;
  /// Power of N in the stability constant. Defaults to the 3D value 4/7.
  double exponent = 4.0 / 7.0;
  CompressionModel phi = CompressionModel::exact();
  Calibration calibration = Calibration::analytic;

  /// Throws ConfigError on non-positive entries; runs the spectrum guard.
  void validate() const;
  ConstantsBundle at_frequency(double w2) const;
};

/// Constants of one level (partition with N subdomains).
struct LevelConstants {
  int level = 0;
  int big_n = 1;
  double omega2 = 0.0;
  double lhat = 0.0;    ///< lhat0 omega^2
  double lip = 0.0;     ///< l0 omega^4
  double stab = 0.0;    ///< omega^-2 exp(K (1 + omega^2 B2) N^exponent)
  double ctilde = 0.0;  ///< lip * stab^2
  double eta = 0.0;     ///< lhat0 omega^2 phi(N)
  std::optional<double> rho;  ///< set iff 8 ctilde eta < 1
};

/// K (1 + omega^2 B2) N^exponent.
double stability_argument(const ConstantsBundle& b, double big_n);

/// Throws ConfigError if exp(.) overflows, advising smaller K, omega^2 or N.
LevelConstants derive_level(const ConstantsBundle& b, int big_n, int level = 0);

/// rho = 1/2 (2 ctilde lhat)^-2 (1 + sqrt(1 - 8 ctilde eta) - 4 eta ctilde)^2.
/// Throws LevelInadmissible if 8 ctilde eta > 1; the boundary value is kept.
double compute_rho(double ctilde, double lhat, double eta);
double compute_rho(const LevelConstants& lc);

struct TransitionCheck {
  // 8 ctilde_{n+1} eta_{n+1} < 1
  bool first = false;
  double first_lhs = 0.0;
  // (3 + eps) eta_n + eta_{n+1} <= 2^{-5/2} (lhat_{n+1} stab_{n+1} ctilde_{n+1})^-1
  bool second = false;
  double second_lhs = 0.0;
  double second_rhs = 0.0;
  // the original single-inequality multi-level criterion
  bool original = false;
  double original_lhs = 0.0;
  double original_rhs = 0.0;
  /// level conditions => original criterion
  bool implication_holds = true;
  std::vector<std::string> reasons;

  bool pass() const { return first && second; }
};

TransitionCheck check_level_transition(const LevelConstants& cur, const LevelConstants& next, double eps);

/// Frequency-explicit level conditions written through phi.
struct OmegaCheck {
  bool om1 = false;
  double om1_lhs = 0.0;
  bool om2 = false;
  double om2_lhs = 0.0;
  /// The constants-based conditions at the same bundle.
  TransitionCheck level;
  /// (om1 && om2) => level.pass()
  bool implication_holds = true;

  bool pass() const { return om1 && om2; }
};

OmegaCheck check_omega_conditions(const ConstantsBundle& b, int n_cur, int n_next);

/// Left side of the N_max equation,
///   (4 + eps) phi(N) - 2^{-5/2} omega^-2 (lhat0^2 l0)^-1 exp(-3 K (1 + omega^2 B2) N^exponent).
double n_max_lhs(const ConstantsBundle& b, double big_n);

struct NMaxResult {
  enum class Kind {
    finite,        ///< value = floor of the first root
    unbounded,     ///< left side stays <= 0 up to the cap
    infeasible,    ///< left side already > 0 at N = 1
    indeterminate  ///< non-finite evaluation
  };
  Kind kind = Kind::indeterminate;
  long long value = 0;
  double root = 0.0;  ///< continuous root for Kind::finite
};

/// Logarithmic pre-scan N = 1, 2, 4, ... up to cap, then bisection.
NMaxResult solve_n_max(const ConstantsBundle& b, double cap = 1e9);

std::string to_string(NMaxResult::Kind k);

struct RhoRow {
  double omega2 = 0.0;
  bool admissible = false;
  std::string note;
  std::optional<double> rho;
  /// lhat * stab^2 * lip, the denominator of sqrt(2 rho).
  double denominator = 0.0;
  /// rho >= 1 / (32 denominator^2), the lower bound once 8 ctilde eta < 1.
  bool lower_bound_ok = false;
};

std::vector<RhoRow> rho_vs_omega(const ConstantsBundle& b, int big_n, const std::vector<double>& omega2_grid);

/// Halves omega^2 from `start` until rho >= target. Returns the sweep; the
/// last row satisfies the target when the search succeeds.
std::vector<RhoRow> sweep_until_radius(const ConstantsBundle& b, int big_n, double target, double start,
                                       int max_steps = 400);

}  // namespace ibvp
