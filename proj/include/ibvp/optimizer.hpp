#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ibvp/constants.hpp"
#include "ibvp/derivative.hpp"

namespace ibvp {

/// Step quantities of the projected steepest descent iteration at one iterate.
struct StepQuantities {
  double u = 0.0;
  double v = 0.0;
  double w = 0.0;
  double mu = 0.0;
};

/// u = -C r^2 + (1 - 2 C eta) r - eta - C eta^2
/// v = t^-2 u r^2 (r - eta) - 1/2 t^-2 u^2 r^2
/// w = L t^-2 u r^2
/// mu = t^-2 u r
/// with C = ctilde and L = the Lipschitz constant of DF. v and w are
/// diagnostics; only mu enters the update.
StepQuantities step_quantities(double r, double t, double ctilde, double eta, double lip);

/// Iterate c_k with its residual and descent direction.
struct DescentState {
  int k = 0;
  PwcField c;
  Residual residual;
  /// T_k = DF(c_k)^* j_2(R_k) as a nodal field; t = ||T_k||_L2.
  NodalField direction;
  double t = 0.0;
  StepQuantities step;
  std::shared_ptr<const ForwardEvaluation> forward;
};

/// Evaluates residual and direction at c against data y.
DescentState make_state(const PwcField& c, int k, const DtnMatrix& y, double omega2,
                        kernels::Exec exec = kernels::Exec::parallel);

enum class StopReason { discrepancy, u_nonpositive, stationary, max_iter };
std::string to_string(StopReason s);

struct LevelOptions {
  int max_iter = 500;
  double eps = 0.1;
  /// Replaces the bundle's eta = lhat0 omega^2 phi(N) in the stopping rule.
  std::optional<double> eta_override;
  /// Lower floor on the discrepancy threshold (3 + eps) eta.
  double discrepancy_floor = 0.0;
  /// Known best approximation z^dagger on this level, for the Bregman audit.
  std::optional<PwcField> best_approximation;
  kernels::Exec exec = kernels::Exec::parallel;
};

struct IterationRecord {
  int k = 0;
  double r = 0.0;
  double t = 0.0;
  StepQuantities step;
  /// Delta_2(c_k, z^dagger) when z^dagger is known.
  std::optional<double> bregman;
};

struct LevelRun {
  explicit LevelRun(PwcField start) : final_field(std::move(start)) {}

  int level = 0;
  PartitionPtr partition;
  LevelConstants constants;
  double eta = 0.0;
  double threshold = 0.0;
  std::vector<IterationRecord> history;
  StopReason stop = StopReason::max_iter;
  /// Stopping index K_n (= number of accepted steps).
  int k_stop = 0;
  PwcField final_field;
  double final_residual = 0.0;
  /// Starting-ball audit: Delta_2(c_0, z^dagger) < rho_n, when both are known.
  std::optional<double> start_bregman;
  std::optional<bool> start_in_ball;
  std::vector<std::string> warnings;
};

/// One projected steepest descent step from `s`. Throws LevelInadmissible-free
/// ConfigError if u_k <= 0 or t_k == 0 (callers check first).
DescentState descent_step(const DescentState& s, const LevelConstants& lc, double eta, const DtnMatrix& y,
                          kernels::Exec exec = kernels::Exec::parallel);

/// Runs the descent on the partition of `start` until
/// ||F(c_k) - y|| <= max((3 + eps) eta, floor), u_k <= 0, or max_iter steps.
LevelRun run_level(const PwcField& start, const LevelConstants& lc, const DtnMatrix& y, const LevelOptions& opt);

/// How the approximation error eta_n fed to the stopping rule is chosen.
enum class EtaMode {
  bundle,  ///< lhat0 omega^2 phi(N_n)
  oracle,  ///< ||F(P_n truth) - y||_Y, needs the synthetic truth
  fixed,   ///< a constant supplied in MultilevelOptions::eta_fixed
};

struct MultilevelOptions {
  int max_iter_per_level = 500;
  /// Total step budget over all levels; each level gets what is left.
  std::optional<int> total_budget;
  EtaMode eta_mode = EtaMode::bundle;
  double eta_fixed = 0.0;
  double discrepancy_floor = 0.0;
  /// Downgrades failed level-transition conditions to warnings.
  bool override_level_check = false;
  /// Synthetic truth (any partition of the same grid).
  std::optional<PwcField> truth;
  kernels::Exec exec = kernels::Exec::parallel;
};

/// Raised when a pair of consecutive levels violates the level conditions.
class LevelTransitionRefused : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MultilevelResult {
  std::vector<LevelRun> levels;
  std::vector<OmegaCheck> transitions;
  /// (4 + eps) omega^-2 exp(K (1 + omega^2 B2) N^e) eta_n + ||c_dagger,n - c_dagger||
  double error_bound = 0.0;
  /// Second term of the bound: exact for synthetic truth, phi(N_n) otherwise.
  double approximation_term = 0.0;
  std::vector<std::string> warnings;

  const PwcField& final_field() const { return levels.back().final_field; }
};

MultilevelResult run_multilevel(const std::vector<PartitionPtr>& schedule, const ConstantsBundle& bundle,
                                const DtnMatrix& y, const PwcField& start, const MultilevelOptions& opt);

}  // namespace ibvp
