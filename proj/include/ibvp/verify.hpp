#pragma once

#include <cstdint>
#include <vector>

#include "ibvp/constants.hpp"
#include "ibvp/derivative.hpp"

namespace ibvp {

struct AlessandriniAudit {
  /// max over trials of |<(L1 - L2) g, h> - s omega^2 sum (c1 - c2) u1 u2 area| / scale,
  /// s = kDtnDerivativeSign, scale = omega^2 sum |c1 - c2| |u1 u2| area.
  double max_defect = 0.0;
  /// Same difference over max(|left|, |right|); inflated when the pairing cancels.
  double max_defect_signed = 0.0;
  int trials = 0;
};

/// Checks the discrete Alessandrini identity for random boundary pairs
/// (g, h). The interior side is a cell loop over separately solved u1, u2;
/// the boundary side uses the assembled DtN matrices.
AlessandriniAudit audit_alessandrini(const PwcField& c1, const PwcField& c2, double omega2, int trials,
                                     std::uint64_t seed, NeumannScheme scheme = NeumannScheme::variational);

struct GradientDirectionReport {
  std::vector<double> t;
  /// ||(F(c + t d) - F(c - t d)) / 2t - DF d||_Y / ||DF d||_Y
  std::vector<double> rel_error;
  /// (1 + omega^2 B2) N^exponent: the stability argument without K.
double growth_argument(const ConstantsBundle& b, double big_n);

/// Least-squares slope of log(error) vs log(t) over the points whose error
  /// is above the roundoff estimate; NaN if fewer than two such points.
  double slope = 0.0;
  int points_in_fit = 0;
  double smallest_t_error = 0.0;
  bool exact = false;  ///< DF d == 0 and every difference vanished
  bool pass = false;
};

struct GradientReport {
  std::vector<GradientDirectionReport> directions;
  bool pass = false;
};

std::vector<double> default_t_grid();

/// Central-difference check of DF at c. Perturbed points that leave the
/// admissible box have t halved until they fit.
GradientReport gradient_check(const PwcField& c, double omega2, const std::vector<PwcField>& deltas,
                              const std::vector<double>& t_grid = default_t_grid(), double min_slope = 1.8,
                              double max_error = 1e-5);

struct AdjointReport {
  /// max |<DF d, R>_Y - <d, DF^* R>_L2| / (|<DF d, R>_Y| + tiny-scale)
  double max_rel_error = 0.0;
  int pairs = 0;
};

/// Dot-product test for apply_DF / apply_DF_adjoint with seeded random
/// piecewise-constant d and symmetric R.
AdjointReport adjoint_check(const PwcField& c, double omega2, int pairs, std::uint64_t seed);

struct ScalingReport {
  std::vector<double> omega2;
  std::vector<double> df_norm;
  std::vector<double> lipschitz;
  /// log-log slopes vs omega^2; the theory predicts 1 and 2.
  double df_slope = 0.0;
  double lipschitz_slope = 0.0;
};

/// ||DF|| (indicator probe) and the DF-Lipschitz probe over an omega^2 grid.
ScalingReport frequency_scaling(const PwcField& c1, const PwcField& c2, const std::vector<double>& omega2_grid);

struct StabilitySample {
  int big_n = 0;
  double ratio = 0.0;  ///< ||c1 - c2||_L2 / ||L1 - L2||_Y
  bool adversarial = false;
};

struct StabilityRow {
  int big_n = 0;
  double max_ratio = 0.0;
  double max_ratio_operator = 0.0;  ///< same pairs under the operator-norm Y variant
  double x = 0.0;                   ///< (1 + omega^2 B2) N^exponent
};

struct StabilityTable {
  std::vector<StabilityRow> rows;
  std::vector<StabilitySample> samples;
  /// Regression slope of log(max_ratio omega^2) against x (with intercept).
  double k_hat = 0.0;
  double intercept = 0.0;
  double fit_residual = 0.0;
  /// Smallest K with omega^-2 exp(K x) >= ratio for every sample.
  double k_envelope = 0.0;
};

/// Samples admissible pairs in W_N for each N (uniform partitions of the
/// grid): random pairs plus pairs differing in the most interior subdomain.
StabilityTable estimate_lipschitz_constant(const ConstantsBundle& b, GridPtr grid, const std::vector<int>& big_ns,
                                           int samples_per_n, std::uint64_t seed);

/// (1 + omega^2 B2) N^exponent: the stability argument without K.
double growth_argument(const ConstantsBundle& b, double big_n);

/// Least-squares slope and intercept of y on x.
std::pair<double, double> fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace ibvp
