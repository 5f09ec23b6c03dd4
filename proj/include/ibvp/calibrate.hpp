#pragma once

#include <cstdint>
#include <vector>

#include "ibvp/verify.hpp"

namespace ibvp {

struct CalibrationOptions {
  std::vector<int> big_ns{1, 4, 16};
  /// Sample pairs per N; at least 10 in total are required.
  int samples_per_n = 10;
  std::uint64_t seed = 0;
};

struct CalibrationResult {
  ConstantsBundle bundle;
  /// Per pair: ||DF(c1)|| / omega^2 and ||DF(c1) - DF(c2)|| / (omega^4 ||c1 - c2||).
  std::vector<double> lhat0_samples;
  std::vector<double> l0_samples;
  StabilityTable stability;
  /// Fraction of stability samples with omega^-2 exp(K x) >= ratio.
  double envelope_coverage = 0.0;
};

/// Analytic bundles are returned unchanged. Empirical calibration sets lhat0
/// and l0 to the largest probe values and K to the stability envelope (the
/// regression slope is kept in the stability table).
CalibrationResult calibrate(const ConstantsBundle& input, GridPtr grid, const CalibrationOptions& opt);

}  // namespace ibvp
