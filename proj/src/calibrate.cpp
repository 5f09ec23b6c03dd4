#include "ibvp/calibrate.hpp"

#include <cmath>
#include <random>

#include "ibvp/errors.hpp"

namespace ibvp {

CalibrationResult calibrate(const ConstantsBundle& input, GridPtr grid, const CalibrationOptions& opt) {
  CalibrationResult out;
  out.bundle = input;
  if (input.calibration == ConstantsBundle::Calibration::analytic) return out;

  const int total = opt.samples_per_n * static_cast<int>(opt.big_ns.size());
  if (total < 10) throw ConfigError("calibration needs at least 10 sample pairs, got " + std::to_string(total));
  spectrum_guard(input.omega2, input.b1, input.b2);

  auto w = make_boundary_weights(*grid);
  const Bounds box{input.b1, input.b2};
  const double o2 = input.omega2;
  std::uint64_t stream = 0;
  for (int big_n : opt.big_ns) {
    const int k = static_cast<int>(std::lround(std::sqrt(static_cast<double>(big_n))));
    if (k * k != big_n) throw ConfigError("N = " + std::to_string(big_n) + " is not a square");
    const PartitionPtr p = make_uniform_partition(grid, k);
    for (int s = 0; s < opt.samples_per_n; ++s) {
      std::mt19937_64 rng(opt.seed + stream++);
      std::uniform_real_distribution<double> ud(input.b1, input.b2);
      Eigen::VectorXd v1(big_n), v2(big_n);
      for (int j = 0; j < big_n; ++j) v1[j] = ud(rng);
      for (int j = 0; j < big_n; ++j) v2[j] = ud(rng);
      const PwcField c1(p, v1, box), c2(p, v2, box);
      const auto e1 = evaluate_forward(c1, o2, w);
      const auto e2 = evaluate_forward(c2, o2, w);
      out.lhat0_samples.push_back(df_norm_probe(e1.bank, p, *w) / o2);
      const double dist = l2_dist(c1, c2);
      if (dist > 0.0) out.l0_samples.push_back(lipschitz_DF_probe(e1.bank, e2.bank, p, *w) / (o2 * o2 * dist));
    }
  }

  out.stability = estimate_lipschitz_constant(input, grid, opt.big_ns, opt.samples_per_n, opt.seed + stream);
  double lhat0 = 0.0, l0 = 0.0;
  for (double v : out.lhat0_samples) lhat0 = std::max(lhat0, v);
  for (double v : out.l0_samples) l0 = std::max(l0, v);
  const double big_k = out.stability.k_envelope;
  if (!(lhat0 > 0.0) || !(l0 > 0.0) || !(big_k > 0.0)) {
    throw ConfigError("calibration failure: non-positive fitted constants (lhat0 = " + std::to_string(lhat0) +
                      ", l0 = " + std::to_string(l0) + ", K = " + std::to_string(big_k) + ")");
  }
  out.bundle.lhat0 = lhat0;
  out.bundle.l0 = l0;
  out.bundle.big_k = big_k;

  int covered = 0;
  for (const auto& s : out.stability.samples) {
    if (std::exp(big_k * growth_argument(input, s.big_n)) / o2 >= s.ratio * (1.0 - 1e-12)) ++covered;
  }
  out.envelope_coverage = out.stability.samples.empty() ? 0.0 : double(covered) / out.stability.samples.size();
  return out;
}

}  // namespace ibvp
