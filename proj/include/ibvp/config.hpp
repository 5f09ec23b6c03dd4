#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ibvp/calibrate.hpp"
#include "ibvp/optimizer.hpp"

namespace ibvp {

/// Truth field: uniform blocks with listed values, or a pwc file.
struct TruthSpec {
  int cells_per_side = 1;
  std::vector<double> values;
  std::optional<std::filesystem::path> file;
};

struct VerifySettings {
  int alessandrini_trials = 50;
  int alessandrini_pairs = 5;
  int gradient_directions = 10;
  int adjoint_pairs = 20;
  std::vector<double> scaling_omega2{1e-3, 1e-2, 1e-1, 1.0};
  std::vector<int> stability_ns{1, 4, 16, 64};
  int stability_samples = 20;
};

struct ConstantsSettings {
  std::vector<double> omega2_grid{1.0, 0.5, 0.25, 0.125};
  int big_n = 4;
  std::optional<double> target_radius;
};

struct ExperimentConfig {
  int m = 33;
  double omega2 = 1.0;
  double b1 = 1.0;
  double b2 = 2.0;
  std::optional<TruthSpec> truth;
  std::optional<std::filesystem::path> data_file;
  /// Subdomain counts N_n, each a square k^2 with k dividing m - 1.
  std::vector<int> schedule;
  ConstantsBundle bundle;
  CalibrationOptions calibration;
  int max_iter = 500;
  std::optional<int> total_budget;
  EtaMode eta_mode = EtaMode::bundle;
  double eta_fixed = 0.0;
  double discrepancy_floor = 0.0;
  std::optional<double> start;
  std::uint64_t seed = 0;
  VerifySettings verify;
  ConstantsSettings constants;
  /// Directory relative paths are resolved against.
  std::filesystem::path base_dir;

  double start_value() const { return start.value_or(0.5 * (b1 + b2)); }
  Bounds bounds() const { return {b1, b2}; }
};

/// Parses the INI text; throws ConfigError with the offending key on bad
/// values. Does not run the admissibility checks (see validate).
ExperimentConfig parse_config(std::istream& is, const std::filesystem::path& base_dir = {});
/// Throws IoError if the file cannot be read.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical INI form; parse_config(write_config(c)) reproduces c.
void write_config(std::ostream& os, const ExperimentConfig& c);

/// Spectrum guard (AdmissibilityError), schedule shape (UsageError if empty,
/// ConfigError otherwise) and phi monotonicity.
void validate(const ExperimentConfig& c, bool need_schedule = true);

/// Nested uniform partitions for the schedule.
std::vector<PartitionPtr> build_schedule(const ExperimentConfig& c, const GridPtr& grid);

PwcField build_truth(const ExperimentConfig& c, const GridPtr& grid);

}  // namespace ibvp
