#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "ibvp/config.hpp"

namespace ibvp {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int verification_failure = 1;
inline constexpr int admissibility = 2;
inline constexpr int io = 3;
inline constexpr int usage = 64;
}  // namespace exit_code

struct RunOptions {
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed;
  bool override_level_check = false;
};

/// Writes dtn.txt, wplus.txt, wminus.txt, truth.pwc and config.ini.
int cmd_forward(const ExperimentConfig& c, const RunOptions& opt, std::ostream& log);
/// Writes level_<n>.csv, final.pwc, report.txt, metadata.txt and config.ini.
int cmd_reconstruct(const ExperimentConfig& c, const RunOptions& opt, std::ostream& log);
/// Runs the oracle suite; writes verify_report.txt, gradient.csv and
/// stability.csv. Returns 1 if any oracle fails.
int cmd_verify(const ExperimentConfig& c, const RunOptions& opt, std::ostream& log);
/// Writes levels.csv, transitions.csv, rho.csv, n_max.txt (and sweep.csv).
/// Returns 1 if rho is not strictly increasing as omega^2 decreases.
int cmd_constants(const ExperimentConfig& c, const RunOptions& opt, std::ostream& log);
/// Writes calibrated.ini and calibration.csv.
int cmd_calibrate(const ExperimentConfig& c, const RunOptions& opt, std::ostream& log);

/// Loads the config, applies the seed override, validates and dispatches.
/// Exceptions become exit codes; messages go to err.
int run_command(const std::string& command, const std::filesystem::path& config_path, const RunOptions& opt,
                std::ostream& log, std::ostream& err);

}  // namespace ibvp
