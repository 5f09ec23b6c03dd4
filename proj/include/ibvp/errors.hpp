#pragma once

#include <stdexcept>
#include <string>

namespace ibvp {

/// Invalid user configuration or violated operation precondition.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// omega^2 lies in a band that may contain a Dirichlet eigenvalue of
/// -Laplace - omega^2 c^-2 for some admissible coefficient.
class AdmissibilityError : public std::runtime_error {
 public:
  AdmissibilityError(const std::string& what, int index, double band_lo, double band_hi)
      : std::runtime_error(what), index_(index), band_lo_(band_lo), band_hi_(band_hi) {}

  int eigen_index() const { return index_; }
  double band_lower() const { return band_lo_; }
  double band_upper() const { return band_hi_; }

 private:
  int index_;
  double band_lo_;
  double band_hi_;
};

/// The discrete Helmholtz system could not be solved reliably.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double smallest_pivot)
      : std::runtime_error(what), pivot_(smallest_pivot) {}

  double smallest_pivot() const { return pivot_; }

 private:
  double pivot_;
};

/// 8 * ctilde * eta >= 1: the convergence radius is undefined at this level.
class LevelInadmissible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed invocation: unknown command, missing required setting, empty schedule.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ibvp
