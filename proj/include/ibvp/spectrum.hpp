#pragma once

#include <vector>

namespace ibvp {

/// Frequency window certifying that omega^2 avoids every band
/// [lambda_n / B2, lambda_n / B1] that can hold a Dirichlet eigenvalue of
/// -Laplace - omega^2 c^-2 for coefficients B1 <= c^-2 <= B2.
struct SpectrumWindow {
  enum class Kind { low, band };

  Kind kind = Kind::low;
  /// Open interval containing omega^2: (0, lambda_1/B2) for the low window,
  /// (lambda_n/B1, lambda_{n+1}/B2) for a band window.
  double lower = 0.0;
  double upper = 0.0;
  /// n for band windows (1-based), 0 for the low window.
  int n = 0;
  /// Unit-square Dirichlet Laplacian eigenvalues consulted, ascending.
  std::vector<double> eigenvalues;
  /// Distance from omega^2 to the nearest forbidden band.
  double margin = 0.0;
};

/// Dirichlet eigenvalues pi^2 (p^2 + q^2) of -Laplace on the unit square,
/// ascending with multiplicity, covering at least [0, up_to] plus the next one.
std::vector<double> unit_square_dirichlet_eigenvalues(double up_to);

/// Throws AdmissibilityError if omega^2 lies in a forbidden band (band edges
/// included), ConfigError for omega^2 <= 0 or invalid bounds.
SpectrumWindow spectrum_guard(double omega2, double b1, double b2);

}  // namespace ibvp
