#include "ibvp/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "ibvp/errors.hpp"
#include "ibvp/field_io.hpp"

namespace ibvp {

std::vector<double> unit_square_dirichlet_eigenvalues(double up_to) {
  constexpr double pi2 = std::numbers::pi * std::numbers::pi;
  // One full row of p beyond the cap guarantees the next eigenvalue is present.
  const int pmax = static_cast<int>(std::ceil(std::sqrt(std::max(up_to, 0.0) / pi2))) + 2;
  const double cap = pi2 * (pmax * pmax + 1);
  std::vector<double> ev;
  for (int p = 1; p <= pmax; ++p)
    for (int q = 1; q <= pmax; ++q) {
      const double l = pi2 * (p * p + q * q);
      if (l <= cap) ev.push_back(l);
    }
  std::sort(ev.begin(), ev.end());
  return ev;
}

SpectrumWindow spectrum_guard(double omega2, double b1, double b2) {
  if (!(omega2 > 0.0) || !std::isfinite(omega2)) throw ConfigError("omega^2 must be positive and finite");
  if (!(b1 > 0.0) || !(b1 <= b2) || !std::isfinite(b2)) throw ConfigError("bounds must satisfy 0 < B1 <= B2 < inf");

  SpectrumWindow w;
  w.eigenvalues = unit_square_dirichlet_eigenvalues(omega2 * b2);
  const auto& ev = w.eigenvalues;

  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < ev.size(); ++k) {
    const double lo = ev[k] / b2;
    const double hi = ev[k] / b1;
    if (omega2 >= lo && omega2 <= hi) {
      std::ostringstream msg;
      msg << "omega^2 = " << format_number(omega2) << " lies in forbidden band n=" << k + 1 << " ["
          << format_number(lo) << ", " << format_number(hi) << "] (lambda_n = " << format_number(ev[k])
          << ", B1 = " << format_number(b1) << ", B2 = " << format_number(b2) << ")";
      throw AdmissibilityError(msg.str(), static_cast<int>(k) + 1, lo, hi);
    }
    margin = std::min(margin, omega2 < lo ? lo - omega2 : omega2 - hi);
  }
  w.margin = margin;

  if (omega2 < ev.front() / b2) {
    w.kind = SpectrumWindow::Kind::low;
    w.lower = 0.0;
    w.upper = ev.front() / b2;
    return w;
  }
  // Largest n with lambda_n / B1 < omega^2; the next band starts above omega^2.
  std::size_t n = 0;
  while (n < ev.size() && ev[n] / b1 < omega2) ++n;
  w.kind = SpectrumWindow::Kind::band;
  w.n = static_cast<int>(n);
  w.lower = ev[n - 1] / b1;
  w.upper = ev[n] / b2;
  return w;
}

}  // namespace ibvp
