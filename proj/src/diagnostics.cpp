#include "ergodic_spectra/diagnostics.hpp"

#include <cmath>

namespace ergodic_spectra {

bool looks_rational(double value) {
  if (!std::isfinite(value)) return false;
  for (int q = 1; q <= 1000; ++q) {
    const double scaled = value * q;
    if (std::abs(scaled - std::round(scaled)) < 1e-9 * q) return true;
  }
  return false;
}

}  // namespace ergodic_spectra
