#pragma once

#include <string>
#include <vector>

namespace ergodic_spectra {

enum class Severity { warning, error };

struct Diagnostic {
  Severity severity;
  std::string message;
};

using Diagnostics = std::vector<Diagnostic>;

inline bool has_errors(const Diagnostics& diags) {
  for (const auto& d : diags) {
    if (d.severity == Severity::error) return true;
  }
  return false;
}

/// True when `value` is within 1e-9 of p/q for some q <= 1000.
bool looks_rational(double value);

}  // namespace ergodic_spectra
