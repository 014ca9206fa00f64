#pragma once

#include <cstddef>
#include <vector>

#include "ergodic_spectra/diagnostics.hpp"
#include "ergodic_spectra/torus.hpp"
#include "ergodic_spectra/trig_polynomial.hpp"

namespace ergodic_spectra {

/**
 * Velocity of the one-parameter subgroup t -> y_t = t*v (mod 1) on T^n.
 *
 * No entry may be zero. Rational independence of the entries is the intended
 * contract but cannot be checked in floating point; `audit_flow` only flags
 * entries that are visibly rational.
 */
class FlowDirection {
 public:
  explicit FlowDirection(std::vector<double> velocity);

  std::size_t width() const { return velocity_.size(); }
  const std::vector<double>& velocity() const { return velocity_; }

  /// <m, v> for a single frequency block.
  double pairing(std::span<const std::int64_t> block) const;

 private:
  std::vector<double> velocity_;
};

/// v_k = y^k, k = 1..n. Throws ConfigError for y in {0, 1, -1}.
FlowDirection subgroup_direction(double y, std::size_t width);

/// Warnings for integer or visibly rational velocity entries.
Diagnostics audit_flow(const FlowDirection& v);

/// Adds t*v (mod 1) to block `factor` (1-based), leaving the others unchanged.
TorusPoint flow_apply(const TorusPoint& x, double t, const FlowDirection& v, std::size_t factor);

/// (V_t P)(x) = P(F_t x): coefficient(m) *= exp(2 pi i t <m_factor, v>).
TrigPolynomial translation_apply(const TrigPolynomial& p, double t, const FlowDirection& v,
                                 std::size_t factor);

/// H P = lim i t^-1 (V_t - 1) P: coefficient(m) *= -2 pi <m_factor, v>.
TrigPolynomial generator_apply(const TrigPolynomial& p, const FlowDirection& v, std::size_t factor);

}  // namespace ergodic_spectra
