#pragma once

#include <complex>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ergodic_spectra {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Fractional part in [0, 1). A result that rounds to exactly 1.0 is mapped to 0.0.
double wrap_unit(double value);

/**
 * A point of (T^n)^d: `depth` blocks (torus factors) of `width` coordinates each.
 *
 * Factors are numbered 1..depth in the public API. Coordinates are stored
 * flat, block-major, and always reduced to [0, 1).
 */
class TorusPoint {
 public:
  TorusPoint(std::size_t depth, std::size_t width);
  TorusPoint(std::size_t depth, std::size_t width, std::vector<double> coords);

  static TorusPoint from_blocks(const std::vector<std::vector<double>>& blocks);

  std::size_t depth() const { return depth_; }
  std::size_t width() const { return width_; }

  /// Coordinates of factor `factor` (1-based).
  std::span<const double> block(std::size_t factor) const;
  std::span<const double> coords() const { return coords_; }
  double operator()(std::size_t factor, std::size_t k) const;

  /// The projection onto the first `depth` factors.
  TorusPoint prefix(std::size_t depth) const;

  bool operator==(const TorusPoint&) const = default;

 private:
  std::size_t depth_;
  std::size_t width_;
  std::vector<double> coords_;
};

/// Group operation on (T^n)^d.
TorusPoint torus_translate(const TorusPoint& p, const TorusPoint& q);

/// An element of the dual group of (T^n)^d: `depth` blocks of `width` integers.
class FrequencyVector {
 public:
  FrequencyVector(std::size_t depth, std::size_t width);
  FrequencyVector(std::size_t depth, std::size_t width, std::vector<std::int64_t> entries);

  static FrequencyVector from_blocks(const std::vector<std::vector<std::int64_t>>& blocks);

  std::size_t depth() const { return depth_; }
  std::size_t width() const { return width_; }
  std::span<const std::int64_t> block(std::size_t factor) const;
  std::span<const std::int64_t> entries() const { return entries_; }

  bool is_zero() const;

  FrequencyVector operator-() const;
  FrequencyVector operator+(const FrequencyVector& other) const;

  /// Extends with zero blocks up to `depth` factors.
  FrequencyVector padded(std::size_t depth) const;

  bool operator==(const FrequencyVector&) const = default;
  std::strong_ordering operator<=>(const FrequencyVector& other) const;

 private:
  std::size_t depth_;
  std::size_t width_;
  std::vector<std::int64_t> entries_;
};

/// exp(2 pi i <m, x>). Requires identical depth and width.
Complex char_eval(const FrequencyVector& m, const TorusPoint& x);

/// <m, x> reduced mod 1, reading only the first m.depth() blocks of `coords`.
double char_phase(std::span<const std::int64_t> m, std::span<const double> coords);

}  // namespace ergodic_spectra
