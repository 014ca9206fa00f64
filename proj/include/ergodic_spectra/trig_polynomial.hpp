#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "ergodic_spectra/torus.hpp"

namespace ergodic_spectra {

/// Coefficients with magnitude below this are dropped after every operation.
inline constexpr double kPruneThreshold = 1e-15;

/**
 * A trigonometric polynomial on (T^n)^depth, stored as a finite map from
 * frequency to complex coefficient. Zero coefficients are never stored.
 *
 * These are the smooth cylinder functions used for every observable, test
 * vector and perturbation in the library; generators and commutator fields
 * act on them exactly in coefficient space.
 */
class TrigPolynomial {
 public:
  using Terms = std::map<FrequencyVector, Complex>;

  TrigPolynomial(std::size_t depth, std::size_t width);
  TrigPolynomial(std::size_t depth, std::size_t width, Terms terms);

  static TrigPolynomial constant(std::size_t depth, std::size_t width, Complex value);
  static TrigPolynomial character(const FrequencyVector& m, Complex coefficient = 1.0);
  /// amplitude * cos(2 pi <m, x>), i.e. amplitude/2 at +m and -m.
  static TrigPolynomial cosine(const FrequencyVector& m, double amplitude);
  /// amplitude * sin(2 pi <m, x>).
  static TrigPolynomial sine(const FrequencyVector& m, double amplitude);

  std::size_t depth() const { return depth_; }
  std::size_t width() const { return width_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  Complex coefficient(const FrequencyVector& m) const;

  /// True when coefficient(-m) == conj(coefficient(m)) for every m, within `tol`.
  bool is_real_valued(double tol = 1e-14) const;

  TrigPolynomial operator+(const TrigPolynomial& other) const;
  TrigPolynomial operator-(const TrigPolynomial& other) const;
  TrigPolynomial operator*(const TrigPolynomial& other) const;
  TrigPolynomial scaled(Complex factor) const;
  /// Pointwise complex conjugate: coefficient(m) -> conj(coefficient(-m)).
  TrigPolynomial conj() const;

  /// The same function viewed on (T^n)^depth with depth >= this->depth().
  TrigPolynomial lifted(std::size_t depth) const;

  /// Coefficientwise multiplication by multiplier(m); results are pruned.
  template <typename Fn>
  TrigPolynomial map_coefficients(Fn&& multiplier) const {
    Terms out;
    for (const auto& [m, c] : terms_) {
      const Complex value = c * multiplier(m);
      if (std::abs(value) >= kPruneThreshold) out.emplace_hint(out.end(), m, value);
    }
    return TrigPolynomial(depth_, width_, std::move(out));
  }

  /// Evaluates at the first depth() blocks of `x` (x.depth() >= depth()).
  Complex evaluate_prefix(const TorusPoint& x) const;
  /// Same, on flat block-major coordinates; no shape checks beyond size.
  Complex evaluate_coords(std::span<const double> coords) const;

  bool operator==(const TrigPolynomial&) const = default;

 private:
  void check_compatible(const TrigPolynomial& other) const;

  std::size_t depth_;
  std::size_t width_;
  Terms terms_;
};

enum class AlgebraOp { add, mul, conj, scale };

/// Dispatches the algebra operations by tag; `q` is ignored for conj/scale.
TrigPolynomial trig_algebra(const TrigPolynomial& p, const TrigPolynomial& q, AlgebraOp op,
                            Complex scale = 1.0);

/// Sum of coefficient(m) * char_eval(m, x). Dimensions must match exactly.
Complex trig_eval(const TrigPolynomial& p, const TorusPoint& x);

/// Haar integral: the zero-frequency coefficient.
Complex trig_integral(const TrigPolynomial& p);

/// Sum of |coefficient|; bounds the sup norm.
double coefficient_l1(const TrigPolynomial& p);

}  // namespace ergodic_spectra
