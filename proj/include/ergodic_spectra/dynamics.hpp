#pragma once

#include <cstddef>
#include <cstdint>
#include <iterator>
#include <span>
#include <vector>

#include "ergodic_spectra/diagnostics.hpp"
#include "ergodic_spectra/flow.hpp"
#include "ergodic_spectra/torus.hpp"
#include "ergodic_spectra/trig_polynomial.hpp"

namespace ergodic_spectra {

/// Square integer matrix, row-major. Acts on T^n as a continuous endomorphism.
class IntMatrix {
 public:
  explicit IntMatrix(std::size_t n);
  IntMatrix(std::size_t n, std::vector<std::int64_t> entries);

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(const std::vector<std::vector<std::int64_t>>& rows);

  std::size_t size() const { return n_; }
  std::int64_t at(std::size_t row, std::size_t col) const { return entries_[row * n_ + col]; }

  /// Exact determinant (fraction-free elimination).
  std::int64_t determinant() const;
  /// M^T m for an integer frequency block.
  std::vector<std::int64_t> transpose_apply(std::span<const std::int64_t> m) const;

  bool operator==(const IntMatrix&) const = default;

 private:
  std::size_t n_;
  std::vector<std::int64_t> entries_;
};

/**
 * Full description of a Furstenberg transformation on (T^n)^d:
 *
 *   T(x_1, ..., x_d) = (x_1 + alpha, x_2 + phi_1(x_1), ..., x_d + phi_{d-1}(x_1..x_{d-1}))
 *   phi_{j-1}(x_1..x_{j-1}) = sum_i M_{j,i} x_i + eta_{j-1}(x_1..x_{j-1})   (mod 1)
 *
 * `xi[j-2][i-1]` holds M_{j,i} and `eta[j-2][k-1]` the k-th component of the
 * real lift of eta_{j-1}, a polynomial on the first j-1 factors.
 */
struct SystemConfig {
  std::size_t width = 1;
  std::size_t depth = 2;
  std::vector<double> alpha;
  std::vector<std::vector<IntMatrix>> xi;
  std::vector<std::vector<TrigPolynomial>> eta;
  FlowDirection flow{std::vector<double>{0.78539816339744831}};

  const IntMatrix& homomorphism(std::size_t j, std::size_t i) const;
  const TrigPolynomial& perturbation(std::size_t j, std::size_t k) const;
  /// True when every perturbation is zero.
  bool is_affine() const;
};

/// Errors for singular M_{j,j-1}, non-Hermitian perturbations and shape
/// mismatches; warnings for visibly rational alpha or flow entries.
Diagnostics validate_config(const SystemConfig& cfg);

enum class Direction { forward, backward };

class FurstenbergSystem;

/// Lazy orbit x0, T x0, ..., T^{N-1} x0 (or with T^-1). O(1) memory in N.
class Orbit {
 public:
  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = TorusPoint;
    using difference_type = std::ptrdiff_t;

    iterator() = default;
    TorusPoint operator*() const;
    iterator& operator++();
    void operator++(int) { ++*this; }
    bool operator==(std::default_sentinel_t) const { return remaining_ == 0; }

   private:
    friend class Orbit;
    const FurstenbergSystem* system_ = nullptr;
    std::size_t depth_ = 0;
    Direction direction_ = Direction::forward;
    std::vector<double> coords_;
    std::size_t remaining_ = 0;
  };

  Orbit(const FurstenbergSystem& system, TorusPoint x0, std::size_t count, Direction direction);

  iterator begin() const;
  std::default_sentinel_t end() const { return {}; }

 private:
  const FurstenbergSystem* system_;
  TorusPoint x0_;
  std::size_t count_;
  Direction direction_;
};

/// Renormalization period for running cocycle products.
inline constexpr std::size_t kCocycleRenormPeriod = 1024;

/**
 * A validated Furstenberg transformation. Points of any depth 1..d are
 * accepted; a point with j blocks is advanced by T_j, the restriction of T_d
 * to the first j factors.
 */
class FurstenbergSystem {
 public:
  /// Throws ConfigError listing every error diagnostic.
  explicit FurstenbergSystem(SystemConfig cfg);

  const SystemConfig& config() const { return cfg_; }
  const Diagnostics& warnings() const { return warnings_; }
  std::size_t depth() const { return cfg_.depth; }
  std::size_t width() const { return cfg_.width; }

  /// phi_{j-1}(x_1..x_{j-1}) reduced mod 1; reads the first j-1 blocks of x.
  std::vector<double> phi_eval(std::size_t j, const TorusPoint& x) const;

  TorusPoint apply(const TorusPoint& x) const;
  TorusPoint apply_inverse(const TorusPoint& x) const;

  /// In-place T_depth on flat coordinates (depth*width entries).
  void advance(std::span<double> coords, std::size_t depth) const;
  void retreat(std::span<double> coords, std::size_t depth) const;

  Orbit orbit(const TorusPoint& x0, std::size_t count,
              Direction direction = Direction::forward) const;

  /// prod_{l<N} chi(phi_{j-1}(T_{j-1}^l x)) for a nontrivial single-factor chi.
  Complex cocycle_eval(std::size_t j, const FrequencyVector& chi, const TorusPoint& x,
                       std::size_t count) const;

  /// Unreduced phi_{j-1} on flat coordinates, written to `out` (width entries).
  void phi_lift(std::size_t j, std::span<const double> coords, std::span<double> out) const;

 private:
  void check_factor(std::size_t j) const;

  SystemConfig cfg_;
  Diagnostics warnings_;
};

/// exp(2 pi i <chi, phi_{j-1}(x)>) for a single-factor chi.
Complex twist_factor(const FurstenbergSystem& system, std::size_t j, const FrequencyVector& chi,
                     std::span<const double> coords);

}  // namespace ergodic_spectra
