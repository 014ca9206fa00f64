#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "ergodic_spectra/torus.hpp"

namespace ergodic_spectra {

/// Uniform double in [0, 1) from a counter-based stream keyed by (seed, stream, index).
double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

enum class SamplerKind { monte_carlo, rank1_lattice, kronecker };

SamplerKind sampler_kind_from_string(const std::string& name);
std::string to_string(SamplerKind kind);

/// Number of random shifts used by the lattice-type samplers.
inline constexpr std::size_t kRandomShifts = 8;

/**
 * Deterministic point sets on (T^width)^depth for Haar integrals.
 *
 * Lattice-type kinds split `count` into kRandomShifts groups; each group is
 * the same count/kRandomShifts-point rule under its own random shift, and
 * the spread of the group means gives the error bar. Monte Carlo uses one
 * group of `count` independent points. Identical fields reproduce the
 * identical point sequence bit-for-bit.
 */
struct Sampler {
  SamplerKind kind = SamplerKind::rank1_lattice;
  std::uint64_t seed = 0;
  std::size_t count = 1 << 16;
  std::size_t depth = 1;
  std::size_t width = 1;

  std::size_t groups() const;
  std::size_t group_size() const;
  std::size_t dims() const { return depth * width; }

  void point(std::size_t group, std::size_t index, std::span<double> out) const;
  TorusPoint point(std::size_t group, std::size_t index) const;
  /// All points, group-major.
  std::vector<TorusPoint> points() const;

  /// Integer generating vector of the rank-1 rule (group_size() points).
  std::vector<std::int64_t> lattice_generator() const;

  nlohmann::json to_json() const;
};

/// Precomputed generator and shifts of a Sampler, for hot loops.
class PointSet {
 public:
  explicit PointSet(const Sampler& sampler);
  void point(std::size_t group, std::size_t index, std::span<double> out) const;

 private:
  Sampler sampler_;
  std::vector<std::int64_t> generator_;
  std::vector<double> step_;
  std::vector<double> shifts_;
};

/// The unshifted rank-1 rule with `count` points on (T^width)^depth. Its
/// projection onto every coordinate is the full grid {k / count}.
std::vector<TorusPoint> rank1_lattice_points(std::size_t depth, std::size_t width, std::size_t count);

struct Estimate {
  Complex mean;
  double std_error;
};

struct VectorEstimate {
  std::vector<Complex> mean;
  std::vector<double> std_error;
};

/// Writes `out.size()` values for the point with flat coordinates `coords`.
using PointKernel = std::function<void(std::span<const double> coords, std::span<Complex> out)>;

/// Mean and standard error of a vector-valued integrand, reduced in a fixed
/// order so the result does not depend on `threads`.
VectorEstimate integrate_vector(const Sampler& sampler, std::size_t length, const PointKernel& kernel,
                                std::size_t threads = 1);

/// Scalar Haar integral. Throws ConfigError when count < 2.
Estimate integrate(const std::function<Complex(const TorusPoint&)>& f, const Sampler& sampler,
                   std::size_t threads = 1);

/// Absolute allowance added to "within k standard errors" comparisons; covers
/// rounding when an integrand is exactly zero and the shift spread is ~1e-17.
inline constexpr double kRoundoffAllowance = 1e-12;

inline bool within_stderr(double error, double std_error, double k = 3.0) {
  return error <= k * std_error + kRoundoffAllowance;
}

}  // namespace ergodic_spectra
