#pragma once

#include <cstddef>
#include <vector>

#include <json.hpp>

#include "ergodic_spectra/dynamics.hpp"
#include "ergodic_spectra/sampling.hpp"

namespace ergodic_spectra {

/// (1/N) sum_{l<N} f(T^l x0) at each checkpoint N, in one orbit pass.
std::vector<Complex> birkhoff_partial(const FurstenbergSystem& system, const TrigPolynomial& f,
                                      const TorusPoint& x0, const std::vector<std::size_t>& checkpoints);

/// max over starts of |A_N f(x0) - integral(f)|.
double ergodicity_gap(const FurstenbergSystem& system, const TrigPolynomial& f,
                      const std::vector<TorusPoint>& starts, std::size_t count, std::size_t threads = 1);

/// Rejects polynomials with a frequency supported on factor 1 only (i.e. a
/// component in H_1); returns the input otherwise.
TrigPolynomial mixing_vector(TrigPolynomial p);

/// c_N = <phi, W^N psi> for N = 0..Nmax, with per-entry standard errors.
struct CorrelationSeries {
  std::vector<Complex> values;
  std::vector<double> std_error;
  nlohmann::json meta;

  std::size_t max_lag() const { return values.empty() ? 0 : values.size() - 1; }
};

/// Quadrature estimate of conj(phi(x)) psi(T^N x); `direction` backward uses T^-N.
CorrelationSeries correlation_series(const FurstenbergSystem& system, const TrigPolynomial& phi,
                                     const TrigPolynomial& psi, std::size_t max_lag,
                                     const Sampler& sampler, std::size_t threads = 1,
                                     Direction direction = Direction::forward);

/// Frequency and phase of W^N e_m = exp(2 pi i phase) e_{m'} for an affine system.
struct PushedCharacter {
  FrequencyVector frequency;
  double phase;
};

/// Pushes a character through T^N symbolically (T acts on characters by an
/// integer affine map when every perturbation is zero).
PushedCharacter push_character(const FurstenbergSystem& system, const FrequencyVector& m, std::size_t count);

/// Exact <phi, W^N psi> for single-term phi, psi on an affine system.
Complex affine_oracle_correlation(const FurstenbergSystem& system, const TrigPolynomial& phi,
                                  const TrigPolynomial& psi, std::size_t count);

/// (1/M) sum_{N=1}^{M} |c_N|^2; zero in the limit iff the spectral measure has no atoms.
double wiener_statistic(const CorrelationSeries& series, std::size_t max_lag);

struct SpectralDensityEstimate {
  std::vector<double> grid;
  std::vector<double> density;
  std::size_t bandwidth = 0;
  /// max |density - mean density|
  double flatness = 0.0;
  /// max |density - c_0/(2 pi)|; c_0 = 1 for normalized vectors
  double deviation_from_uniform = 0.0;
  double atom_score = 0.0;
  double propagated_std_error = 0.0;
  /// (2 pi / G) sum density, compared against c_0
  double integral = 0.0;
};

/**
 * Fejer-smoothed spectral density
 *
 *   rho(theta) = (1/2pi) sum_{|N|<M} (1 - |N|/M) c_N exp(-i N theta),  c_{-N} = conj(c_N)
 *
 * on `grid_size` equispaced angles. `bandwidth` 0 selects max_lag/2.
 */
SpectralDensityEstimate spectral_density(const CorrelationSeries& series, std::size_t grid_size,
                                         std::size_t bandwidth = 0);

}  // namespace ergodic_spectra
