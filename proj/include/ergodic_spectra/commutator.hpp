#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ergodic_spectra/dynamics.hpp"

namespace ergodic_spectra {

/**
 * The commutator field g_{j,chi} = [H_{j-1}, chi o phi_{j-1}] (conj(chi) o phi_{j-1}),
 * a real function on (T^n)^{j-1}:
 *
 *   g = i xi^(chi) + 2 pi i sum_k chi_k (H eta_{j-1,k})
 *
 * where i xi^(chi) = -2 pi <M_{j,j-1}^T chi, v> is stored as `constant` and
 * the mean-zero remainder as `oscillatory`.
 */
struct CommutatorField {
  std::size_t j = 2;
  FrequencyVector chi{1, 1};
  double constant = 0.0;
  TrigPolynomial oscillatory{1, 1};

  double evaluate(std::span<const double> coords) const;
  double evaluate(const TorusPoint& x) const { return evaluate(x.coords()); }
  /// constant + oscillatory as one polynomial on (T^n)^{j-1}.
  TrigPolynomial as_polynomial() const;
};

/// xi^(chi) = 2 pi i <M_{j,j-1}^T chi, v>. Throws for trivial chi or |value| <= 1e-9.
Complex xi_chi(const FurstenbergSystem& system, std::size_t j, const FrequencyVector& chi);

/// Assembled exactly in coefficient space. Throws ConfigError for trivial chi.
CommutatorField g_function(const FurstenbergSystem& system, std::size_t j, const FrequencyVector& chi);

/// (1/N) sum_{l<N} g(T_{j-1}^l x); reads the first j-1 blocks of x.
double g_birkhoff_eval(const FurstenbergSystem& system, std::size_t j, const FrequencyVector& chi,
                       std::size_t count, const TorusPoint& x);

struct FieldAverageRow {
  std::size_t count = 0;
  double min_abs = 0.0;        // min over samples of |g^(N)|
  std::size_t argmin = 0;      // sample index attaining min_abs
  double max_deviation = 0.0;  // max over samples of |g^(N) - i xi^(chi)|
};

/// One orbit pass per sample, recording every checkpoint (ascending, >= 1).
std::vector<FieldAverageRow> g_birkhoff_profile(const FurstenbergSystem& system, std::size_t j,
                                                const FrequencyVector& chi,
                                                const std::vector<std::size_t>& checkpoints,
                                                const std::vector<TorusPoint>& samples,
                                                std::size_t threads = 1);

struct MourreBound {
  double a = 0.0;
  TorusPoint witness{1, 1};
};

/// min over samples of |g^(N)| and the minimizing point. a > 0 certifies the
/// sampled strict Mourre estimate at level N.
MourreBound mourre_bound(const FurstenbergSystem& system, std::size_t j, const FrequencyVector& chi,
                         std::size_t count, const std::vector<TorusPoint>& samples, std::size_t threads = 1);

/// Unshifted rank-1 lattice of 4096*(j-1) points plus 1024 points of the
/// T_{j-1}-orbit of the origin.
std::vector<TorusPoint> default_mourre_samples(const FurstenbergSystem& system, std::size_t j);

struct AdaptiveMourre {
  /// Smallest power of ten with max deviation <= 0.5 |i xi^(chi)|, if any.
  std::optional<std::size_t> n_star;
  std::vector<FieldAverageRow> rows;  // N = 10^0 .. 10^max_exponent
  double limit = 0.0;                 // i xi^(chi) as a real number
  MourreBound bound;                  // at n_star (or the last row when none)
};

AdaptiveMourre adaptive_mourre(const FurstenbergSystem& system, std::size_t j, const FrequencyVector& chi,
                               const std::vector<TorusPoint>& samples, std::size_t max_exponent = 5,
                               std::size_t threads = 1);

struct CommutatorCheck {
  std::vector<double> t;
  /// max_x |i t^-1 (chi(phi(F_t x)) conj(chi(phi(x))) - 1) - g(x)| |f(T x)|
  std::vector<double> residual;
  /// Same, with central differences Richardson-extrapolated to t = 0.
  double extrapolated_residual = 0.0;
};

/// Finite-difference check of [H_{j-1}, U_{j,chi}] = g_{j,chi} U_{j,chi}.
/// `t_schedule` must be strictly decreasing within (0, 0.1].
CommutatorCheck verify_commutator(const FurstenbergSystem& system, std::size_t j, const FrequencyVector& chi,
                                  const TrigPolynomial& f, const std::vector<TorusPoint>& points,
                                  const std::vector<double>& t_schedule);

struct DiniProfile {
  std::vector<double> t;
  std::vector<double> modulus;  // sampled sup |(H eta_k) o F_t - H eta_k|
  double integral = 0.0;        // estimate of int_0^{t_max} modulus(t) dt / t
  double lipschitz = 0.0;       // sum_m |coeff(H eta_k)(m)| 2 pi |<m_{j-1}, v>|
};

/// `t_grid` ascending within (0, 1]; `sample_count` lattice points on (T^n)^{j-1}.
DiniProfile dini_profile(const FurstenbergSystem& system, std::size_t j, std::size_t k,
                         const std::vector<double>& t_grid, std::size_t sample_count = 4096,
                         std::size_t threads = 1);

/// `count` log-spaced values from lo to hi inclusive.
std::vector<double> log_spaced(double lo, double hi, std::size_t count);

}  // namespace ergodic_spectra
