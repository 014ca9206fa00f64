#include "ergodic_spectra/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "ergodic_spectra/config_io.hpp"
#include "ergodic_spectra/errors.hpp"
#include "ergodic_spectra/parallel.hpp"

namespace ergodic_spectra {

namespace {

void check_observable(const FurstenbergSystem& system, const TrigPolynomial& f) {
  if (f.width() != system.width() || f.depth() > system.depth()) {
    throw DimensionError("observable does not live on the system's torus");
  }
}

}  // namespace

std::vector<Complex> birkhoff_partial(const FurstenbergSystem& system, const TrigPolynomial& f,
                                      const TorusPoint& x0, const std::vector<std::size_t>& checkpoints) {
  check_observable(system, f);
  if (!std::is_sorted(checkpoints.begin(), checkpoints.end())) {
    throw ConfigError("birkhoff checkpoints must be ascending");
  }
  if (x0.depth() < f.depth() || x0.width() != f.width()) throw DimensionError("start point too small");
  std::vector<Complex> out;
  out.reserve(checkpoints.size());
  std::vector<double> coords(x0.coords().begin(), x0.coords().end());
  Complex sum{};
  std::size_t steps = 0;
  for (std::size_t target : checkpoints) {
    while (steps < target) {
      sum += f.evaluate_coords(coords);
      system.advance(coords, x0.depth());
      ++steps;
    }
    out.push_back(target == 0 ? Complex{} : sum / static_cast<double>(target));
  }
  return out;
}

double ergodicity_gap(const FurstenbergSystem& system, const TrigPolynomial& f,
                      const std::vector<TorusPoint>& starts, std::size_t count, std::size_t threads) {
  if (starts.empty()) throw ConfigError("ergodicity_gap needs at least one start");
  const Complex mean = trig_integral(f);
  std::vector<double> gaps(starts.size());
  parallel_for(starts.size(), threads, [&](std::size_t i) {
    gaps[i] = std::abs(birkhoff_partial(system, f, starts[i], {count}).front() - mean);
  });
  return *std::max_element(gaps.begin(), gaps.end());
}

TrigPolynomial mixing_vector(TrigPolynomial p) {
  for (const auto& [m, c] : p.terms()) {
    bool outside_first = false;
    for (std::size_t f = 2; f <= m.depth() && !outside_first; ++f) {
      for (auto e : m.block(f)) {
        if (e != 0) {
          outside_first = true;
          break;
        }
      }
    }
    if (!outside_first) throw ConfigError("vector has a component in H_1 (frequency supported on factor 1)");
  }
  return p;
}

CorrelationSeries correlation_series(const FurstenbergSystem& system, const TrigPolynomial& phi,
                                     const TrigPolynomial& psi, std::size_t max_lag,
                                     const Sampler& sampler, std::size_t threads, Direction direction) {
  check_observable(system, phi);
  check_observable(system, psi);
  if (sampler.width != system.width() || sampler.depth < std::max(phi.depth(), psi.depth()) ||
      sampler.depth > system.depth()) {
    throw DimensionError("sampler dimensions do not cover the observables");
  }
  const std::size_t depth = sampler.depth;
  const std::size_t length = max_lag + 1;
  auto kernel = [&](std::span<const double> coords, std::span<Complex> out) {
    std::vector<double> state(coords.begin(), coords.end());
    const Complex weight = std::conj(phi.evaluate_coords(coords));
    for (std::size_t lag = 0; lag < length; ++lag) {
      out[lag] = weight * psi.evaluate_coords(state);
      if (lag + 1 < length) {
        if (direction == Direction::forward) {
          system.advance(state, depth);
        } else {
          system.retreat(state, depth);
        }
      }
    }
  };
  VectorEstimate est = integrate_vector(sampler, length, kernel, threads);
  CorrelationSeries series{std::move(est.mean), std::move(est.std_error), {}};
  series.meta = {{"config_digest", config_digest(system.config())},
                 {"phi", trig_polynomial_to_json(phi)},
                 {"psi", trig_polynomial_to_json(psi)},
                 {"direction", direction == Direction::forward ? "forward" : "backward"},
                 {"sampler", sampler.to_json()}};
  return series;
}

PushedCharacter push_character(const FurstenbergSystem& system, const FrequencyVector& m, std::size_t count) {
  const SystemConfig& cfg = system.config();
  if (!cfg.is_affine()) throw ConfigError("oracle valid only for affine systems");
  if (m.width() != cfg.width || m.depth() > cfg.depth) throw DimensionError("character does not fit the system");
  const std::size_t depth = m.depth();
  const std::size_t n = cfg.width;
  std::vector<std::int64_t> freq(m.entries().begin(), m.entries().end());
  long double phase = 0.0L;
  for (std::size_t step = 0; step < count; ++step) {
    for (std::size_t k = 0; k < n; ++k) {
      const long double term = static_cast<long double>(freq[k]) * cfg.alpha[k];
      phase += term - std::floor(term);
    }
    phase -= std::floor(phase);
    // (A^T m)_i = m_i + sum_{j>i} M_{j,i}^T m_j, reading only pre-step values.
    std::vector<std::int64_t> next = freq;
    for (std::size_t i = 1; i <= depth; ++i) {
      for (std::size_t j = i + 1; j <= depth; ++j) {
        std::span<const std::int64_t> mj(freq.data() + (j - 1) * n, n);
        const auto pulled = cfg.homomorphism(j, i).transpose_apply(mj);
        for (std::size_t k = 0; k < n; ++k) next[(i - 1) * n + k] += pulled[k];
      }
    }
    freq = std::move(next);
  }
  return {FrequencyVector(depth, n, std::move(freq)), static_cast<double>(phase)};
}

Complex affine_oracle_correlation(const FurstenbergSystem& system, const TrigPolynomial& phi,
                                  const TrigPolynomial& psi, std::size_t count) {
  if (!system.config().is_affine()) throw ConfigError("oracle valid only for affine systems");
  if (phi.size() != 1 || psi.size() != 1) throw ConfigError("oracle needs single-character vectors");
  const std::size_t depth = std::max(phi.depth(), psi.depth());
  const TrigPolynomial phi_full = phi.lifted(depth), psi_full = psi.lifted(depth);
  const auto& [p, a] = *phi_full.terms().begin();
  const auto& [q, b] = *psi_full.terms().begin();
  const PushedCharacter pushed = push_character(system, q, count);
  if (pushed.frequency != p) return Complex{};
  return std::conj(a) * b * std::polar(1.0, kTwoPi * pushed.phase);
}

double wiener_statistic(const CorrelationSeries& series, std::size_t max_lag) {
  if (max_lag == 0) throw ConfigError("wiener_statistic needs M >= 1");
  if (max_lag > series.max_lag()) throw ConfigError("wiener_statistic: M exceeds the series length");
  double sum = 0.0;
  for (std::size_t lag = 1; lag <= max_lag; ++lag) sum += std::norm(series.values[lag]);
  return sum / static_cast<double>(max_lag);
}

SpectralDensityEstimate spectral_density(const CorrelationSeries& series, std::size_t grid_size,
                                         std::size_t bandwidth) {
  if (grid_size < 8) throw ConfigError("spectral_density needs grid_size >= 8");
  if (series.values.empty()) throw ConfigError("spectral_density needs a nonempty series");
  if (bandwidth == 0) bandwidth = std::max<std::size_t>(1, series.max_lag() / 2);
  if (bandwidth > series.max_lag() + 1) throw ConfigError("bandwidth exceeds the series length");

  SpectralDensityEstimate est;
  est.bandwidth = bandwidth;
  const double norm = 1.0 / kTwoPi;
  const auto m = static_cast<double>(bandwidth);

  double var = std::pow(series.std_error[0], 2);
  for (std::size_t lag = 1; lag < bandwidth; ++lag) {
    const double w = 1.0 - static_cast<double>(lag) / m;
    var += std::pow(2.0 * w * series.std_error[lag], 2);
  }
  est.propagated_std_error = norm * std::sqrt(var);

  est.grid.resize(grid_size);
  est.density.resize(grid_size);
  for (std::size_t i = 0; i < grid_size; ++i) {
    const double theta = kTwoPi * static_cast<double>(i) / static_cast<double>(grid_size);
    double value = series.values[0].real();
    for (std::size_t lag = 1; lag < bandwidth; ++lag) {
      const double w = 1.0 - static_cast<double>(lag) / m;
      // c_N e^{-iN theta} + conj(c_N) e^{iN theta} = 2 Re(c_N e^{-iN theta})
      value += 2.0 * w * (series.values[lag] * std::polar(1.0, -static_cast<double>(lag) * theta)).real();
    }
    est.grid[i] = theta;
    est.density[i] = norm * value;
  }

  double mean = 0.0;
  for (double d : est.density) mean += d;
  mean /= static_cast<double>(grid_size);
  est.integral = kTwoPi * mean;
  const double uniform = norm * series.values[0].real();
  for (double d : est.density) {
    est.flatness = std::max(est.flatness, std::abs(d - mean));
    est.deviation_from_uniform = std::max(est.deviation_from_uniform, std::abs(d - uniform));
  }
  est.atom_score = series.max_lag() >= 1 ? wiener_statistic(series, std::min(bandwidth, series.max_lag())) : 0.0;
  return est;
}

}  // namespace ergodic_spectra
