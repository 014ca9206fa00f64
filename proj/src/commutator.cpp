#include "ergodic_spectra/commutator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ergodic_spectra/errors.hpp"
#include "ergodic_spectra/flow.hpp"
#include "ergodic_spectra/parallel.hpp"
#include "ergodic_spectra/sampling.hpp"

namespace ergodic_spectra {

namespace {

void check_character(const FurstenbergSystem& system, std::size_t j, const FrequencyVector& chi) {
  if (j < 2 || j > system.depth()) throw DimensionError("factor index j=" + std::to_string(j) + " out of range");
  if (chi.depth() != 1 || chi.width() != system.width()) {
    throw DimensionError("chi must be a single-factor frequency of width n");
  }
  if (chi.is_zero()) throw ConfigError("chi must be a nontrivial character");
}

/// <M_{j,j-1}^T chi, v>
double flow_pairing(const FurstenbergSystem& system, std::size_t j, const FrequencyVector& chi) {
  const auto pulled = system.config().homomorphism(j, j - 1).transpose_apply(chi.entries());
  return system.config().flow.pairing(pulled);
}

std::vector<double> prefix_coords(const TorusPoint& x, std::size_t depth, std::size_t width) {
  if (x.width() != width || x.depth() < depth) throw DimensionError("point does not cover the first j-1 factors");
  return {x.coords().begin(), x.coords().begin() + depth * width};
}

}  // namespace

double CommutatorField::evaluate(std::span<const double> coords) const {
  return constant + oscillatory.evaluate_coords(coords).real();
}

TrigPolynomial CommutatorField::as_polynomial() const {
  return oscillatory + TrigPolynomial::constant(oscillatory.depth(), oscillatory.width(), constant);
}

Complex xi_chi(const FurstenbergSystem& system, std::size_t j, const FrequencyVector& chi) {
  check_character(system, j, chi);
  const Complex value(0.0, kTwoPi * flow_pairing(system, j, chi));
  if (std::abs(value) <= 1e-9) throw NumericalContractError("degenerate character/flow pairing");
  return value;
}

CommutatorField g_function(const FurstenbergSystem& system, std::size_t j, const FrequencyVector& chi) {
  check_character(system, j, chi);
  const SystemConfig& cfg = system.config();
  const std::size_t depth = j - 1;
  TrigPolynomial oscillatory(depth, cfg.width);
  for (std::size_t k = 1; k <= cfg.width; ++k) {
    const std::int64_t nk = chi.entries()[k - 1];
    if (nk == 0) continue;
    const TrigPolynomial h_eta = generator_apply(cfg.perturbation(j, k), cfg.flow, depth);
    oscillatory = oscillatory + h_eta.scaled(Complex(0.0, kTwoPi * static_cast<double>(nk)));
  }
  if (!oscillatory.is_real_valued(1e-12)) {
    throw NumericalContractError("commutator field is not real-valued");
  }
  return {j, chi, -kTwoPi * flow_pairing(system, j, chi), std::move(oscillatory)};
}

double g_birkhoff_eval(const FurstenbergSystem& system, std::size_t j, const FrequencyVector& chi,
                       std::size_t count, const TorusPoint& x) {
  if (count == 0) throw ConfigError("Birkhoff average needs N >= 1");
  const CommutatorField g = g_function(system, j, chi);
  std::vector<double> coords = prefix_coords(x, j - 1, system.width());
  double sum = 0.0;
  for (std::size_t step = 0; step < count; ++step) {
    sum += g.evaluate(coords);
    system.advance(coords, j - 1);
  }
  return sum / static_cast<double>(count);
}

std::vector<FieldAverageRow> g_birkhoff_profile(const FurstenbergSystem& system, std::size_t j,
                                                const FrequencyVector& chi,
                                                const std::vector<std::size_t>& checkpoints,
                                                const std::vector<TorusPoint>& samples, std::size_t threads) {
  if (samples.empty()) throw ConfigError("empty sample set");
  if (checkpoints.empty() || checkpoints.front() == 0 ||
      !std::is_sorted(checkpoints.begin(), checkpoints.end())) {
    throw ConfigError("checkpoints must be ascending and >= 1");
  }
  const CommutatorField g = g_function(system, j, chi);
  const std::size_t rows = checkpoints.size();
  std::vector<double> averages(samples.size() * rows);
  parallel_for(samples.size(), threads, [&](std::size_t s) {
    std::vector<double> coords = prefix_coords(samples[s], j - 1, system.width());
    double sum = 0.0;
    std::size_t steps = 0;
    for (std::size_t r = 0; r < rows; ++r) {
      while (steps < checkpoints[r]) {
        sum += g.evaluate(coords);
        system.advance(coords, j - 1);
        ++steps;
      }
      averages[s * rows + r] = sum / static_cast<double>(steps);
    }
  });

  std::vector<FieldAverageRow> out(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    FieldAverageRow& row = out[r];
    row.count = checkpoints[r];
    row.min_abs = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < samples.size(); ++s) {
      const double avg = averages[s * rows + r];
      if (std::abs(avg) < row.min_abs) {
        row.min_abs = std::abs(avg);
        row.argmin = s;
      }
      row.max_deviation = std::max(row.max_deviation, std::abs(avg - g.constant));
    }
  }
  return out;
}

MourreBound mourre_bound(const FurstenbergSystem& system, std::size_t j, const FrequencyVector& chi,
                         std::size_t count, const std::vector<TorusPoint>& samples, std::size_t threads) {
  if (samples.empty()) throw ConfigError("mourre_bound needs a nonempty sample set");
  if (count == 0) throw ConfigError("mourre_bound needs N >= 1");
  const auto rows = g_birkhoff_profile(system, j, chi, {count}, samples, threads);
  return {rows.front().min_abs, samples[rows.front().argmin].prefix(j - 1)};
}

std::vector<TorusPoint> default_mourre_samples(const FurstenbergSystem& system, std::size_t j) {
  if (j < 2 || j > system.depth()) throw DimensionError("factor index out of range");
  const std::size_t depth = j - 1;
  std::vector<TorusPoint> samples = rank1_lattice_points(depth, system.width(), 4096 * depth);
  for (const TorusPoint& p : system.orbit(TorusPoint(depth, system.width()), 1024)) samples.push_back(p);
  return samples;
}

AdaptiveMourre adaptive_mourre(const FurstenbergSystem& system, std::size_t j, const FrequencyVector& chi,
                               const std::vector<TorusPoint>& samples, std::size_t max_exponent,
                               std::size_t threads) {
  std::vector<std::size_t> checkpoints;
  for (std::size_t e = 0, n = 1; e <= max_exponent; ++e, n *= 10) checkpoints.push_back(n);
  AdaptiveMourre result;
  result.limit = g_function(system, j, chi).constant;
  result.rows = g_birkhoff_profile(system, j, chi, checkpoints, samples, threads);
  const FieldAverageRow* chosen = &result.rows.back();
  for (const auto& row : result.rows) {
    if (row.max_deviation <= 0.5 * std::abs(result.limit)) {
      result.n_star = row.count;
      chosen = &row;
      break;
    }
  }
  result.bound = {chosen->min_abs, samples[chosen->argmin].prefix(j - 1)};
  return result;
}

CommutatorCheck verify_commutator(const FurstenbergSystem& system, std::size_t j, const FrequencyVector& chi,
                                  const TrigPolynomial& f, const std::vector<TorusPoint>& points,
                                  const std::vector<double>& t_schedule) {
  if (t_schedule.empty()) throw ConfigError("t schedule must be nonempty");
  for (std::size_t i = 0; i < t_schedule.size(); ++i) {
    const double t = t_schedule[i];
    if (!(t > 0.0 && t <= 0.1)) throw ConfigError("t values must lie in (0, 0.1]");
    if (i > 0 && !(t < t_schedule[i - 1])) throw ConfigError("t schedule must be strictly decreasing");
  }
  const std::size_t depth = j - 1;
  if (f.width() != system.width() || f.depth() > depth) throw DimensionError("f must live on (T^n)^{j-1}");
  const CommutatorField g = g_function(system, j, chi);
  const FlowDirection& v = system.config().flow;
  const std::size_t steps = t_schedule.size();

  CommutatorCheck out{t_schedule, std::vector<double>(steps, 0.0), 0.0};
  const Complex i_unit(0.0, 1.0);
  std::vector<Complex> central(steps);
  for (const TorusPoint& point : points) {
    const TorusPoint x = point.prefix(depth);
    const double weight = std::abs(f.evaluate_prefix(system.apply(x)));
    if (weight == 0.0) continue;
    const Complex base_conj = std::conj(twist_factor(system, j, chi, x.coords()));
    const double gx = g.evaluate(x);
    for (std::size_t s = 0; s < steps; ++s) {
      const double t = t_schedule[s];
      const Complex ahead = twist_factor(system, j, chi, flow_apply(x, t, v, depth).coords()) * base_conj;
      const Complex behind = twist_factor(system, j, chi, flow_apply(x, -t, v, depth).coords()) * base_conj;
      const Complex forward = i_unit * (ahead - 1.0) / t;
      out.residual[s] = std::max(out.residual[s], std::abs(forward - gx) * weight);
      central[s] = i_unit * (ahead - behind) / (2.0 * t);
    }
    // Neville's scheme in h = t^2 evaluated at h = 0.
    std::vector<Complex> tableau = central;
    for (std::size_t level = 1; level < steps; ++level) {
      for (std::size_t a = 0; a + level < steps; ++a) {
        const double ha = t_schedule[a] * t_schedule[a];
        const double hb = t_schedule[a + level] * t_schedule[a + level];
        tableau[a] = (ha * tableau[a + 1] - hb * tableau[a]) / (ha - hb);
      }
    }
    out.extrapolated_residual = std::max(out.extrapolated_residual, std::abs(tableau[0] - gx) * weight);
  }
  return out;
}

std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0 && hi >= lo) || count == 0) throw ConfigError("log_spaced needs 0 < lo <= hi, count >= 1");
  if (count == 1) return {lo};
  std::vector<double> out(count);
  const double step = std::log(hi / lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = lo * std::exp(step * static_cast<double>(i));
  out.back() = hi;
  return out;
}

DiniProfile dini_profile(const FurstenbergSystem& system, std::size_t j, std::size_t k,
                         const std::vector<double>& t_grid, std::size_t sample_count, std::size_t threads) {
  if (t_grid.empty()) throw ConfigError("t grid must be nonempty");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0 && t_grid[i] <= 1.0)) throw ConfigError("t grid values must lie in (0, 1]");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1])) throw ConfigError("t grid must be ascending");
  }
  const SystemConfig& cfg = system.config();
  const std::size_t depth = j - 1;
  const TrigPolynomial h_eta = generator_apply(cfg.perturbation(j, k), cfg.flow, depth);

  DiniProfile out;
  out.t = t_grid;
  for (const auto& [m, c] : h_eta.terms()) {
    out.lipschitz += std::abs(c) * kTwoPi * std::abs(cfg.flow.pairing(m.block(depth)));
  }
  out.modulus.assign(t_grid.size(), 0.0);
  if (!h_eta.is_zero()) {
    const auto samples = rank1_lattice_points(depth, cfg.width, sample_count);
    parallel_for(t_grid.size(), threads, [&](std::size_t i) {
      const TrigPolynomial diff = translation_apply(h_eta, t_grid[i], cfg.flow, depth) - h_eta;
      double sup = 0.0;
      for (const auto& x : samples) sup = std::max(sup, std::abs(diff.evaluate_prefix(x)));
      out.modulus[i] = sup;
    });
  }
  // Tail (0, t_0]: modulus(t)/t is ~constant there, so the piece is ~modulus(t_0).
  out.integral = out.modulus.front();
  for (std::size_t i = 0; i + 1 < t_grid.size(); ++i) {
    out.integral += 0.5 * (out.modulus[i] + out.modulus[i + 1]) * std::log(t_grid[i + 1] / t_grid[i]);
  }
  return out;
}

}  // namespace ergodic_spectra
