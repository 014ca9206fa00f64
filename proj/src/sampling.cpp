#include "ergodic_spectra/sampling.hpp"

#include <cmath>
#include <numeric>

#include "ergodic_spectra/config_io.hpp"
#include "ergodic_spectra/errors.hpp"
#include "ergodic_spectra/parallel.hpp"

namespace ergodic_spectra {

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Shift streams sit far above any point index.
constexpr std::uint64_t kShiftStreamBase = 0x5eed000000000000ULL;
constexpr std::size_t kChunk = 256;

}  // namespace

double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::uint64_t h = mix64(seed + 0x9e3779b97f4a7c15ULL);
  h = mix64(h ^ (stream + 0x632be59bd9b4e019ULL));
  h = mix64(h ^ (index + 0x85ebca6b2b2ae35dULL));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

SamplerKind sampler_kind_from_string(const std::string& name) {
  if (name == "monte_carlo") return SamplerKind::monte_carlo;
  if (name == "rank1_lattice") return SamplerKind::rank1_lattice;
  if (name == "kronecker") return SamplerKind::kronecker;
  throw ConfigError("unknown sampler kind '" + name + "'");
}

std::string to_string(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::monte_carlo: return "monte_carlo";
    case SamplerKind::rank1_lattice: return "rank1_lattice";
    case SamplerKind::kronecker: return "kronecker";
  }
  return "unknown";
}

std::size_t Sampler::groups() const {
  return kind == SamplerKind::monte_carlo ? 1 : kRandomShifts;
}

std::size_t Sampler::group_size() const { return count / groups(); }

std::vector<std::int64_t> Sampler::lattice_generator() const {
  const auto points = static_cast<std::int64_t>(group_size());
  std::vector<std::int64_t> z;
  for (double g : sqrt_prime_fractions(dims())) {
    auto zi = static_cast<std::int64_t>(std::llround(g * static_cast<double>(points)));
    if (zi < 1) zi = 1;
    while (std::gcd(zi, points) != 1) ++zi;
    z.push_back(zi % points);
  }
  return z;
}

PointSet::PointSet(const Sampler& sampler) : sampler_(sampler) {
  const std::size_t dims = sampler.dims();
  if (sampler.kind == SamplerKind::rank1_lattice) {
    generator_ = sampler.lattice_generator();
  } else if (sampler.kind == SamplerKind::kronecker) {
    step_ = sqrt_prime_fractions(dims);
  }
  if (sampler.kind != SamplerKind::monte_carlo) {
    for (std::size_t g = 0; g < sampler.groups(); ++g) {
      for (std::size_t c = 0; c < dims; ++c) {
        shifts_.push_back(counter_uniform(sampler.seed, kShiftStreamBase + g, c));
      }
    }
  }
}

void PointSet::point(std::size_t group, std::size_t index, std::span<double> out) const {
  const std::size_t dims = sampler_.dims();
  switch (sampler_.kind) {
    case SamplerKind::monte_carlo:
      for (std::size_t c = 0; c < dims; ++c) out[c] = counter_uniform(sampler_.seed, index, c);
      return;
    case SamplerKind::rank1_lattice: {
      const auto points = static_cast<std::int64_t>(sampler_.group_size());
      for (std::size_t c = 0; c < dims; ++c) {
        const std::int64_t k = (static_cast<std::int64_t>(index) * generator_[c]) % points;
        out[c] = wrap_unit(static_cast<double>(k) / static_cast<double>(points) +
                           shifts_[group * dims + c]);
      }
      return;
    }
    case SamplerKind::kronecker:
      for (std::size_t c = 0; c < dims; ++c) {
        const long double prod = static_cast<long double>(index) * step_[c];
        out[c] = wrap_unit(static_cast<double>(prod - std::floor(prod)) + shifts_[group * dims + c]);
      }
      return;
  }
}

void Sampler::point(std::size_t group, std::size_t index, std::span<double> out) const {
  PointSet(*this).point(group, index, out);
}

TorusPoint Sampler::point(std::size_t group, std::size_t index) const {
  std::vector<double> coords(dims());
  point(group, index, coords);
  return TorusPoint(depth, width, std::move(coords));
}

std::vector<TorusPoint> Sampler::points() const {
  const PointSet set(*this);
  std::vector<TorusPoint> out;
  out.reserve(groups() * group_size());
  std::vector<double> coords(dims());
  for (std::size_t g = 0; g < groups(); ++g) {
    for (std::size_t i = 0; i < group_size(); ++i) {
      set.point(g, i, coords);
      out.emplace_back(depth, width, coords);
    }
  }
  return out;
}

std::vector<TorusPoint> rank1_lattice_points(std::size_t depth, std::size_t width, std::size_t count) {
  Sampler sampler{SamplerKind::rank1_lattice, 0, count * kRandomShifts, depth, width};
  const auto z = sampler.lattice_generator();
  const auto points = static_cast<std::int64_t>(count);
  std::vector<TorusPoint> out;
  out.reserve(count);
  std::vector<double> coords(depth * width);
  for (std::int64_t i = 0; i < points; ++i) {
    for (std::size_t c = 0; c < coords.size(); ++c) {
      coords[c] = static_cast<double>((i * z[c]) % points) / static_cast<double>(points);
    }
    out.emplace_back(depth, width, coords);
  }
  return out;
}

nlohmann::json Sampler::to_json() const {
  return {{"kind", to_string(kind)}, {"seed", seed},   {"count", count},
          {"depth", depth},          {"width", width}, {"shifts", groups()}};
}

VectorEstimate integrate_vector(const Sampler& sampler, std::size_t length, const PointKernel& kernel,
                                std::size_t threads) {
  if (sampler.count < 2) throw ConfigError("integration needs at least 2 sample points");
  if (sampler.group_size() < 2) {
    throw ConfigError("lattice samplers need at least 2 points per shift (count >= 16)");
  }
  const std::size_t groups = sampler.groups();
  const std::size_t per_group = sampler.group_size();
  const std::size_t chunks = (per_group + kChunk - 1) / kChunk;
  const std::size_t items = groups * chunks;

  const PointSet set(sampler);
  std::vector<Complex> sums(items * length);
  std::vector<double> squares(items * length);
  parallel_for(items, threads, [&](std::size_t item) {
    const std::size_t g = item / chunks;
    const std::size_t begin = (item % chunks) * kChunk;
    const std::size_t end = std::min(begin + kChunk, per_group);
    std::vector<double> coords(sampler.dims());
    std::vector<Complex> values(length);
    Complex* sum = sums.data() + item * length;
    double* sq = squares.data() + item * length;
    for (std::size_t i = begin; i < end; ++i) {
      set.point(g, i, coords);
      kernel(coords, values);
      for (std::size_t l = 0; l < length; ++l) {
        sum[l] += values[l];
        sq[l] += std::norm(values[l]);
      }
    }
  });

  VectorEstimate est{std::vector<Complex>(length), std::vector<double>(length)};
  std::vector<Complex> group_means(groups);
  std::vector<Complex> column(chunks);
  std::vector<double> sq_column(chunks);
  for (std::size_t l = 0; l < length; ++l) {
    double total_sq = 0.0;
    for (std::size_t g = 0; g < groups; ++g) {
      for (std::size_t c = 0; c < chunks; ++c) {
        column[c] = sums[(g * chunks + c) * length + l];
        sq_column[c] = squares[(g * chunks + c) * length + l];
      }
      group_means[g] = pairwise_sum<Complex>(column) / static_cast<double>(per_group);
      total_sq += pairwise_sum<double>(sq_column);
    }
    const Complex mean = pairwise_sum<Complex>(group_means) / static_cast<double>(groups);
    double variance_of_mean = 0.0;
    if (groups == 1) {
      const auto n = static_cast<double>(per_group);
      const double var = std::max(0.0, (total_sq - n * std::norm(mean)) / (n - 1));
      variance_of_mean = var / n;
    } else {
      double spread = 0.0;
      for (const auto& gm : group_means) spread += std::norm(gm - mean);
      variance_of_mean = spread / static_cast<double>(groups * (groups - 1));
    }
    est.mean[l] = mean;
    est.std_error[l] = std::sqrt(variance_of_mean);
  }
  return est;
}

Estimate integrate(const std::function<Complex(const TorusPoint&)>& f, const Sampler& sampler,
                   std::size_t threads) {
  auto est = integrate_vector(
      sampler, 1,
      [&](std::span<const double> coords, std::span<Complex> out) {
        out[0] = f(TorusPoint(sampler.depth, sampler.width, std::vector<double>(coords.begin(), coords.end())));
      },
      threads);
  return {est.mean[0], est.std_error[0]};
}

}  // namespace ergodic_spectra
