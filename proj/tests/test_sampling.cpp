#include <doctest.h>

#include <cmath>
#include <numeric>

#include "ergodic_spectra/errors.hpp"
#include "ergodic_spectra/parallel.hpp"
#include "ergodic_spectra/sampling.hpp"
#include "test_support.hpp"

using namespace ergodic_spectra;
using namespace test_support;

namespace {

Complex bumpy(const TorusPoint& x) {
  double v = 1.0;
  for (double c : x.coords()) v *= 1.0 + 0.5 * std::cos(kTwoPi * c) + 0.25 * std::sin(2 * kTwoPi * c);
  return v;
}

}  // namespace

TEST_CASE("counter_uniform") {
  CHECK(counter_uniform(1, 2, 3) == counter_uniform(1, 2, 3));
  CHECK(counter_uniform(1, 2, 3) != counter_uniform(1, 2, 4));
  CHECK(counter_uniform(1, 2, 3) != counter_uniform(1, 3, 3));
  CHECK(counter_uniform(1, 2, 3) != counter_uniform(2, 2, 3));
  double sum = 0.0;
  for (std::uint64_t i = 0; i < 100000; ++i) {
    const double u = counter_uniform(7, 0, i);
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(1e-2));
}

TEST_CASE("sampler kinds and determinism") {
  for (SamplerKind kind : {SamplerKind::monte_carlo, SamplerKind::rank1_lattice, SamplerKind::kronecker}) {
    CHECK(sampler_kind_from_string(to_string(kind)) == kind);
    const Sampler s{kind, 11, 1024, 2, 2};
    const auto a = s.points(), b = s.points();
    REQUIRE(a.size() == 1024);
    CHECK(a == b);
    const Sampler other{kind, 12, 1024, 2, 2};
    CHECK(other.points() != a);
    const PointSet set(s);
    std::vector<double> buf(4);
    set.point(s.groups() - 1, 5, buf);
    CHECK(std::equal(buf.begin(), buf.end(), a[(s.groups() - 1) * s.group_size() + 5].coords().begin()));
  }
  CHECK_THROWS_AS(sampler_kind_from_string("sobol"), ConfigError);
  CHECK(Sampler{SamplerKind::rank1_lattice, 0, 1 << 16, 1, 1}.group_size() == (1 << 13));
  CHECK(Sampler{SamplerKind::monte_carlo, 0, 1000, 1, 1}.groups() == 1);
}

TEST_CASE("rank1 lattice generator and unshifted points") {
  const Sampler s{SamplerKind::rank1_lattice, 0, 1 << 16, 2, 2};
  const auto z = s.lattice_generator();
  REQUIRE(z.size() == 4);
  for (auto zi : z) CHECK(std::gcd(zi, static_cast<std::int64_t>(s.group_size())) == 1);

  const auto pts = rank1_lattice_points(1, 2, 64);
  REQUIRE(pts.size() == 64);
  for (std::size_t k = 0; k < 2; ++k) {
    std::vector<double> proj;
    for (const auto& p : pts) proj.push_back(p(1, k));
    std::sort(proj.begin(), proj.end());
    for (std::size_t i = 0; i < proj.size(); ++i) CHECK(proj[i] == doctest::Approx(i / 64.0));
  }
}

TEST_CASE("integrate examples") {
  for (SamplerKind kind : {SamplerKind::monte_carlo, SamplerKind::rank1_lattice, SamplerKind::kronecker}) {
    const Sampler s{kind, 3, 4096, 2, 1};
    const Estimate c = integrate([](const TorusPoint&) { return Complex(2.5, -1.0); }, s);
    CHECK(std::abs(c.mean - Complex(2.5, -1.0)) <= 1e-14);
    CHECK(c.std_error <= 1e-14);
  }
  const Sampler lattice{SamplerKind::rank1_lattice, 5, 1 << 16, 2, 2};
  for (const auto& m : {freq({{1, 0}, {0, 0}}), freq({{0, 2}, {-1, 3}}), freq({{0, 0}, {0, 1}})}) {
    const Estimate e = integrate([&](const TorusPoint& x) { return char_eval(m, x); }, lattice);
    CHECK(std::abs(e.mean) <= 1e-3);
  }
  CHECK_THROWS_AS(integrate(bumpy, Sampler{SamplerKind::monte_carlo, 0, 1, 1, 1}), ConfigError);
  CHECK_THROWS_AS(integrate(bumpy, Sampler{SamplerKind::rank1_lattice, 0, 8, 1, 1}), ConfigError);
}

TEST_CASE("monte carlo stderr scales as count^-1/2") {
  std::vector<double> se;
  for (std::size_t count : {1000u, 10000u, 100000u}) {
    se.push_back(integrate(bumpy, Sampler{SamplerKind::monte_carlo, 17, count, 1, 2}).std_error);
  }
  for (std::size_t i = 1; i < se.size(); ++i) {
    const double ratio = se[i - 1] / se[i];
    CHECK(ratio >= std::sqrt(10.0) / 2);
    CHECK(ratio <= std::sqrt(10.0) * 2);
  }
  // The exact integral is 1; every kind should land within its error bar.
  for (SamplerKind kind : {SamplerKind::monte_carlo, SamplerKind::rank1_lattice, SamplerKind::kronecker}) {
    const Estimate e = integrate(bumpy, Sampler{kind, 23, 1 << 14, 1, 2});
    CHECK(within_stderr(std::abs(e.mean - 1.0), e.std_error, 4.0));
  }
}

TEST_CASE("vector integration is independent of the thread count") {
  const Sampler s{SamplerKind::rank1_lattice, 29, 1 << 14, 2, 1};
  const PointKernel kernel = [](std::span<const double> x, std::span<Complex> out) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::polar(1.0 + x[1], kTwoPi * (i + 1) * x[0]);
  };
  const VectorEstimate one = integrate_vector(s, 5, kernel, 1);
  for (std::size_t threads : {2u, 3u, 8u}) {
    const VectorEstimate many = integrate_vector(s, 5, kernel, threads);
    CHECK(many.mean == one.mean);
    CHECK(many.std_error == one.std_error);
  }
}

TEST_CASE("parallel helpers") {
  std::vector<double> v(1000);
  std::iota(v.begin(), v.end(), 1.0);
  CHECK(pairwise_sum(std::span<const double>(v)) == 500500.0);
  std::vector<int> hits(100, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) { if (i == 7) throw ConfigError("boom"); }), ConfigError);
  CHECK(resolve_threads(3) >= 1);
}
