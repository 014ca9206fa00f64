#include <doctest.h>

#include <cmath>
#include <random>

#include "ergodic_spectra/errors.hpp"
#include "ergodic_spectra/sampling.hpp"
#include "ergodic_spectra/torus.hpp"
#include "ergodic_spectra/trig_polynomial.hpp"
#include "test_support.hpp"

using namespace ergodic_spectra;
using namespace test_support;

TEST_CASE("wrap_unit reduces into [0, 1)") {
  CHECK(wrap_unit(1.2) == doctest::Approx(0.2));
  CHECK(wrap_unit(-0.25) == 0.75);
  CHECK(wrap_unit(3.0) == 0.0);
  // -1e-17 + 1 rounds to exactly 1.0; the post-check maps it to 0.
  CHECK(wrap_unit(-1e-17) == 0.0);
  CHECK(wrap_unit(0.0) == 0.0);
}

TEST_CASE("torus_translate") {
  SUBCASE("identity element") {
    CHECK(torus_translate(point({{0.2}}), point({{0.0}})).coords()[0] == doctest::Approx(0.2));
  }
  SUBCASE("wraps mod 1") {
    CHECK(torus_translate(point({{0.7}}), point({{0.6}})).coords()[0] == doctest::Approx(0.3));
  }
  SUBCASE("blockwise") {
    const TorusPoint sum = torus_translate(point({{0.25, 0.5}, {0.9, 0.1}}), point({{0.25, 0.5}, {0.2, 0.0}}));
    CHECK(sum(1, 0) == doctest::Approx(0.5));
    CHECK(sum(1, 1) == 0.0);
    CHECK(sum(2, 0) == doctest::Approx(0.1));
    CHECK(sum(2, 1) == doctest::Approx(0.1));
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(torus_translate(point({{0.1}}), point({{0.1, 0.2}})), DimensionError);
    CHECK_THROWS_AS(torus_translate(point({{0.1}}), point({{0.1}, {0.2}})), DimensionError);
  }
}

TEST_CASE("torus point invariants") {
  const TorusPoint p = point({{1.5, -0.25}});
  CHECK(p(1, 0) == doctest::Approx(0.5));
  CHECK(p(1, 1) == doctest::Approx(0.75));
  CHECK_THROWS_AS(TorusPoint(0, 1), DimensionError);
  CHECK_THROWS_AS(TorusPoint::from_blocks({{0.1, 0.2}, {0.3}}), DimensionError);
  CHECK_THROWS_AS(p.block(2), DimensionError);
}

TEST_CASE("char_eval") {
  CHECK(std::abs(char_eval(freq({{0}}), point({{0.37}})) - Complex(1, 0)) < 1e-15);
  CHECK(std::abs(char_eval(freq({{1}}), point({{0.25}})) - Complex(0, 1)) < 1e-15);
  CHECK(std::abs(char_eval(freq({{2, -1}}), point({{0.5, 0.5}})) - Complex(-1, 0)) < 1e-15);
  CHECK_THROWS_AS(char_eval(freq({{1}}), point({{0.1, 0.2}})), DimensionError);
  CHECK_THROWS_AS(char_eval(freq({{1}}), point({{0.1}, {0.2}})), DimensionError);
}

TEST_CASE("char_eval is multiplicative and unimodular") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 1 + trial % 3, n = 1 + trial % 4;
    const FrequencyVector m = random_frequency(rng, d, n, 50);
    const TorusPoint x = random_point(rng, d, n), y = random_point(rng, d, n);
    const Complex lhs = char_eval(m, torus_translate(x, y));
    CHECK(std::abs(lhs - char_eval(m, x) * char_eval(m, y)) < 1e-12);
    CHECK(std::abs(std::abs(lhs) - 1.0) < 1e-15);
  }
}

TEST_CASE("trig_algebra examples") {
  const FrequencyVector e1 = freq({{1, 0}});
  const FrequencyVector e2 = freq({{0, 2}});
  const TrigPolynomial p = TrigPolynomial::character(e1, Complex(0.5, 1.0));

  SUBCASE("additive identity") {
    CHECK(trig_algebra(p, TrigPolynomial(1, 2), AlgebraOp::add) == p);
  }
  SUBCASE("characters multiply") {
    const TrigPolynomial q = TrigPolynomial::character(e2, Complex(2.0, 0.0));
    const TrigPolynomial prod = trig_algebra(p, q, AlgebraOp::mul);
    CHECK(prod.size() == 1);
    CHECK(std::abs(prod.coefficient(e1 + e2) - Complex(1.0, 2.0)) < 1e-15);
  }
  SUBCASE("real cosine is a conjugation fixed point") {
    const TrigPolynomial c = TrigPolynomial::cosine(e1, 0.1);
    CHECK(trig_algebra(c, c, AlgebraOp::conj) == c);
    CHECK(c.is_real_valued());
  }
  SUBCASE("scale and cancellation prune") {
    const TrigPolynomial zero = p + trig_algebra(p, p, AlgebraOp::scale, -1.0);
    CHECK(zero.is_zero());
  }
  SUBCASE("depth mismatch") {
    CHECK_THROWS_AS(p + TrigPolynomial(2, 2), DimensionError);
    CHECK_THROWS_AS(p * TrigPolynomial(1, 3), DimensionError);
  }
}

TEST_CASE("coefficients below the prune threshold are dropped") {
  const FrequencyVector m = freq({{1}});
  const TrigPolynomial p(1, 1, {{m, 1e-16}, {-m, 1.0}});
  CHECK(p.size() == 1);
  CHECK(p.coefficient(m) == Complex{});
}

TEST_CASE("trig_eval examples") {
  const TrigPolynomial c = TrigPolynomial::constant(1, 1, Complex(2.5, -1.0));
  CHECK(std::abs(trig_eval(c, point({{0.77}})) - Complex(2.5, -1.0)) < 1e-15);
  const TrigPolynomial cos1 = TrigPolynomial::cosine(freq({{1}}), 1.0);
  CHECK(std::abs(trig_eval(cos1, point({{0.0}})) - 1.0) < 1e-15);
  CHECK(std::abs(trig_eval(cos1, point({{0.25}}))) < 1e-15);
  CHECK_THROWS_AS(trig_eval(cos1, point({{0.1}, {0.2}})), DimensionError);
}

TEST_CASE("trig_integral examples") {
  CHECK(trig_integral(TrigPolynomial::constant(1, 2, 3.0)) == Complex(3.0));
  CHECK(trig_integral(TrigPolynomial::character(freq({{0, 1}}))) == Complex{});
  const TrigPolynomial p = TrigPolynomial::constant(1, 1, 3.0) + TrigPolynomial::cosine(freq({{1}}), 1.0);
  CHECK(trig_integral(p) == Complex(3.0));
}

TEST_CASE("product evaluates to the pointwise product") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const TrigPolynomial p = random_polynomial(rng, 2, 2, 6);
    const TrigPolynomial q = random_polynomial(rng, 2, 2, 6);
    const TrigPolynomial pq = p * q;
    for (int i = 0; i < 100; ++i) {
      const TorusPoint x = random_point(rng, 2, 2);
      const Complex expected = trig_eval(p, x) * trig_eval(q, x);
      CHECK(std::abs(trig_eval(pq, x) - expected) <= 1e-10 * std::max(1.0, std::abs(expected)));
    }
  }
}

TEST_CASE("real-valued polynomials evaluate to reals") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const TrigPolynomial p = random_polynomial(rng, 2, 1, 8, true);
    REQUIRE(p.is_real_valued());
    for (int i = 0; i < 50; ++i) CHECK(std::abs(trig_eval(p, random_point(rng, 2, 1)).imag()) <= 1e-12);
  }
}

TEST_CASE("trig_integral agrees with quasi-Monte Carlo integration") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const TrigPolynomial p =
        random_polynomial(rng, 2, 1, 20) + TrigPolynomial::constant(2, 1, Complex(0.3 * trial, -1.0));
    const Sampler sampler{SamplerKind::kronecker, static_cast<std::uint64_t>(trial), 1 << 14, 2, 1};
    const Estimate est = integrate([&](const TorusPoint& x) { return trig_eval(p, x); }, sampler);
    CHECK(within_stderr(std::abs(est.mean - trig_integral(p)), est.std_error));
  }
}

TEST_CASE("lifted polynomials evaluate identically on longer points") {
  std::mt19937_64 rng(3);
  const TrigPolynomial p = random_polynomial(rng, 1, 2, 5);
  const TrigPolynomial lifted = p.lifted(3);
  for (int i = 0; i < 20; ++i) {
    const TorusPoint x = random_point(rng, 3, 2);
    CHECK(std::abs(trig_eval(lifted, x) - p.evaluate_prefix(x)) < 1e-13);
  }
}
