#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ergodic_spectra/config_io.hpp"
#include "ergodic_spectra/dynamics.hpp"
#include "ergodic_spectra/errors.hpp"
#include "ergodic_spectra/sampling.hpp"
#include "test_support.hpp"

using namespace ergodic_spectra;
using namespace test_support;

namespace {

bool mentions(const Diagnostics& diags, const std::string& text) {
  for (const auto& d : diags) {
    if (d.severity == Severity::error && d.message.find(text) != std::string::npos) return true;
  }
  return false;
}

SystemConfig skew3() { return load_config(CONFIG_DIR "/skew3_n2.json"); }

}  // namespace

TEST_CASE("IntMatrix determinant") {
  CHECK(IntMatrix::identity(3).determinant() == 1);
  CHECK(IntMatrix::from_rows({{2, 0}, {0, 3}}).determinant() == 6);
  CHECK(IntMatrix::from_rows({{0, 1}, {1, 0}}).determinant() == -1);
  CHECK(IntMatrix::from_rows({{1, 2}, {2, 4}}).determinant() == 0);
  CHECK(IntMatrix::from_rows({{2, -1, 0}, {-1, 2, -1}, {0, -1, 2}}).determinant() == 4);
  CHECK(IntMatrix::from_rows({{1, 1}, {0, 1}}).transpose_apply(std::vector<std::int64_t>{2, 3}) ==
        std::vector<std::int64_t>{2, 5});
}

TEST_CASE("validate_config") {
  SUBCASE("default Anzai config is accepted") {
    CHECK_FALSE(has_errors(validate_config(presets::anzai())));
    CHECK_FALSE(has_errors(validate_config(presets::anzai_perturbed())));
    CHECK_FALSE(has_errors(validate_config(skew3())));
  }
  SUBCASE("zero homomorphism") {
    SystemConfig cfg = presets::anzai();
    cfg.xi = {{IntMatrix::from_rows({{0}})}};
    CHECK(mentions(validate_config(cfg), "homomorphism condition violated"));
    CHECK_THROWS_AS(FurstenbergSystem{cfg}, ConfigError);
  }
  SUBCASE("singular last block in higher dimension") {
    SystemConfig cfg = skew3();
    cfg.xi[1][1] = IntMatrix::from_rows({{1, 2}, {2, 4}});
    CHECK(mentions(validate_config(cfg), "homomorphism condition violated"));
  }
  SUBCASE("non-Hermitian perturbation") {
    SystemConfig cfg = presets::anzai();
    cfg.eta = {{TrigPolynomial::character(freq({{1}}))}};
    CHECK(mentions(validate_config(cfg), "perturbation not real-valued"));
  }
  SUBCASE("shape errors") {
    SystemConfig cfg = presets::anzai();
    cfg.alpha = {0.1, 0.2};
    CHECK(has_errors(validate_config(cfg)));
    cfg = presets::anzai();
    cfg.eta = {{TrigPolynomial(2, 1)}};
    CHECK(has_errors(validate_config(cfg)));
  }
  SUBCASE("rational alpha is a warning only") {
    SystemConfig cfg = presets::anzai();
    cfg.alpha = {0.5};
    const auto diags = validate_config(cfg);
    CHECK_FALSE(has_errors(diags));
    CHECK(diags.size() == 1);
  }
}

TEST_CASE("phi_eval") {
  SUBCASE("identity homomorphism") {
    const FurstenbergSystem sys(presets::anzai());
    CHECK(sys.phi_eval(2, point({{0.3}, {0.9}}))[0] == doctest::Approx(0.3));
  }
  SUBCASE("cosine perturbation at 0") {
    const FurstenbergSystem sys(presets::anzai_perturbed());
    CHECK(sys.phi_eval(2, point({{0.0}}))[0] == doctest::Approx(0.1).epsilon(1e-14));
  }
  SUBCASE("doubling homomorphism wraps") {
    SystemConfig cfg = presets::anzai();
    cfg.xi = {{IntMatrix::from_rows({{2}})}};
    const FurstenbergSystem sys(cfg);
    CHECK(sys.phi_eval(2, point({{0.6}}))[0] == doctest::Approx(0.2));
  }
  SUBCASE("j out of range") {
    const FurstenbergSystem sys(presets::anzai());
    CHECK_THROWS_AS(sys.phi_eval(3, point({{0.1}, {0.2}})), DimensionError);
    CHECK_THROWS_AS(sys.phi_eval(1, point({{0.1}, {0.2}})), DimensionError);
  }
}

TEST_CASE("apply_T examples") {
  const FurstenbergSystem anzai(presets::anzai());
  const TorusPoint y = anzai.apply(point({{0.2}, {0.7}}));
  CHECK(y(1, 0) == doctest::Approx(0.6142135624).epsilon(1e-10));
  CHECK(y(2, 0) == doctest::Approx(0.9));

  const FurstenbergSystem perturbed(presets::anzai_perturbed());
  const TorusPoint z = perturbed.apply(point({{0.0}, {0.0}}));
  CHECK(z(1, 0) == doctest::Approx(0.4142135624).epsilon(1e-10));
  CHECK(z(2, 0) == doctest::Approx(0.1).epsilon(1e-14));
}

TEST_CASE("inverse round trip") {
  std::mt19937_64 rng(41);
  for (const SystemConfig& cfg : {presets::anzai(), presets::anzai_perturbed(), skew3()}) {
    const FurstenbergSystem sys(cfg);
    for (int i = 0; i < 100; ++i) {
      const TorusPoint x = random_point(rng, sys.depth(), sys.width());
      CHECK(torus_distance(sys.apply_inverse(sys.apply(x)), x) <= 1e-12);
      CHECK(torus_distance(sys.apply(sys.apply_inverse(x)), x) <= 1e-12);
    }
  }
}

TEST_CASE("orbit") {
  const FurstenbergSystem sys(presets::anzai_perturbed());
  const TorusPoint x0 = point({{0.1}, {0.2}});
  auto count = [](const Orbit& o) {
    std::size_t n = 0;
    for (auto it = o.begin(); it != o.end(); ++it) ++n;
    return n;
  };
  CHECK(count(sys.orbit(x0, 0)) == 0);
  CHECK(count(sys.orbit(x0, 1)) == 1);
  CHECK(*sys.orbit(x0, 1).begin() == x0);

  TorusPoint iterated = x0;
  std::size_t step = 0;
  for (const TorusPoint& p : sys.orbit(x0, 50)) {
    CHECK(torus_distance(p, iterated) == 0.0);
    iterated = sys.apply(iterated);
    ++step;
  }
  CHECK(step == 50);

  TorusPoint back = x0;
  for (const TorusPoint& p : sys.orbit(x0, 20, Direction::backward)) {
    CHECK(torus_distance(p, back) == 0.0);
    back = sys.apply_inverse(back);
  }
}

TEST_CASE("cocycle_eval") {
  const FurstenbergSystem sys(presets::anzai_perturbed());
  const FrequencyVector chi = freq({{1}});
  const TorusPoint x = point({{0.3}});
  CHECK(sys.cocycle_eval(2, chi, x, 0) == Complex(1.0));
  CHECK(std::abs(sys.cocycle_eval(2, chi, x, 1) - char_eval(chi, point({sys.phi_eval(2, x)}))) < 1e-15);
  CHECK_THROWS_AS(sys.cocycle_eval(2, freq({{0}}), x, 3), ConfigError);

  SUBCASE("cocycle identity from two product orders") {
    std::mt19937_64 rng(43);
    const FurstenbergSystem s3(skew3());
    for (int i = 0; i < 50; ++i) {
      const std::size_t n = 1 + rng() % 300, m = 1 + rng() % 300;
      const FrequencyVector c = random_frequency(rng, 1, 2);
      if (c.is_zero()) continue;
      const TorusPoint y = random_point(rng, 2, 2);
      TorusPoint shifted = y;
      for (std::size_t s = 0; s < n; ++s) shifted = s3.apply(shifted);
      const Complex lhs = s3.cocycle_eval(3, c, y, n + m);
      const Complex rhs = s3.cocycle_eval(3, c, y, n) * s3.cocycle_eval(3, c, shifted, m);
      CHECK(std::abs(lhs - rhs) <= 1e-10);
    }
  }
  SUBCASE("unimodular up to 10^4 steps") {
    for (std::size_t n : {1023u, 1024u, 1025u, 5000u, 10000u}) {
      CHECK(std::abs(std::abs(sys.cocycle_eval(2, freq({{3}}), x, n)) - 1.0) <= 1e-10);
    }
  }
}

TEST_CASE("flow commutes with the map on the preceding factors") {
  const FurstenbergSystem sys(skew3());
  const FlowDirection& v = sys.config().flow;
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t depth = 1 + i % 3;
    const TorusPoint x = random_point(rng, depth, 2);
    const double t = u(rng);
    worst = std::max(worst, torus_distance(sys.apply(flow_apply(x, t, v, depth)),
                                           flow_apply(sys.apply(x), t, v, depth)));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("measure preservation and unitarity of the Koopman action") {
  std::mt19937_64 rng(53);
  const FurstenbergSystem sys(skew3());
  const Sampler sampler{SamplerKind::rank1_lattice, 9, 1 << 14, 3, 2};
  for (int trial = 0; trial < 10; ++trial) {
    const TrigPolynomial f = random_polynomial(rng, 3, 2, 6) + TrigPolynomial::constant(3, 2, 1.0);
    const Estimate pushed = integrate([&](const TorusPoint& x) { return trig_eval(f, sys.apply(x)); }, sampler);
    const Estimate plain = integrate([&](const TorusPoint& x) { return trig_eval(f, x); }, sampler);
    const double se = std::hypot(pushed.std_error, plain.std_error);
    CHECK(within_stderr(std::abs(pushed.mean - plain.mean), se));
    CHECK(within_stderr(std::abs(pushed.mean - trig_integral(f)), pushed.std_error));
  }
  for (int trial = 0; trial < 5; ++trial) {
    const TrigPolynomial f = random_polynomial(rng, 3, 2, 5), g = random_polynomial(rng, 3, 2, 5);
    Complex exact{};
    for (const auto& [m, c] : f.terms()) exact += std::conj(c) * g.coefficient(m);
    const Estimate est = integrate(
        [&](const TorusPoint& x) {
          const TorusPoint y = sys.apply(x);
          return std::conj(trig_eval(f, y)) * trig_eval(g, y);
        },
        sampler);
    CHECK(within_stderr(std::abs(est.mean - exact), est.std_error));
  }
}

TEST_CASE("config JSON round trip and digest sensitivity") {
  const SystemConfig cfg = skew3();
  const SystemConfig again = config_from_json(config_to_json(cfg));
  CHECK(config_digest(again) == config_digest(cfg));

  std::vector<std::string> digests{config_digest(cfg)};
  SystemConfig a = cfg;
  a.alpha[0] += 1e-12;
  digests.push_back(config_digest(a));
  a = cfg;
  a.xi[0][0] = IntMatrix::from_rows({{2, 0}, {0, 5}});
  digests.push_back(config_digest(a));
  a = cfg;
  a.eta[0][0] = a.eta[0][0].scaled(1.0000001);
  digests.push_back(config_digest(a));
  a = cfg;
  a.flow = FlowDirection({0.7, 0.3});
  digests.push_back(config_digest(a));
  digests.push_back(config_digest(presets::anzai()));
  digests.push_back(config_digest(presets::anzai_perturbed()));
  std::sort(digests.begin(), digests.end());
  CHECK(std::adjacent_find(digests.begin(), digests.end()) == digests.end());
}

TEST_CASE("config parsing defaults and errors") {
  const SystemConfig cfg = config_from_json(nlohmann::json{{"n", 2}, {"d", 3}});
  CHECK(cfg.alpha == sqrt_prime_fractions(2));
  CHECK(cfg.xi[1][0] == IntMatrix(2));
  CHECK(cfg.xi[1][1] == IntMatrix::identity(2));
  CHECK(cfg.is_affine());
  CHECK(cfg.flow.velocity()[1] == doctest::Approx(std::pow(std::numbers::pi / 4, 2)));
  CHECK_FALSE(has_errors(validate_config(cfg)));

  CHECK_THROWS_AS(config_from_json(nlohmann::json{{"n", 1}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json{{"n", 1}, {"d", 2}, {"xi", {{{{1.5}}}}}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json{{"n", 1}, {"d", 2}, {"flow", {{"powers_of", 1.0}}}}), ConfigError);
  CHECK_THROWS_AS(load_config(CONFIG_DIR "/does_not_exist.json"), ConfigError);
}
