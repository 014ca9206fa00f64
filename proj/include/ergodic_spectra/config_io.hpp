#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ergodic_spectra/dynamics.hpp"

namespace ergodic_spectra {

/// First `count` primes.
std::vector<std::uint64_t> first_primes(std::size_t count);

/// frac(sqrt(p_k)) for the first `count` primes.
std::vector<double> sqrt_prime_fractions(std::size_t count);

/// Reads a trig polynomial from a list of {frequency, re, im} records.
TrigPolynomial trig_polynomial_from_json(const nlohmann::json& records, std::size_t depth,
                                         std::size_t width);
nlohmann::json trig_polynomial_to_json(const TrigPolynomial& p);

/**
 * Parses the system config schema:
 *
 *   {"n": int, "d": int,
 *    "alpha": [..] | {"sqrt_primes": true},
 *    "xi":    [[matrix, ...], ...],      one list of j-1 matrices per j = 2..d
 *    "eta":   [[trigpoly, ...], ...],    one list of n polynomials per j = 2..d
 *    "flow":  {"powers_of": y} | [..]}
 *
 * "alpha" defaults to sqrt_primes, "xi" to identity blocks on the diagonal
 * (zero elsewhere), "eta" to zero and "flow" to powers of pi/4.
 * Throws ConfigError on malformed input; does not validate the dynamics.
 */
SystemConfig config_from_json(const nlohmann::json& doc);
SystemConfig load_config(const std::filesystem::path& path);

/// Canonical JSON form (explicit alpha and flow vectors).
nlohmann::json config_to_json(const SystemConfig& cfg);

/// 64-bit FNV-1a of the canonical JSON dump, as 16 hex digits.
std::string config_digest(const SystemConfig& cfg);
std::string fnv1a_hex(const std::string& bytes);

namespace presets {

/// n = 1, d = 2, alpha = frac(sqrt 2), xi = identity, eta = 0, v = (sqrt 2).
SystemConfig anzai();
/// anzai() with eta_1 = 0.1 cos(2 pi x_{1,1}).
SystemConfig anzai_perturbed();

}  // namespace presets

}  // namespace ergodic_spectra
