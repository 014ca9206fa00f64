#include "ergodic_spectra/config_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "ergodic_spectra/errors.hpp"

namespace ergodic_spectra {

using nlohmann::json;

std::vector<std::uint64_t> first_primes(std::size_t count) {
  std::vector<std::uint64_t> primes;
  for (std::uint64_t candidate = 2; primes.size() < count; ++candidate) {
    bool prime = true;
    for (auto p : primes) {
      if (p * p > candidate) break;
      if (candidate % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) primes.push_back(candidate);
  }
  return primes;
}

std::vector<double> sqrt_prime_fractions(std::size_t count) {
  std::vector<double> out;
  for (auto p : first_primes(count)) out.push_back(wrap_unit(std::sqrt(static_cast<double>(p))));
  return out;
}

TrigPolynomial trig_polynomial_from_json(const json& records, std::size_t depth, std::size_t width) {
  if (!records.is_array()) throw ConfigError("trig polynomial must be a list of records");
  TrigPolynomial::Terms terms;
  for (const auto& rec : records) {
    if (!rec.is_object() || !rec.contains("frequency")) {
      throw ConfigError("trig polynomial record needs a 'frequency' field");
    }
    const auto& freq = rec.at("frequency");
    if (!freq.is_array() || freq.size() != depth) {
      throw ConfigError("frequency must be a " + std::to_string(depth) + " x n integer array");
    }
    std::vector<std::vector<std::int64_t>> blocks;
    for (const auto& row : freq) {
      if (!row.is_array() || row.size() != width) throw ConfigError("frequency block must have n entries");
      std::vector<std::int64_t> b;
      for (const auto& e : row) {
        if (!e.is_number_integer()) throw ConfigError("frequency entries must be integers");
        b.push_back(e.get<std::int64_t>());
      }
      blocks.push_back(std::move(b));
    }
    const double re = rec.value("re", 0.0);
    const double im = rec.value("im", 0.0);
    terms[FrequencyVector::from_blocks(blocks)] += Complex(re, im);
  }
  return TrigPolynomial(depth, width, std::move(terms));
}

json trig_polynomial_to_json(const TrigPolynomial& p) {
  json out = json::array();
  for (const auto& [m, c] : p.terms()) {
    json freq = json::array();
    for (std::size_t f = 1; f <= m.depth(); ++f) {
      auto b = m.block(f);
      freq.push_back(std::vector<std::int64_t>(b.begin(), b.end()));
    }
    out.push_back({{"frequency", freq}, {"re", c.real()}, {"im", c.imag()}});
  }
  return out;
}

namespace {

std::vector<double> real_vector(const json& j, std::size_t n, const char* what) {
  if (!j.is_array() || j.size() != n) {
    throw ConfigError(std::string(what) + " must be a list of " + std::to_string(n) + " numbers");
  }
  std::vector<double> out;
  for (const auto& e : j) {
    if (!e.is_number()) throw ConfigError(std::string(what) + " entries must be numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

IntMatrix matrix_from_json(const json& j, std::size_t n) {
  if (!j.is_array() || j.size() != n) throw ConfigError("xi matrices must be n x n");
  std::vector<std::vector<std::int64_t>> rows;
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != n) throw ConfigError("xi matrices must be n x n");
    std::vector<std::int64_t> r;
    for (const auto& e : row) {
      if (!e.is_number_integer()) throw ConfigError("xi matrix entries must be integers");
      r.push_back(e.get<std::int64_t>());
    }
    rows.push_back(std::move(r));
  }
  return IntMatrix::from_rows(rows);
}

}  // namespace

SystemConfig config_from_json(const json& doc) {
  try {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    SystemConfig cfg;
    cfg.width = doc.at("n").get<std::size_t>();
    cfg.depth = doc.at("d").get<std::size_t>();
    if (cfg.width < 1) throw ConfigError("n must be >= 1");
    if (cfg.depth < 2) throw ConfigError("d must be >= 2");
    const std::size_t n = cfg.width;

    const json alpha = doc.value("alpha", json{{"sqrt_primes", true}});
    if (alpha.is_object()) {
      if (!alpha.value("sqrt_primes", false)) throw ConfigError("alpha object must be {\"sqrt_primes\": true}");
      cfg.alpha = sqrt_prime_fractions(n);
    } else {
      cfg.alpha = real_vector(alpha, n, "alpha");
    }

    if (doc.contains("xi")) {
      const auto& xi = doc.at("xi");
      if (!xi.is_array() || xi.size() + 1 != cfg.depth) throw ConfigError("xi must have d-1 entries");
      for (std::size_t j = 2; j <= cfg.depth; ++j) {
        const auto& mats = xi[j - 2];
        if (!mats.is_array() || mats.size() != j - 1) {
          throw ConfigError("xi entry for j=" + std::to_string(j) + " must list j-1 matrices");
        }
        std::vector<IntMatrix> row;
        for (const auto& m : mats) row.push_back(matrix_from_json(m, n));
        cfg.xi.push_back(std::move(row));
      }
    } else {
      for (std::size_t j = 2; j <= cfg.depth; ++j) {
        std::vector<IntMatrix> row(j - 2, IntMatrix(n));
        row.push_back(IntMatrix::identity(n));
        cfg.xi.push_back(std::move(row));
      }
    }

    for (std::size_t j = 2; j <= cfg.depth; ++j) {
      std::vector<TrigPolynomial> comps(n, TrigPolynomial(j - 1, n));
      if (doc.contains("eta")) {
        const auto& eta = doc.at("eta");
        if (!eta.is_array() || eta.size() + 1 != cfg.depth) throw ConfigError("eta must have d-1 entries");
        const auto& row = eta[j - 2];
        if (!row.is_array() || row.size() != n) {
          throw ConfigError("eta entry for j=" + std::to_string(j) + " must list n polynomials");
        }
        for (std::size_t k = 0; k < n; ++k) comps[k] = trig_polynomial_from_json(row[k], j - 1, n);
      }
      cfg.eta.push_back(std::move(comps));
    }

    const json flow = doc.value("flow", json{{"powers_of", std::numbers::pi / 4}});
    if (flow.is_object()) {
      if (!flow.contains("powers_of")) throw ConfigError("flow object must be {\"powers_of\": y}");
      cfg.flow = subgroup_direction(flow.at("powers_of").get<double>(), n);
    } else {
      cfg.flow = FlowDirection(real_vector(flow, n, "flow"));
    }
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  } catch (const DimensionError& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
}

SystemConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  return config_from_json(doc);
}

json config_to_json(const SystemConfig& cfg) {
  json xi = json::array();
  for (const auto& mats : cfg.xi) {
    json row = json::array();
    for (const auto& m : mats) {
      json rows = json::array();
      for (std::size_t r = 0; r < m.size(); ++r) {
        json cols = json::array();
        for (std::size_t c = 0; c < m.size(); ++c) cols.push_back(m.at(r, c));
        rows.push_back(cols);
      }
      row.push_back(rows);
    }
    xi.push_back(row);
  }
  json eta = json::array();
  for (const auto& comps : cfg.eta) {
    json row = json::array();
    for (const auto& p : comps) row.push_back(trig_polynomial_to_json(p));
    eta.push_back(row);
  }
  return {{"n", cfg.width}, {"d", cfg.depth}, {"alpha", cfg.alpha},
          {"xi", xi},       {"eta", eta},     {"flow", cfg.flow.velocity()}};
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

std::string config_digest(const SystemConfig& cfg) {
  return fnv1a_hex(config_to_json(cfg).dump());
}

namespace presets {

SystemConfig anzai() {
  SystemConfig cfg;
  cfg.width = 1;
  cfg.depth = 2;
  cfg.alpha = {std::numbers::sqrt2 - 1.0};
  cfg.xi = {{IntMatrix::identity(1)}};
  cfg.eta = {{TrigPolynomial(1, 1)}};
  cfg.flow = FlowDirection({std::numbers::sqrt2});
  return cfg;
}

SystemConfig anzai_perturbed() {
  SystemConfig cfg = anzai();
  cfg.eta = {{TrigPolynomial::cosine(FrequencyVector(1, 1, {1}), 0.1)}};
  return cfg;
}

}  // namespace presets

}  // namespace ergodic_spectra
