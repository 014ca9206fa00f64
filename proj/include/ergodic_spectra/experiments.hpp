#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ergodic_spectra/sampling.hpp"
#include "ergodic_spectra/trig_polynomial.hpp"

namespace ergodic_spectra {

inline constexpr const char* kToolVersion = "0.1.0";

enum class ExperimentKind { orbit, birkhoff, ergodicity, mixing, spectrum, mourre, commutator_check, dini, validate };

/// Throws ConfigError for unknown names.
ExperimentKind experiment_from_string(const std::string& name);
std::string to_string(ExperimentKind kind);
const std::vector<std::string>& experiment_names();

/// Exit statuses of the runner.
enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitContract = 3 };

/// Parameters of one run. Unset optionals take per-experiment defaults.
struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::validate;
  std::filesystem::path config_path;
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 0;
  std::size_t samples = 1 << 16;
  SamplerKind sampler = SamplerKind::rank1_lattice;
  std::size_t threads = 1;

  std::optional<std::size_t> count;        // N (orbit length)
  std::optional<std::size_t> max_lag;      // Nmax
  std::optional<std::size_t> bandwidth;    // M
  std::size_t grid = 512;
  std::size_t j = 2;
  std::size_t k = 1;
  std::string chi;                         // "1" or "1,0"; default e_1
  std::string x0;                          // "0.1|0.2"; default origin
  std::string observable;                  // "0|1" or JSON trig polynomial
  std::string phi;
  std::string psi;
  std::vector<std::size_t> checkpoints;
  std::vector<double> t_schedule;
  std::size_t starts = 100;
  std::size_t max_exponent = 4;
  bool backward = false;
};

/**
 * Loads and validates the config, writes manifest.json, then the data files
 * of the experiment into output_dir (created if missing). Diagnostics and
 * errors go to `err`. Returns one of the ExitCode values.
 */
int run_experiment(const ExperimentSpec& spec, std::ostream& err);

/// "1,0|0,2" -> blocks {1,0},{0,2}; a leading '[' reads a JSON record list.
TrigPolynomial parse_observable(const std::string& text, std::size_t width);
FrequencyVector parse_frequency(const std::string& text);
TorusPoint parse_point(const std::string& text);

/// printf %.17g
std::string format_double(double value);

}  // namespace ergodic_spectra
