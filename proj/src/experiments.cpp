#include "ergodic_spectra/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "ergodic_spectra/analysis.hpp"
#include "ergodic_spectra/commutator.hpp"
#include "ergodic_spectra/config_io.hpp"
#include "ergodic_spectra/errors.hpp"

namespace ergodic_spectra {

using nlohmann::json;

namespace {

struct Entry {
  ExperimentKind kind;
  const char* name;
};

constexpr Entry kExperiments[] = {
    {ExperimentKind::orbit, "orbit"},
    {ExperimentKind::birkhoff, "birkhoff"},
    {ExperimentKind::ergodicity, "ergodicity"},
    {ExperimentKind::mixing, "mixing"},
    {ExperimentKind::spectrum, "spectrum"},
    {ExperimentKind::mourre, "mourre"},
    {ExperimentKind::commutator_check, "commutator-check"},
    {ExperimentKind::dini, "dini"},
    {ExperimentKind::validate, "validate"},
};

// Calibration thresholds recorded in every manifest.
constexpr double kMourreLimitFraction = 0.5;
constexpr double kCommutatorTolerance = 1e-8;
constexpr std::size_t kOrbitPrecisionHorizon = 1'000'000;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) parts.push_back(part);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header) : out_(path) {
    if (!out_) throw ConfigError("cannot write " + path.string());
    row(header);
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

void write_json(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

std::string to_string(Severity s) { return s == Severity::error ? "error" : "warning"; }

json spec_params(const ExperimentSpec& spec) {
  json p = {{"seed", spec.seed},
            {"samples", spec.samples},
            {"sampler", ergodic_spectra::to_string(spec.sampler)},
            {"grid", spec.grid},
            {"j", spec.j},
            {"k", spec.k},
            {"chi", spec.chi},
            {"x0", spec.x0},
            {"observable", spec.observable},
            {"phi", spec.phi},
            {"psi", spec.psi},
            {"checkpoints", spec.checkpoints},
            {"t_schedule", spec.t_schedule},
            {"starts", spec.starts},
            {"max_exponent", spec.max_exponent},
            {"backward", spec.backward}};
  if (spec.count) p["N"] = *spec.count;
  if (spec.max_lag) p["Nmax"] = *spec.max_lag;
  if (spec.bandwidth) p["M"] = *spec.bandwidth;
  return p;
}

FrequencyVector default_chi(std::size_t width) {
  std::vector<std::int64_t> e(width, 0);
  e[0] = 1;
  return FrequencyVector(1, width, std::move(e));
}

/// e_1 on the first coordinate of the last factor: a vector in H_d minus H_{d-1}.
TrigPolynomial default_mixing_vector(std::size_t depth, std::size_t width) {
  std::vector<std::int64_t> e(depth * width, 0);
  e[(depth - 1) * width] = 1;
  return TrigPolynomial::character(FrequencyVector(depth, width, std::move(e)));
}

TrigPolynomial default_rotation_observable(std::size_t width) {
  std::vector<std::int64_t> e(width, 0);
  e[0] = 1;
  return TrigPolynomial::character(FrequencyVector(1, width, std::move(e)));
}

class Runner {
 public:
  Runner(const ExperimentSpec& spec, std::ostream& err, FurstenbergSystem system)
      : spec_(spec), err_(err), system_(std::move(system)), dir_(spec.output_dir) {}

  int run() {
    switch (spec_.kind) {
      case ExperimentKind::validate: return validate();
      case ExperimentKind::orbit: return orbit();
      case ExperimentKind::birkhoff: return birkhoff();
      case ExperimentKind::ergodicity: return ergodicity();
      case ExperimentKind::mixing: return mixing(false);
      case ExperimentKind::spectrum: return mixing(true);
      case ExperimentKind::mourre: return mourre();
      case ExperimentKind::commutator_check: return commutator_check();
      case ExperimentKind::dini: return dini();
    }
    return kExitConfig;
  }

 private:
  std::size_t width() const { return system_.width(); }
  std::size_t depth() const { return system_.depth(); }

  TrigPolynomial observable(const std::string& text, TrigPolynomial fallback) const {
    return text.empty() ? fallback : parse_observable(text, width());
  }

  FrequencyVector chi() const {
    if (spec_.chi.empty()) return default_chi(width());
    FrequencyVector f = parse_frequency(spec_.chi);
    if (f.depth() != 1 || f.width() != width()) throw ConfigError("chi must be one block of n integers");
    return f;
  }

  TorusPoint start_point() const {
    if (spec_.x0.empty()) return TorusPoint(depth(), width());
    TorusPoint x = parse_point(spec_.x0);
    if (x.width() != width() || x.depth() != depth()) throw ConfigError("x0 must have d blocks of n coordinates");
    return x;
  }

  Sampler sampler(std::size_t sampler_depth) const {
    return Sampler{spec_.sampler, spec_.seed, spec_.samples, sampler_depth, width()};
  }

  int validate() {
    CsvWriter csv(dir_ / "diagnostics.csv", {"severity", "message"});
    for (const auto& d : system_.warnings()) csv.row({to_string(d.severity), "\"" + d.message + "\""});
    return kExitOk;
  }

  int orbit() {
    const std::size_t count = spec_.count.value_or(10);
    if (count > kOrbitPrecisionHorizon) {
      err_ << "warning: orbit length " << count << " exceeds the double-precision horizon "
           << kOrbitPrecisionHorizon << '\n';
    }
    std::vector<std::string> header{"step"};
    for (std::size_t f = 1; f <= depth(); ++f) {
      for (std::size_t c = 1; c <= width(); ++c) header.push_back("x_" + std::to_string(f) + "_" + std::to_string(c));
    }
    CsvWriter csv(dir_ / "orbit.csv", header);
    std::size_t step = 0;
    for (const TorusPoint& p :
         system_.orbit(start_point(), count, spec_.backward ? Direction::backward : Direction::forward)) {
      std::vector<std::string> row{std::to_string(step++)};
      for (double c : p.coords()) row.push_back(format_double(c));
      csv.row(row);
    }
    return kExitOk;
  }

  std::vector<std::size_t> checkpoints(std::vector<std::size_t> fallback) const {
    return spec_.checkpoints.empty() ? fallback : spec_.checkpoints;
  }

  int birkhoff() {
    const TrigPolynomial f = observable(spec_.observable, default_rotation_observable(width()));
    const auto cps = checkpoints({1, 10, 100, 1000, 10000});
    const auto averages = birkhoff_partial(system_, f, start_point(), cps);
    CsvWriter csv(dir_ / "birkhoff.csv", {"N", "birkhoff_re", "birkhoff_im"});
    for (std::size_t i = 0; i < cps.size(); ++i) {
      csv.row({std::to_string(cps[i]), format_double(averages[i].real()), format_double(averages[i].imag())});
    }
    return kExitOk;
  }

  int ergodicity() {
    const TrigPolynomial f = observable(spec_.observable, default_rotation_observable(width()));
    std::vector<TorusPoint> starts;
    for (std::size_t s = 0; s < spec_.starts; ++s) {
      std::vector<double> coords(depth() * width());
      for (std::size_t c = 0; c < coords.size(); ++c) coords[c] = counter_uniform(spec_.seed, s, c);
      starts.emplace_back(depth(), width(), std::move(coords));
    }
    CsvWriter csv(dir_ / "gap.csv", {"N", "gap"});
    for (std::size_t n : checkpoints({1000, 10000})) {
      csv.row({std::to_string(n), format_double(ergodicity_gap(system_, f, starts, n, spec_.threads))});
    }
    return kExitOk;
  }

  int mixing(bool with_spectrum) {
    const TrigPolynomial phi = observable(spec_.phi, default_mixing_vector(depth(), width()));
    const TrigPolynomial psi = observable(spec_.psi, phi);
    const std::size_t max_lag = spec_.max_lag.value_or(64);
    const auto direction = spec_.backward ? Direction::backward : Direction::forward;
    const CorrelationSeries series =
        correlation_series(system_, phi, psi, max_lag, sampler(depth()), spec_.threads, direction);
    {
      CsvWriter csv(dir_ / "correlation.csv", {"N", "re_cN", "im_cN", "stderr"});
      for (std::size_t n = 0; n <= max_lag; ++n) {
        csv.row({std::to_string(n), format_double(series.values[n].real()), format_double(series.values[n].imag()),
                 format_double(series.std_error[n])});
      }
    }
    if (system_.config().is_affine() && phi.size() == 1 && psi.size() == 1 && !spec_.backward) {
      CsvWriter csv(dir_ / "oracle.csv", {"N", "re_cN", "im_cN"});
      for (std::size_t n = 0; n <= max_lag; ++n) {
        const Complex c = affine_oracle_correlation(system_, phi, psi, n);
        csv.row({std::to_string(n), format_double(c.real()), format_double(c.imag())});
      }
    }
    if (!with_spectrum) return kExitOk;

    const auto est = spectral_density(series, spec_.grid, spec_.bandwidth.value_or(0));
    CsvWriter csv(dir_ / "density.csv", {"theta", "density"});
    for (std::size_t i = 0; i < est.grid.size(); ++i) {
      csv.row({format_double(est.grid[i]), format_double(est.density[i])});
    }
    write_json(dir_ / "summary.json", {{"bandwidth", est.bandwidth},
                                       {"flatness", est.flatness},
                                       {"deviation_from_uniform", est.deviation_from_uniform},
                                       {"atom_score", est.atom_score},
                                       {"integral", est.integral},
                                       {"c0_re", series.values[0].real()},
                                       {"propagated_stderr", est.propagated_std_error}});
    return kExitOk;
  }

  int mourre() {
    const FrequencyVector c = chi();
    const auto samples = default_mourre_samples(system_, spec_.j);
    const AdaptiveMourre adaptive = adaptive_mourre(system_, spec_.j, c, samples, spec_.max_exponent, spec_.threads);
    {
      CsvWriter csv(dir_ / "mourre.csv", {"N", "min_abs_gN", "max_dev_from_limit"});
      for (const auto& row : adaptive.rows) {
        csv.row({std::to_string(row.count), format_double(row.min_abs), format_double(row.max_deviation)});
      }
    }
    json summary = {{"limit", adaptive.limit},
                    {"a", adaptive.bound.a},
                    {"witness", std::vector<double>(adaptive.bound.witness.coords().begin(),
                                                    adaptive.bound.witness.coords().end())},
                    {"samples", samples.size()}};
    summary["n_star"] = adaptive.n_star ? json(*adaptive.n_star) : json(nullptr);
    write_json(dir_ / "summary.json", summary);
    if (!adaptive.n_star || !(adaptive.bound.a > 0.0)) {
      err_ << "numerical contract violated: no strict Mourre bound up to N = 10^" << spec_.max_exponent << '\n';
      return kExitContract;
    }
    return kExitOk;
  }

  int commutator_check() {
    const FrequencyVector c = chi();
    const std::size_t field_depth = spec_.j - 1;
    const TrigPolynomial f =
        observable(spec_.observable, TrigPolynomial::constant(field_depth, width(), 1.0));
    const auto schedule = spec_.t_schedule.empty() ? std::vector<double>{1e-2, 1e-3, 1e-4, 1e-5} : spec_.t_schedule;
    const auto points = rank1_lattice_points(field_depth, width(), 1024);
    const CommutatorCheck check = verify_commutator(system_, spec_.j, c, f, points, schedule);
    {
      CsvWriter csv(dir_ / "commutator.csv", {"t", "residual"});
      for (std::size_t i = 0; i < check.t.size(); ++i) {
        csv.row({format_double(check.t[i]), format_double(check.residual[i])});
      }
    }
    write_json(dir_ / "summary.json", {{"extrapolated_residual", check.extrapolated_residual},
                                       {"tolerance", kCommutatorTolerance}});
    if (check.extrapolated_residual > kCommutatorTolerance) {
      err_ << "numerical contract violated: extrapolated commutator residual "
           << format_double(check.extrapolated_residual) << '\n';
      return kExitContract;
    }
    return kExitOk;
  }

  int dini() {
    const auto grid = spec_.t_schedule.empty() ? log_spaced(1e-6, 1.0, 61) : spec_.t_schedule;
    const DiniProfile profile = dini_profile(system_, spec_.j, spec_.k, grid, 4096, spec_.threads);
    bool within = profile.integral <= profile.lipschitz + kRoundoffAllowance;
    {
      CsvWriter csv(dir_ / "dini.csv", {"t", "dini_modulus"});
      for (std::size_t i = 0; i < profile.t.size(); ++i) {
        csv.row({format_double(profile.t[i]), format_double(profile.modulus[i])});
        within = within && profile.modulus[i] <= profile.lipschitz * profile.t[i] + kRoundoffAllowance;
      }
    }
    write_json(dir_ / "summary.json", {{"integral", profile.integral}, {"lipschitz", profile.lipschitz}});
    if (!within) {
      err_ << "numerical contract violated: Dini modulus exceeds the Lipschitz bound\n";
      return kExitContract;
    }
    return kExitOk;
  }

  const ExperimentSpec& spec_;
  std::ostream& err_;
  FurstenbergSystem system_;
  std::filesystem::path dir_;
};

}  // namespace

ExperimentKind experiment_from_string(const std::string& name) {
  for (const auto& e : kExperiments) {
    if (name == e.name) return e.kind;
  }
  throw ConfigError("unknown experiment '" + name + "'");
}

std::string to_string(ExperimentKind kind) {
  for (const auto& e : kExperiments) {
    if (kind == e.kind) return e.name;
  }
  return "unknown";
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& e : kExperiments) out.emplace_back(e.name);
    return out;
  }();
  return names;
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

FrequencyVector parse_frequency(const std::string& text) {
  std::vector<std::vector<std::int64_t>> blocks;
  for (const auto& block : split(text, '|')) {
    std::vector<std::int64_t> entries;
    for (const auto& e : split(block, ',')) {
      try {
        std::size_t used = 0;
        entries.push_back(std::stoll(e, &used));
        if (used != e.size()) throw ConfigError("");
      } catch (const std::exception&) {
        throw ConfigError("bad frequency entry '" + e + "' in '" + text + "'");
      }
    }
    blocks.push_back(std::move(entries));
  }
  try {
    return FrequencyVector::from_blocks(blocks);
  } catch (const DimensionError& e) {
    throw ConfigError(std::string("bad frequency '") + text + "': " + e.what());
  }
}

TorusPoint parse_point(const std::string& text) {
  std::vector<std::vector<double>> blocks;
  for (const auto& block : split(text, '|')) {
    std::vector<double> coords;
    for (const auto& e : split(block, ',')) {
      try {
        std::size_t used = 0;
        coords.push_back(std::stod(e, &used));
        if (used != e.size()) throw ConfigError("");
      } catch (const std::exception&) {
        throw ConfigError("bad coordinate '" + e + "' in '" + text + "'");
      }
    }
    blocks.push_back(std::move(coords));
  }
  try {
    return TorusPoint::from_blocks(blocks);
  } catch (const DimensionError& e) {
    throw ConfigError(std::string("bad point '") + text + "': " + e.what());
  }
}

TrigPolynomial parse_observable(const std::string& text, std::size_t width) {
  if (!text.empty() && text.front() == '[') {
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("malformed observable JSON: ") + e.what());
    }
    if (!doc.is_array() || doc.empty() || !doc[0].contains("frequency")) {
      throw ConfigError("observable JSON must be a nonempty list of {frequency, re, im} records");
    }
    return trig_polynomial_from_json(doc, doc[0].at("frequency").size(), width);
  }
  const FrequencyVector m = parse_frequency(text);
  if (m.width() != width) throw ConfigError("observable blocks must have n entries");
  return TrigPolynomial::character(m);
}

int run_experiment(const ExperimentSpec& spec, std::ostream& err) {
  SystemConfig cfg;
  try {
    cfg = load_config(spec.config_path);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  const Diagnostics diags = validate_config(cfg);
  for (const auto& d : diags) err << to_string(d.severity) << ": " << d.message << '\n';
  if (has_errors(diags)) return kExitConfig;

  try {
    std::filesystem::create_directories(spec.output_dir);
    json manifest = {{"tool", "ergodic-spectra"},
                     {"version", kToolVersion},
                     {"experiment", to_string(spec.kind)},
                     {"config_digest", config_digest(cfg)},
                     {"config", config_to_json(cfg)},
                     {"params", spec_params(spec)},
                     {"calibration", {{"mourre_limit_fraction", kMourreLimitFraction},
                                      {"commutator_tolerance", kCommutatorTolerance},
                                      {"orbit_precision_horizon", kOrbitPrecisionHorizon},
                                      {"roundoff_allowance", kRoundoffAllowance}}}};
    json warnings = json::array();
    for (const auto& d : diags) warnings.push_back(d.message);
    manifest["diagnostics"] = warnings;
    if (spec.kind == ExperimentKind::mixing || spec.kind == ExperimentKind::spectrum) {
      manifest["sampler"] = Sampler{spec.sampler, spec.seed, spec.samples, cfg.depth, cfg.width}.to_json();
    }
    write_json(spec.output_dir / "manifest.json", manifest);

    Runner runner(spec, err, FurstenbergSystem(std::move(cfg)));
    return runner.run();
  } catch (const NumericalContractError& e) {
    err << "numerical contract violated: " << e.what() << '\n';
    return kExitContract;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DimensionError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace ergodic_spectra
