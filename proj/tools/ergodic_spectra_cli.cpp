// Experiment runner for Furstenberg transformations on products of tori.
//
//   ergodic-spectra <experiment> --config cfg.json --out dir [options]

#include <iostream>

#include <CLI11.hpp>

#include "ergodic_spectra/errors.hpp"
#include "ergodic_spectra/experiments.hpp"
#include "ergodic_spectra/parallel.hpp"

namespace es = ergodic_spectra;

int main(int argc, char** argv) {
  CLI::App app{"Numerical diagnostics for Furstenberg transformations on (T^n)^d"};
  app.require_subcommand(1);

  es::ExperimentSpec spec;
  std::string sampler = "rank1_lattice";
  std::size_t count = 0, max_lag = 0, bandwidth = 0;

  for (const auto& name : es::experiment_names()) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", spec.config_path, "system config JSON")->required();
    sub->add_option("--out", spec.output_dir, "output directory (created if missing)");
    sub->add_option("--seed", spec.seed, "seed for samplers and random starts");
    sub->add_option("--samples", spec.samples, "quadrature points (total over shifts)");
    sub->add_option("--sampler", sampler, "monte_carlo | rank1_lattice | kronecker");
    sub->add_option("--threads", spec.threads, "worker threads (results do not depend on it)");
    sub->add_option("--N", count, "orbit length");
    sub->add_option("--nmax", max_lag, "largest correlation lag");
    sub->add_option("--M", bandwidth, "Fejer bandwidth");
    sub->add_option("--grid", spec.grid, "spectral grid size");
    sub->add_option("--j", spec.j, "factor index j (2..d)");
    sub->add_option("--k", spec.k, "perturbation component k (1..n)");
    sub->add_option("--chi", spec.chi, "character frequency, e.g. 1,0");
    sub->add_option("--x0", spec.x0, "start point, blocks separated by |");
    sub->add_option("--observable", spec.observable, "frequency like 0|1 or a JSON record list");
    sub->add_option("--phi", spec.phi, "left correlation vector");
    sub->add_option("--psi", spec.psi, "right correlation vector");
    sub->add_option("--checkpoints", spec.checkpoints, "orbit lengths to report")->delimiter(',');
    sub->add_option("--t", spec.t_schedule, "t schedule (commutator-check) or t grid (dini)")->delimiter(',');
    sub->add_option("--starts", spec.starts, "number of random starts (ergodicity)");
    sub->add_option("--max-exponent", spec.max_exponent, "largest power of ten for Mourre search");
    sub->add_flag("--backward", spec.backward, "iterate the inverse map");
    sub->callback([&spec, name] { spec.kind = es::experiment_from_string(name); });
  }

  if (argc > 1 && argv[1][0] != '-') {
    try {
      es::experiment_from_string(argv[1]);
    } catch (const es::ConfigError& e) {
      std::cerr << e.what() << "\n";
      return es::kExitConfig;
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help and version requests exit 0; every usage error maps to the config status.
    const int code = app.exit(e);
    return code == 0 ? 0 : es::kExitConfig;
  }

  try {
    spec.sampler = es::sampler_kind_from_string(sampler);
  } catch (const es::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return es::kExitConfig;
  }
  if (count) spec.count = count;
  if (max_lag) spec.max_lag = max_lag;
  if (bandwidth) spec.bandwidth = bandwidth;
  spec.threads = es::resolve_threads(spec.threads);
  return es::run_experiment(spec, std::cerr);
}
