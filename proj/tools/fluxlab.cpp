#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "fluxlab/config.hpp"
#include "fluxlab/error.hpp"
#include "fluxlab/run.hpp"

namespace {

std::string describe(fluxlab::Experiment e) {
  using fluxlab::Experiment;
  switch (e) {
    case Experiment::Identities:
      return "unitary transform identities over seeded fields";
    case Experiment::CheckTheorem:
      return "log Z(0) >= log Z(A) over sampled fields, plus ground energies";
    case Experiment::GroundEnergy:
      return "E0(A) >= E0(0) over sampled fields";
    case Experiment::Correlations:
      return "Cooper-pair correlation phase covariance under pure gauges";
    case Experiment::OrbitAverage:
      return "gauge-orbit average of a Cooper correlation";
    case Experiment::String:
      return "path independence of string-dressed correlations";
    case Experiment::Anneal:
      return "simulated annealing over gauge fields";
    case Experiment::Spectrum:
      return "full many-body spectrum by sector";
  }
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  using namespace fluxlab;
  CLI::App app{"fluxlab: exact-diagonalization checks for paired lattice fermions in U(1) gauge fields"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  app.add_option("--config", config_path, "INI or JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory (default from config, else ./out)");
  app.add_option("--seed", seed, "base seed");
  app.add_option("--threads", threads, "worker threads (also FLUXLAB_THREADS)")->check(CLI::NonNegativeNumber);

  std::optional<Experiment> chosen;
  for (Experiment e : kAllExperiments) {
    CLI::App* sub = app.add_subcommand(std::string(to_string(e)), describe(e));
    sub->callback([&chosen, e] { chosen = e; });
  }
  CLI11_PARSE(app, argc, argv);

  RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = load_config(config_path);
    cfg.experiment = *chosen;
    if (seed) cfg.seed = *seed;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (threads) {
      cfg.threads = *threads;
    } else if (const char* env = std::getenv("FLUXLAB_THREADS")) {
      try {
        cfg.threads = std::stoi(env);
      } catch (const std::exception&) {
        throw Error(ErrorKind::ConstraintViolation, std::string("FLUXLAB_THREADS: cannot parse '") + env + "'");
      }
    }
    validate(cfg);
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitError;
  }
  return run(cfg, std::cerr);
}
