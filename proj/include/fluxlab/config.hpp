#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fluxlab/anneal.hpp"
#include "fluxlab/model.hpp"

namespace fluxlab {

enum class Experiment { Identities, CheckTheorem, GroundEnergy, Correlations, OrbitAverage, String, Anneal, Spectrum };

inline constexpr Experiment kAllExperiments[] = {
    Experiment::Identities,   Experiment::CheckTheorem, Experiment::GroundEnergy, Experiment::Correlations,
    Experiment::OrbitAverage, Experiment::String,       Experiment::Anneal,       Experiment::Spectrum,
};

[[nodiscard]] std::string_view to_string(Experiment e) noexcept;
/// Throws Error{ConstraintViolation} naming "run.experiment".
[[nodiscard]] Experiment parse_experiment(std::string_view name);

using SitePair = std::pair<int, int>;

/// Effective configuration of one run. Keys are documented in configs/README.md.
struct RunConfig {
  int d = 2;
  int L = 1;
  ModelParams model;
  Experiment experiment = Experiment::Identities;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out_dir = "out";
  std::vector<double> betas{0.5, 2.0, 8.0};
  int samples = 50;

  int identity_seeds = 10;
  std::vector<double> identity_kappas{1.0, 0.4, 1.7};
  std::vector<double> identity_gs{1.0, 2.5, 0.3};

  int correlation_fields = 20;
  std::vector<SitePair> correlation_pairs;  ///< empty: (0, y) for every site y

  int orbit_x = 0;
  int orbit_y = -1;  ///< -1: first neighbour of orbit_x along axis 1
  int orbit_samples = 200;
  int orbit_direct = 8;

  std::vector<SitePair> string_pairs;  ///< empty: (0, y) for every y != 0

  AnnealConfig anneal;

  std::string spectrum_field = "zero";  ///< zero | random (seeded by run.seed)
};

/// Parses an INI document (sections [model] [run] [identities] [correlations]
/// [orbit] [string] [anneal] [spectrum]) or the equivalent JSON object. All
/// problems are collected; the thrown Error lists every offending key, one per
/// line, and takes the kind of the first one (ParseError, UnknownKey or
/// ConstraintViolation).
[[nodiscard]] RunConfig parse_config(std::string_view text);
/// Reads and parses a file. Throws Error{Io} when it cannot be read.
[[nodiscard]] RunConfig load_config(const std::string& path);

/// Re-checks every constraint (after command-line overrides).
void validate(const RunConfig& cfg);

/// Canonical JSON of everything that affects results (output directory and
/// thread count excluded).
[[nodiscard]] std::string canonical_config(const RunConfig& cfg);
/// Hex SHA-256 of canonical_config().
[[nodiscard]] std::string config_hash(const RunConfig& cfg);

}  // namespace fluxlab
