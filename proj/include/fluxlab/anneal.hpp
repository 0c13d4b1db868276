#pragma once

#include <cstdint>
#include <vector>

#include "fluxlab/experiments.hpp"
#include "fluxlab/gauge.hpp"
#include "fluxlab/lattice.hpp"
#include "fluxlab/model.hpp"

namespace fluxlab {

struct AnnealConfig {
  double beta_physical = 2.0;
  double t_initial = 1.0;
  double t_final = 1e-3;
  double cooling = 0.95;
  int sweeps_per_temp = 200;  ///< one sweep proposes a move on every bond once
  double proposal_width = 0.5;
  int restarts = 20;
  std::uint64_t seed = 0;
  double converge_tolerance = 0.1;
  bool start_from_zero = false;

  /// Throws Error{ConstraintViolation} naming the first offending field.
  void validate() const;
  [[nodiscard]] int num_stages() const;
};

/// Free energy -(1/beta) log Tr exp(-beta H_fermionic(tA)) plus the barred flux
/// energy. The fermionic trace is skipped (its value is the constant
/// 2|sites| log 2) when kappa = g = 0.
[[nodiscard]] double anneal_objective(const Lattice& lat, const ModelParams& params, double beta_physical,
                                      const GaugeField& tilde);

struct AnnealStage {
  int stage = 0;
  long long step = 0;  ///< proposals made so far
  double temperature = 0.0;
  double objective = 0.0;  ///< current (last accepted) value
  double best = 0.0;       ///< best-so-far envelope
  double flux_distance = 0.0;
  double acceptance = 0.0;
};

struct RestartResult {
  int restart = 0;
  GaugeField start;
  GaugeField best_field;
  double start_objective = 0.0;
  double best_objective = 0.0;
  double flux_distance = 0.0;  ///< of best_field
  bool converged = false;
  std::vector<AnnealStage> trace;
};

struct AnnealResult {
  int dim = 0;
  int half_side = 0;
  ModelParams params;
  AnnealConfig config;
  double zero_objective = 0.0;
  std::vector<RestartResult> restarts;
  int restarts_converged = 0;
  /// objective(0) <= objective(start) for every restart's starting field
  bool zero_beats_starts = false;
};

/// Metropolis over single-bond angle moves with geometric cooling. Restart r
/// draws from the stream (seed, r).
[[nodiscard]] AnnealResult run_anneal(const Lattice& lat, const ModelParams& params, const AnnealConfig& cfg,
                                      const Progress& progress = {});

}  // namespace fluxlab
