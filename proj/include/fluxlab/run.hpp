#pragma once

#include <ostream>

#include "fluxlab/config.hpp"

namespace fluxlab {

inline constexpr int kExitPass = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitVerdictFail = 2;

/// Runs the configured experiment, writes summary.json and the CSV tables into
/// cfg.out_dir, and returns 0 (pass), 2 (a checked claim failed) or 1 (error).
/// Progress and errors go to `log`. Nothing is written unless the computation
/// finished.
[[nodiscard]] int run(const RunConfig& cfg, std::ostream& log);

}  // namespace fluxlab
