#include "fluxlab/anneal.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include "fluxlab/error.hpp"
#include "fluxlab/rng.hpp"
#include "fluxlab/spectral.hpp"

namespace fluxlab {

void AnnealConfig::validate() const {
  auto bad = [](const char* key, const std::string& why) {
    throw Error(ErrorKind::ConstraintViolation, std::string(key) + ": " + why);
  };
  if (!std::isfinite(beta_physical) || beta_physical <= 0.0) bad("beta_physical", "must be > 0");
  if (!std::isfinite(t_initial) || t_initial <= 0.0) bad("t_initial", "must be > 0");
  if (!std::isfinite(t_final) || t_final <= 0.0 || t_final > t_initial) bad("t_final", "must be in (0, t_initial]");
  if (!(cooling > 0.0 && cooling < 1.0)) bad("cooling", "must be in (0, 1)");
  if (sweeps_per_temp < 1) bad("sweeps_per_temp", "must be >= 1");
  if (!(proposal_width > 0.0 && proposal_width <= kPi)) bad("proposal_width", "must be in (0, pi]");
  if (restarts < 1) bad("restarts", "must be >= 1");
  if (!(converge_tolerance > 0.0 && converge_tolerance <= kPi)) bad("converge_tolerance", "must be in (0, pi]");
}

int AnnealConfig::num_stages() const {
  int n = 0;
  for (double t = t_initial; t >= t_final * (1.0 - 1e-12); t *= cooling) ++n;
  return n;
}

double anneal_objective(const Lattice& lat, const ModelParams& params, double beta_physical, const GaugeField& tilde) {
  const double classical = flux_energy(lat, tilde, params.K, FluxConvention::Barred);
  if (params.kappa == 0.0 && params.g == 0.0)
    return -(2.0 * lat.num_sites() * std::log(2.0)) / beta_physical + classical;
  const SpectralData spec = diagonalize(build_fermionic(lat, params, tilde));
  return -log_partition(spec, beta_physical) / beta_physical + classical;
}

namespace {

RestartResult anneal_once(const Lattice& lat, const ModelParams& params, const AnnealConfig& cfg, int restart) {
  auto rng = make_rng(cfg.seed, Stream::Anneal, static_cast<std::uint64_t>(restart));
  GaugeField field(lat);
  if (!cfg.start_from_zero)
    for (int b = 0; b < lat.num_bonds(); ++b) field.set(b, -kPi + 2.0 * kPi * rng.uniform_open_closed());

  RestartResult r;
  r.restart = restart;
  r.start = field;
  double current = anneal_objective(lat, params, cfg.beta_physical, field);
  r.start_objective = current;
  r.best_objective = current;
  r.best_field = field;

  long long step = 0;
  double t = cfg.t_initial;
  const int stages = cfg.num_stages();
  for (int s = 0; s < stages; ++s, t *= cfg.cooling) {
    long long accepted = 0;
    long long proposed = 0;
    for (int sweep = 0; sweep < cfg.sweeps_per_temp; ++sweep) {
      for (int b = 0; b < lat.num_bonds(); ++b) {
        const double old = field.angle(b);
        field.set(b, old + cfg.proposal_width * (2.0 * rng.uniform() - 1.0));
        const double trial = anneal_objective(lat, params, cfg.beta_physical, field);
        const double delta = trial - current;
        ++proposed;
        if (delta <= 0.0 || rng.uniform() < std::exp(-delta / t)) {
          current = trial;
          ++accepted;
          if (current < r.best_objective) {
            r.best_objective = current;
            r.best_field = field;
          }
        } else {
          field.set(b, old);
        }
      }
    }
    step += proposed;
    r.trace.push_back({s, step, t, current, r.best_objective, flux_distance(lat, field),
                       static_cast<double>(accepted) / static_cast<double>(proposed)});
  }
  r.flux_distance = flux_distance(lat, r.best_field);
  r.converged = r.flux_distance <= cfg.converge_tolerance;
  return r;
}

}  // namespace

AnnealResult run_anneal(const Lattice& lat, const ModelParams& params, const AnnealConfig& cfg,
                        const Progress& progress) {
  params.validate();
  cfg.validate();
  AnnealResult out;
  out.dim = lat.dim();
  out.half_side = lat.half_side();
  out.params = params;
  out.config = cfg;
  out.zero_objective = anneal_objective(lat, params, cfg.beta_physical, zero_field(lat));

  std::vector<RestartResult> results(static_cast<std::size_t>(cfg.restarts));
  std::vector<std::exception_ptr> failures(results.size());
  int done = 0;
#pragma omp parallel for schedule(dynamic, 1)
  for (int r = 0; r < cfg.restarts; ++r) {
    try {
      results[r] = anneal_once(lat, params, cfg, r);
    } catch (...) {
      failures[r] = std::current_exception();
    }
#pragma omp critical(fluxlab_anneal_progress)
    {
      ++done;
      if (progress) progress(done, cfg.restarts);
    }
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);

  out.zero_beats_starts = true;
  for (RestartResult& r : results) {
    if (r.converged) ++out.restarts_converged;
    if (out.zero_objective > r.start_objective + 1e-10) out.zero_beats_starts = false;
  }
  out.restarts = std::move(results);
  return out;
}

}  // namespace fluxlab
