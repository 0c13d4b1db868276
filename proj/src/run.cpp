#include "fluxlab/run.hpp"

#include <filesystem>

#include "fluxlab/anneal.hpp"
#include "fluxlab/error.hpp"
#include "fluxlab/experiments.hpp"
#include "fluxlab/report.hpp"
#include "fluxlab/spectral.hpp"

namespace fluxlab {

namespace {

using Json = nlohmann::ordered_json;

struct Output {
  std::vector<CsvTable> tables;
  Json result;
  bool pass = true;
};

Json complex_json(cplx v) { return Json{{"re", v.real()}, {"im", v.imag()}}; }

Json params_json(const ModelParams& p) { return {{"kappa", p.kappa}, {"g", p.g}, {"K", p.K}}; }

Json lattice_json(const Lattice& lat) {
  return {{"d", lat.dim()},
          {"L", lat.half_side()},
          {"sites", lat.num_sites()},
          {"below_theorem_dimension", lat.below_theorem_dimension()},
          {"doubled_bonds", lat.has_doubled_bonds()}};
}

std::string i2s(long long v) { return std::to_string(v); }

Progress progress_to(std::ostream& log, std::string_view what) {
  return [&log, what](int done, int total) {
    log << "[" << what << "] " << done << "/" << total << std::endl;
  };
}

Output identities(const RunConfig& cfg, const Lattice& lat) {
  std::vector<ModelParams> sets;
  for (std::size_t i = 0; i < cfg.identity_kappas.size(); ++i)
    sets.push_back({cfg.identity_kappas[i], cfg.identity_gs[i], cfg.model.K, 1.0});
  const IdentitySuite s = run_identities(lat, sets, cfg.identity_seeds, cfg.seed);
  Output o;
  CsvTable t{"identities", {"param_set", "kappa", "g", "seed", "kind", "max_error", "pass"}, {}};
  for (const IdentityRow& r : s.rows)
    t.add({i2s(r.param_set), num(r.params.kappa), num(r.params.g), i2s(static_cast<long long>(r.seed)),
           std::string(to_string(r.report.kind)), num(r.report.max_error), r.report.pass ? "1" : "0"});
  o.tables.push_back(std::move(t));
  Json kinds = Json::array();
  for (IdentityKind k : kAllIdentityKinds) {
    double worst = 0.0;
    bool pass = true;
    for (const IdentityRow& r : s.rows)
      if (r.report.kind == k) {
        worst = std::max(worst, r.report.max_error);
        pass = pass && r.report.pass;
      }
    kinds.push_back({{"kind", std::string(to_string(k))}, {"max_error", worst}, {"pass", pass}});
  }
  o.result = {{"kinds", kinds}, {"tolerance", kIdentityTolerance}, {"max_error", s.max_error}, {"pass", s.pass}};
  o.pass = s.pass;
  return o;
}

CsvTable theorem_table(const TheoremReport& r) {
  CsvTable t{"theorem", {"kind", "seed", "beta", "log_z_tilde", "log_z_zero", "margin"}, {}};
  for (const TheoremRow& row : r.rows)
    t.add({std::string(to_string(row.kind)), i2s(static_cast<long long>(row.seed)), num(row.beta),
           num(row.log_z_tilde), num(row.log_z_zero), num(row.margin)});
  return t;
}

CsvTable ground_table(const GroundEnergyReport& r) {
  CsvTable t{"ground_energy", {"kind", "seed", "e0_tilde", "e0_zero", "gap"}, {}};
  for (const GroundEnergyRow& row : r.rows)
    t.add({std::string(to_string(row.kind)), i2s(static_cast<long long>(row.seed)), num(row.e0_tilde),
           num(row.e0_zero), num(row.gap)});
  return t;
}

Json theorem_json(const TheoremReport& r) {
  return {{"betas", r.betas},
          {"rows", r.rows.size()},
          {"min_margin", r.min_margin},
          {"max_pure_gauge_margin", r.max_control_abs},
          {"tolerance", kMarginTolerance},
          {"pass", r.pass}};
}

Json ground_json(const GroundEnergyReport& r) {
  return {{"min_gap", r.min_gap},
          {"max_pure_gauge_gap", r.max_control_abs},
          {"tolerance", kMarginTolerance},
          {"pass", r.pass}};
}

Output check_theorem(const RunConfig& cfg, const Lattice& lat, std::ostream& log) {
  const FieldScan scan = scan_fields(lat, cfg.model, cfg.samples, cfg.betas, cfg.seed, progress_to(log, "check-theorem"));
  const TheoremReport th = theorem_report(scan);
  const GroundEnergyReport ge = ground_energy_report(scan);
  Output o;
  o.tables.push_back(theorem_table(th));
  o.tables.push_back(ground_table(ge));
  o.result = {{"theorem", theorem_json(th)}, {"ground_energy", ground_json(ge)}};
  o.pass = th.pass && ge.pass;
  return o;
}

Output ground_energy(const RunConfig& cfg, const Lattice& lat, std::ostream& log) {
  const GroundEnergyReport ge = check_ground_energy(lat, cfg.model, cfg.samples, cfg.seed, progress_to(log, "ground-energy"));
  Output o;
  o.tables.push_back(ground_table(ge));
  o.result = {{"ground_energy", ground_json(ge)}};
  o.pass = ge.pass;
  return o;
}

std::vector<SitePair> default_pairs(const Lattice& lat, bool distinct) {
  std::vector<SitePair> out;
  for (int y = distinct ? 1 : 0; y < lat.num_sites(); ++y) out.emplace_back(0, y);
  return out;
}

Output correlations(const RunConfig& cfg, const Lattice& lat, std::ostream& log) {
  const std::vector<SitePair> pairs = cfg.correlation_pairs.empty() ? default_pairs(lat, false) : cfg.correlation_pairs;
  const CorrelationReport r =
      check_correlations(lat, cfg.model, pairs, cfg.correlation_fields, cfg.seed, progress_to(log, "correlations"));
  Output o;
  CsvTable fixed{"correlations", {"x", "y", "re", "im", "gamma11_re", "gamma11_im"}, {}};
  for (std::size_t p = 0; p < pairs.size(); ++p)
    fixed.add({i2s(pairs[p].first), i2s(pairs[p].second), num(r.fixed_gauge_values[p].real()),
               num(r.fixed_gauge_values[p].imag()), num(r.gamma_values[p].real()), num(r.gamma_values[p].imag())});
  CsvTable cov{"covariance", {"seed", "x", "y", "value_re", "value_im", "predicted_re", "predicted_im", "error"}, {}};
  for (const CovarianceRow& row : r.covariance)
    cov.add({i2s(static_cast<long long>(row.seed)), i2s(row.x), i2s(row.y), num(row.value.real()),
             num(row.value.imag()), num(row.predicted.real()), num(row.predicted.imag()), num(row.error)});
  o.tables.push_back(std::move(fixed));
  o.tables.push_back(std::move(cov));
  o.result = {{"fields", cfg.correlation_fields},
              {"max_covariance_error", r.max_covariance_error},
              {"max_gamma_error", r.max_gamma_error},
              {"tolerance", kCorrelationTolerance},
              {"pass", r.pass}};
  o.pass = r.pass;
  return o;
}

Output orbit(const RunConfig& cfg, const Lattice& lat, std::ostream& log) {
  const int y = cfg.orbit_y < 0 ? lat.neighbor(cfg.orbit_x, 0) : cfg.orbit_y;
  const OrbitReport r = orbit_average(lat, cfg.model, cfg.orbit_x, y, cfg.orbit_samples, cfg.seed, cfg.orbit_direct,
                                      progress_to(log, "orbit-average"));
  Output o;
  CsvTable s{"orbit_samples", {"index", "phi_x", "phi_y", "re", "im"}, {}};
  for (const OrbitSample& row : r.samples)
    s.add({i2s(row.index), num(row.phi_x), num(row.phi_y), num(row.value.real()), num(row.value.imag())});
  CsvTable d{"orbit_direct", {"index", "law_re", "law_im", "ed_re", "ed_im", "error", "onsite_re", "onsite_im"}, {}};
  for (const OrbitDirectCheck& row : r.direct)
    d.add({i2s(row.index), num(row.law_value.real()), num(row.law_value.imag()), num(row.ed_value.real()),
           num(row.ed_value.imag()), num(row.error), num(row.onsite_value.real()), num(row.onsite_value.imag())});
  CsvTable c{"orbit_convergence", {"n", "mean_re", "mean_im", "abs_mean", "std_error"}, {}};
  for (const ConvergenceRow& row : r.convergence)
    c.add({i2s(row.n), num(row.mean.real()), num(row.mean.imag()), num(std::abs(row.mean)), num(row.std_error)});
  o.tables.push_back(std::move(s));
  o.tables.push_back(std::move(d));
  o.tables.push_back(std::move(c));
  o.result = {{"x", r.x},
              {"y", y},
              {"fixed_gauge_value", complex_json(r.fixed_gauge_value)},
              {"onsite_value", complex_json(r.onsite_value)},
              {"analytic", complex_json(r.analytic)},
              {"mean", complex_json(r.mean)},
              {"std_error", r.std_error},
              {"abs_mean_over_std_error", r.std_error > 0 ? std::abs(r.mean) / r.std_error : 0.0},
              {"max_direct_error", r.max_direct_error},
              {"max_onsite_deviation", r.max_onsite_deviation},
              {"convergence_slope", r.convergence_slope},
              {"pass", r.pass}};
  o.pass = r.pass;
  return o;
}

Output strings(const RunConfig& cfg, const Lattice& lat) {
  const std::vector<SitePair> pairs = cfg.string_pairs.empty() ? default_pairs(lat, true) : cfg.string_pairs;
  const StringReport r = check_strings(lat, cfg.model, pairs, cfg.seed);
  Output o;
  CsvTable t{"strings", {"x", "y", "path_index", "path", "re", "im", "reference_re", "reference_im", "error"}, {}};
  for (const StringRow& row : r.rows)
    t.add({i2s(row.x), i2s(row.y), i2s(row.path_index), row.path, num(row.value.real()), num(row.value.imag()),
           num(row.reference.real()), num(row.reference.imag()), num(row.error)});
  o.tables.push_back(std::move(t));
  o.result = {{"rows", r.rows.size()}, {"max_error", r.max_error}, {"tolerance", kCorrelationTolerance}, {"pass", r.pass}};
  o.pass = r.pass;
  return o;
}

Output anneal(const RunConfig& cfg, const Lattice& lat, std::ostream& log) {
  AnnealConfig a = cfg.anneal;
  a.seed = cfg.seed;
  const AnnealResult r = run_anneal(lat, cfg.model, a, progress_to(log, "anneal"));
  Output o;
  CsvTable trace{"anneal_trace",
                 {"restart", "stage", "step", "temperature", "objective", "best", "flux_distance", "acceptance"},
                 {}};
  CsvTable rs{"anneal_restarts", {"restart", "start_objective", "best_objective", "flux_distance", "converged"}, {}};
  Json best = nullptr;
  double best_objective = std::numeric_limits<double>::infinity();
  for (const RestartResult& rr : r.restarts) {
    for (const AnnealStage& s : rr.trace)
      trace.add({i2s(rr.restart), i2s(s.stage), i2s(s.step), num(s.temperature), num(s.objective), num(s.best),
                 num(s.flux_distance), num(s.acceptance)});
    rs.add({i2s(rr.restart), num(rr.start_objective), num(rr.best_objective), num(rr.flux_distance),
            rr.converged ? "1" : "0"});
    if (rr.best_objective < best_objective) {
      best_objective = rr.best_objective;
      best = Json::parse(gauge_to_json(lat, rr.best_field));
    }
  }
  o.tables.push_back(std::move(trace));
  o.tables.push_back(std::move(rs));
  o.result = {{"stages", a.num_stages()},
              {"zero_objective", r.zero_objective},
              {"best_objective", best_objective},
              {"restarts", a.restarts},
              {"restarts_converged", r.restarts_converged},
              {"converge_tolerance", a.converge_tolerance},
              {"zero_beats_starts", r.zero_beats_starts},
              {"best_field", best}};
  // non-convergence is an outcome; only a start that beats the zero field contradicts the theorem
  o.pass = r.zero_beats_starts;
  return o;
}

Output spectrum(const RunConfig& cfg, const Lattice& lat) {
  const GaugeField tilde = cfg.spectrum_field == "random" ? random_field(lat, cfg.seed) : zero_field(lat);
  const HamiltonianBundle h = build_full(lat, cfg.model, tilde);
  const SpectralData spec = diagonalize(h);
  Output o;
  CsvTable t{"spectrum", {"n_up", "n_down", "index", "eigenvalue"}, {}};
  for (const auto& [key, eigs] : spec.sector_eigs())
    for (std::size_t i = 0; i < eigs.size(); ++i)
      t.add({i2s(key.first), i2s(key.second), i2s(static_cast<long long>(i)), num(eigs[i])});
  o.tables.push_back(std::move(t));
  Json lz = Json::array();
  for (double b : cfg.betas) lz.push_back({{"beta", b}, {"log_z", log_partition(spec, b)}});
  o.result = {{"field", cfg.spectrum_field},
              {"dimension", spec.dimension()},
              {"classical_shift", spec.shift},
              {"e0", spec.e0},
              {"e_max", spec.e_max},
              {"ground_tolerance", spec.ground_tolerance},
              {"degeneracy", spec.degeneracy},
              {"log_partition", lz}};
  return o;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& log) {
  try {
    validate(cfg);
    set_num_threads(cfg.threads);
    const Lattice lat = build_lattice(cfg.d, cfg.L);
    Output o;
    switch (cfg.experiment) {
      case Experiment::Identities:
        o = identities(cfg, lat);
        break;
      case Experiment::CheckTheorem:
        o = check_theorem(cfg, lat, log);
        break;
      case Experiment::GroundEnergy:
        o = ground_energy(cfg, lat, log);
        break;
      case Experiment::Correlations:
        o = correlations(cfg, lat, log);
        break;
      case Experiment::OrbitAverage:
        o = orbit(cfg, lat, log);
        break;
      case Experiment::String:
        o = strings(cfg, lat);
        break;
      case Experiment::Anneal:
        o = anneal(cfg, lat, log);
        break;
      case Experiment::Spectrum:
        o = spectrum(cfg, lat);
        break;
    }
    Json result = {{"lattice", lattice_json(lat)}, {"params", params_json(cfg.model)}};
    for (auto& [k, v] : o.result.items()) result[k] = v;
    result["verdict"] = o.pass ? "pass" : "fail";

    const ReportHeader header{std::string(to_string(cfg.experiment)), config_hash(cfg)};
    const std::filesystem::path dir(cfg.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());
    for (const CsvTable& t : o.tables) write_csv(dir, t, header);
    write_summary(dir, header, Json::parse(canonical_config(cfg)), result);
    log << "[" << header.experiment << "] verdict " << (o.pass ? "pass" : "fail") << ", wrote " << dir.string() << std::endl;
    return o.pass ? kExitPass : kExitVerdictFail;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << std::endl;
    return kExitError;
  }
}

}  // namespace fluxlab
