#include "fluxlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "fluxlab/error.hpp"

namespace fluxlab {

std::string_view to_string(SampleKind k) noexcept {
  switch (k) {
    case SampleKind::Zero:
      return "zero";
    case SampleKind::PureGauge:
      return "pure_gauge";
    case SampleKind::Random:
      return "random";
  }
  return "?";
}

namespace {

FieldSample summarize(const Lattice& lat, const ModelParams& params, const GaugeField& tilde,
                      const std::vector<double>& betas) {
  const SpectralData spec = diagonalize(build_fermionic(lat, params, tilde));
  FieldSample s;
  for (double beta : betas) s.log_z.push_back(log_partition(spec, beta));
  s.e0 = spec.e0;
  s.degeneracy = spec.degeneracy;
  return s;
}

double phase_angle_pair(const SitePhases& phi, int x, int y) { return -2.0 * (phi.phi[x] - phi.phi[y]); }

}  // namespace

FieldScan scan_fields(const Lattice& lat, const ModelParams& params, int n_samples, const std::vector<double>& betas,
                      std::uint64_t seed, const Progress& progress) {
  params.validate();
  if (n_samples < 0) throw Error(ErrorKind::InvalidArgument, "n_samples must be >= 0");
  for (double b : betas)
    if (!(b > 0.0)) throw Error(ErrorKind::ConstraintViolation, "betas: every beta must be > 0");
  FieldScan scan;
  scan.dim = lat.dim();
  scan.half_side = lat.half_side();
  scan.params = params;
  scan.betas = betas;
  scan.seed = seed;
  const int total = n_samples + 2;
  auto push = [&](SampleKind kind, std::uint64_t s, const GaugeField& tilde) {
    FieldSample f = summarize(lat, params, tilde, betas);
    f.kind = kind;
    f.seed = s;
    scan.samples.push_back(std::move(f));
    if (progress) progress(static_cast<int>(scan.samples.size()), total);
  };
  push(SampleKind::Zero, 0, zero_field(lat));
  const std::uint64_t gauge_seed = seed + static_cast<std::uint64_t>(n_samples);
  push(SampleKind::PureGauge, gauge_seed, pure_gauge(lat, random_phases(lat, gauge_seed)));
  for (int k = 0; k < n_samples; ++k) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(k);
    push(SampleKind::Random, s, random_field(lat, s));
  }
  return scan;
}

TheoremReport theorem_report(const FieldScan& scan) {
  if (scan.samples.empty() || scan.samples.front().kind != SampleKind::Zero)
    throw Error(ErrorKind::InvalidArgument, "field scan lacks the zero-field sample");
  TheoremReport r;
  r.dim = scan.dim;
  r.half_side = scan.half_side;
  r.below_theorem_dimension = scan.dim < 3;
  r.params = scan.params;
  r.betas = scan.betas;
  r.min_margin = std::numeric_limits<double>::infinity();
  const FieldSample& zero = scan.samples.front();
  for (const FieldSample& s : scan.samples) {
    for (std::size_t b = 0; b < scan.betas.size(); ++b) {
      TheoremRow row{s.kind, s.seed, scan.betas[b], s.log_z[b], zero.log_z[b], zero.log_z[b] - s.log_z[b]};
      if (s.kind == SampleKind::PureGauge)
        r.max_control_abs = std::max(r.max_control_abs, std::abs(row.margin));
      else
        r.min_margin = std::min(r.min_margin, row.margin);
      r.rows.push_back(row);
    }
  }
  r.pass = r.min_margin >= -kMarginTolerance && r.max_control_abs <= kMarginTolerance;
  return r;
}

TheoremReport check_trace_inequality(const Lattice& lat, const ModelParams& params, int n_samples,
                             const std::vector<double>& betas, std::uint64_t seed, const Progress& progress) {
  return theorem_report(scan_fields(lat, params, n_samples, betas, seed, progress));
}

GroundEnergyReport ground_energy_report(const FieldScan& scan) {
  if (scan.samples.empty() || scan.samples.front().kind != SampleKind::Zero)
    throw Error(ErrorKind::InvalidArgument, "field scan lacks the zero-field sample");
  GroundEnergyReport r;
  r.dim = scan.dim;
  r.half_side = scan.half_side;
  r.below_theorem_dimension = scan.dim < 3;
  r.params = scan.params;
  r.min_gap = std::numeric_limits<double>::infinity();
  const double e_zero = scan.samples.front().e0;
  double worst = std::numeric_limits<double>::infinity();
  for (const FieldSample& s : scan.samples) {
    GroundEnergyRow row{s.kind, s.seed, s.e0, e_zero, s.e0 - e_zero};
    if (s.kind == SampleKind::PureGauge) r.max_control_abs = std::max(r.max_control_abs, std::abs(row.gap));
    if (s.kind == SampleKind::Random) r.min_gap = std::min(r.min_gap, row.gap);
    worst = std::min(worst, row.gap);
    r.rows.push_back(row);
  }
  r.pass = worst >= -kMarginTolerance && r.max_control_abs <= kMarginTolerance;
  return r;
}

GroundEnergyReport check_ground_energy(const Lattice& lat, const ModelParams& params, int n_samples,
                                       std::uint64_t seed, const Progress& progress) {
  return ground_energy_report(scan_fields(lat, params, n_samples, {}, seed, progress));
}

GroundModel solve_ground(const Lattice& lat, const ModelParams& params, const GaugeField& tilde) {
  GroundModel m;
  m.h = build_fermionic(lat, params, tilde);
  m.spec = diagonalize(m.h);
  m.ground = ground_space(m.h, m.spec);
  return m;
}

cplx cooper_correlation(const GroundModel& m, int x, int y) {
  if (x < 0 || y < 0 || x >= m.h.num_sites || y >= m.h.num_sites)
    throw Error(ErrorKind::InvalidArgument, "site out of range");
  return ground_expectation(m.ground, cooper_pair_terms(x, y)).value;
}

cplx cooper_correlation(const Lattice& lat, const ModelParams& params, const GaugeField& tilde, int x, int y) {
  return cooper_correlation(solve_ground(lat, params, tilde), x, y);
}

cplx string_correlation(const GroundModel& m, const Lattice& lat, const GaugeField& tilde, const Path& path, int x,
                        int y) {
  if (path.start() != x || path.end() != y)
    throw Error(ErrorKind::InvalidPath, "path runs from " + std::to_string(path.start()) + " to " +
                                            std::to_string(path.end()) + ", expected " + std::to_string(x) + " to " +
                                            std::to_string(y));
  return std::polar(1.0, 2.0 * string_phase(lat, tilde, path)) * cooper_correlation(m, x, y);
}

CorrelationReport check_correlations(const Lattice& lat, const ModelParams& params,
                                     const std::vector<std::pair<int, int>>& pairs, int n_fields, std::uint64_t seed,
                                     const Progress& progress) {
  CorrelationReport r;
  r.dim = lat.dim();
  r.half_side = lat.half_side();
  r.params = params;
  r.pairs = pairs;
  const GroundModel base = solve_ground(lat, params, zero_field(lat));
  for (const auto& [x, y] : pairs) {
    r.fixed_gauge_values.push_back(cooper_correlation(base, x, y));
    const auto [g1x, g2x] = gamma_terms(x);
    const auto [g1y, g2y] = gamma_terms(y);
    const cplx gamma = ground_expectation(base.ground, g1x * g1y).value;
    r.gamma_values.push_back(gamma);
    if (x != y)
      r.max_gamma_error = std::max(r.max_gamma_error, std::abs(gamma.real() - 2.0 * r.fixed_gauge_values.back().real()));
  }
  for (int k = 0; k < n_fields; ++k) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(k);
    const SitePhases phi = random_phases(lat, s);
    const GroundModel m = solve_ground(lat, params, pure_gauge(lat, phi));
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      const auto [x, y] = pairs[p];
      CovarianceRow row;
      row.seed = s;
      row.x = x;
      row.y = y;
      row.value = cooper_correlation(m, x, y);
      row.predicted = std::polar(1.0, phase_angle_pair(phi, x, y)) * r.fixed_gauge_values[p];
      row.error = std::abs(row.value - row.predicted);
      r.max_covariance_error = std::max(r.max_covariance_error, row.error);
      r.covariance.push_back(row);
    }
    if (progress) progress(k + 1, n_fields);
  }
  r.pass = r.max_covariance_error <= kCorrelationTolerance && r.max_gamma_error <= kCorrelationTolerance;
  return r;
}

namespace {

void mean_and_error(const std::vector<OrbitSample>& s, int n, cplx& mean, double& err) {
  mean = 0.0;
  for (int k = 0; k < n; ++k) mean += s[k].value;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (int k = 0; k < n; ++k) ss += std::norm(s[k].value - mean);
  err = n > 1 ? std::sqrt(ss / (static_cast<double>(n) * (n - 1))) : 0.0;
}

}  // namespace

OrbitReport orbit_average(const Lattice& lat, const ModelParams& params, int x, int y, int n_samples,
                          std::uint64_t seed, int n_direct, const Progress& progress) {
  if (n_samples < 2) throw Error(ErrorKind::InvalidArgument, "orbit average needs at least 2 samples");
  if (n_direct < 0 || n_direct > n_samples) throw Error(ErrorKind::InvalidArgument, "n_direct out of range");
  OrbitReport r;
  r.dim = lat.dim();
  r.half_side = lat.half_side();
  r.params = params;
  r.x = x;
  r.y = y;
  r.seed = seed;
  const GroundModel base = solve_ground(lat, params, zero_field(lat));
  r.fixed_gauge_value = cooper_correlation(base, x, y);
  r.onsite_value = cooper_correlation(base, x, x);
  r.analytic = x == y ? r.fixed_gauge_value : cplx(0.0);

  constexpr int kConvergenceBase = 20;
  constexpr int kConvergenceSteps = 8;  // n = 20 .. 2560
  const int n_total = std::max(n_samples, kConvergenceBase << (kConvergenceSteps - 1));
  std::vector<OrbitSample> all;
  all.reserve(n_total);
  for (int k = 0; k < n_total; ++k) {
    const SitePhases phi = random_phases(lat, seed + static_cast<std::uint64_t>(k));
    all.push_back({k, phi.phi[x], phi.phi[y], std::polar(1.0, phase_angle_pair(phi, x, y)) * r.fixed_gauge_value});
  }
  r.samples.assign(all.begin(), all.begin() + n_samples);
  mean_and_error(all, n_samples, r.mean, r.std_error);

  std::vector<double> lx;
  std::vector<double> ly;
  for (int j = 0; j < kConvergenceSteps; ++j) {
    ConvergenceRow row;
    row.n = kConvergenceBase << j;
    mean_and_error(all, row.n, row.mean, row.std_error);
    if (row.std_error > 0.0) {
      lx.push_back(std::log(static_cast<double>(row.n)));
      ly.push_back(std::log(row.std_error));
    }
    r.convergence.push_back(row);
  }
  if (lx.size() >= 2) {
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(lx.size());
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(ly.size());
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      num += (lx[i] - mx) * (ly[i] - my);
      den += (lx[i] - mx) * (lx[i] - mx);
    }
    r.convergence_slope = num / den;
  }

  for (int k = 0; k < n_direct; ++k) {
    const SitePhases phi = random_phases(lat, seed + static_cast<std::uint64_t>(k));
    const GroundModel m = solve_ground(lat, params, pure_gauge(lat, phi));
    OrbitDirectCheck d;
    d.index = k;
    d.law_value = all[k].value;
    d.ed_value = cooper_correlation(m, x, y);
    d.error = std::abs(d.ed_value - d.law_value);
    d.onsite_value = cooper_correlation(m, x, x);
    r.max_direct_error = std::max(r.max_direct_error, d.error);
    r.max_onsite_deviation = std::max(r.max_onsite_deviation, std::abs(d.onsite_value - r.onsite_value));
    r.direct.push_back(d);
    if (progress) progress(k + 1, n_direct);
  }

  const bool statistics_ok =
      x == y ? std::abs(r.mean - r.fixed_gauge_value) <= kCorrelationTolerance : std::abs(r.mean) <= 4.0 * r.std_error;
  r.pass = statistics_ok && r.max_direct_error <= kCorrelationTolerance &&
           r.max_onsite_deviation <= kCorrelationTolerance;
  return r;
}

std::vector<Path> candidate_paths(const Lattice& lat, int x, int y) {
  if (x == y) throw Error(ErrorKind::InvalidPath, "string paths need distinct endpoints");
  const int d = lat.dim();
  const int side = lat.side();
  std::vector<int> fwd(d);
  for (int i = 0; i < d; ++i) fwd[i] = ((lat.coords(y)[i] - lat.coords(x)[i]) % side + side) % side;

  using Steps = std::vector<Path::Step>;
  auto leg = [&](Steps& out, int axis, bool long_way, bool prefer_back) {
    if (fwd[axis] == 0) return;
    const int back = side - fwd[axis];
    bool forward = fwd[axis] < back || (fwd[axis] == back && !prefer_back);
    if (long_way) forward = !forward;
    const int count = forward ? fwd[axis] : back;
    for (int k = 0; k < count; ++k) out.push_back({axis, forward});
  };
  int first = 0;
  while (fwd[first] == 0) ++first;

  std::vector<Steps> variants;
  Steps a;
  for (int i = 0; i < d; ++i) leg(a, i, false, false);
  variants.push_back(a);
  Steps b;
  for (int i = d - 1; i >= 0; --i) leg(b, i, false, true);
  variants.push_back(b);
  Steps c;
  for (int i = 0; i < d; ++i) leg(c, i, i == first, false);
  variants.push_back(c);
  Steps wind(static_cast<std::size_t>(side), Path::Step{0, true});
  wind.insert(wind.end(), a.begin(), a.end());
  variants.push_back(wind);
  for (int j = 0; j < d; ++j) {
    if (fwd[j] != 0) continue;
    Steps detour{{j, true}};
    detour.insert(detour.end(), a.begin(), a.end());
    detour.push_back({j, false});
    variants.push_back(detour);
    break;
  }

  std::vector<Path> out;
  std::set<std::string> seen;
  for (Steps& s : variants) {
    Path p(lat, x, std::move(s));
    if (seen.insert(describe_path(p)).second) out.push_back(std::move(p));
  }
  return out;
}

std::string describe_path(const Path& p) {
  std::string s;
  for (const Path::Step& st : p.steps()) {
    s += st.forward ? '+' : '-';
    s += std::to_string(st.axis + 1);
  }
  return s;
}

StringReport check_strings(const Lattice& lat, const ModelParams& params,
                           const std::vector<std::pair<int, int>>& pairs, std::uint64_t seed) {
  StringReport r;
  r.dim = lat.dim();
  r.half_side = lat.half_side();
  r.params = params;
  r.seed = seed;
  const GroundModel base = solve_ground(lat, params, zero_field(lat));
  const GaugeField tilde = pure_gauge(lat, random_phases(lat, seed));
  const GroundModel m = solve_ground(lat, params, tilde);
  for (const auto& [x, y] : pairs) {
    const cplx reference = cooper_correlation(base, x, y);
    const std::vector<Path> paths = candidate_paths(lat, x, y);
    for (std::size_t k = 0; k < paths.size(); ++k) {
      StringRow row;
      row.x = x;
      row.y = y;
      row.path_index = static_cast<int>(k);
      row.path = describe_path(paths[k]);
      row.value = string_correlation(m, lat, tilde, paths[k], x, y);
      row.reference = reference;
      row.error = std::abs(row.value - reference);
      r.max_error = std::max(r.max_error, row.error);
      r.rows.push_back(std::move(row));
    }
  }
  r.pass = !r.rows.empty() && r.max_error <= kCorrelationTolerance;
  return r;
}

IdentitySuite run_identities(const Lattice& lat, const std::vector<ModelParams>& param_sets, int n_seeds,
                             std::uint64_t seed) {
  IdentitySuite s;
  s.dim = lat.dim();
  s.half_side = lat.half_side();
  for (std::size_t p = 0; p < param_sets.size(); ++p) {
    param_sets[p].validate();
    for (int k = 0; k < n_seeds; ++k) {
      const std::uint64_t fs = seed + static_cast<std::uint64_t>(k);
      const GaugeField tilde = random_field(lat, fs);
      for (IdentityKind kind : kAllIdentityKinds) {
        IdentityRow row{static_cast<int>(p), param_sets[p], fs, verify_identity(lat, param_sets[p], tilde, kind)};
        s.max_error = std::max(s.max_error, row.report.max_error);
        s.rows.push_back(row);
      }
    }
  }
  s.pass = !s.rows.empty() && std::all_of(s.rows.begin(), s.rows.end(), [](const IdentityRow& r) { return r.report.pass; });
  return s;
}

}  // namespace fluxlab
