#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fluxlab/gauge.hpp"
#include "fluxlab/lattice.hpp"
#include "fluxlab/model.hpp"
#include "fluxlab/spectral.hpp"
#include "fluxlab/transforms.hpp"

namespace fluxlab {

inline constexpr double kMarginTolerance = 1e-10;
inline constexpr double kCorrelationTolerance = 1e-10;

/// Called after each finished unit of work with (done, total).
using Progress = std::function<void(int, int)>;

enum class SampleKind { Zero, PureGauge, Random };
[[nodiscard]] std::string_view to_string(SampleKind k) noexcept;

/// Fermionic spectrum summary of one barred field.
struct FieldSample {
  SampleKind kind = SampleKind::Random;
  std::uint64_t seed = 0;
  std::vector<double> log_z;  ///< one per beta
  double e0 = 0.0;
  long long degeneracy = 0;
};

/// Spectra of the zero field, one pure-gauge field (phases from seed + n) and
/// n random fields (seeds seed .. seed + n - 1). Shared by the theorem and the
/// ground-energy checks.
struct FieldScan {
  int dim = 0;
  int half_side = 0;
  ModelParams params;
  std::vector<double> betas;
  std::uint64_t seed = 0;
  std::vector<FieldSample> samples;  ///< zero first, pure gauge second, then random in seed order
};

[[nodiscard]] FieldScan scan_fields(const Lattice& lat, const ModelParams& params, int n_samples,
                                    const std::vector<double>& betas, std::uint64_t seed, const Progress& progress = {});

struct TheoremRow {
  SampleKind kind = SampleKind::Random;
  std::uint64_t seed = 0;
  double beta = 0.0;
  double log_z_tilde = 0.0;
  double log_z_zero = 0.0;
  double margin = 0.0;  ///< log Z(0) - log Z(tilde)
};

struct TheoremReport {
  int dim = 0;
  int half_side = 0;
  bool below_theorem_dimension = false;
  ModelParams params;
  std::vector<double> betas;
  std::vector<TheoremRow> rows;
  double min_margin = 0.0;       ///< over zero and random samples
  double max_control_abs = 0.0;  ///< |margin| of the pure-gauge sample
  bool pass = false;
};

[[nodiscard]] TheoremReport theorem_report(const FieldScan& scan);
[[nodiscard]] TheoremReport check_trace_inequality(const Lattice& lat, const ModelParams& params, int n_samples,
                                           const std::vector<double>& betas, std::uint64_t seed,
                                           const Progress& progress = {});

struct GroundEnergyRow {
  SampleKind kind = SampleKind::Random;
  std::uint64_t seed = 0;
  double e0_tilde = 0.0;
  double e0_zero = 0.0;
  double gap = 0.0;  ///< E0(tilde) - E0(0)
};

struct GroundEnergyReport {
  int dim = 0;
  int half_side = 0;
  bool below_theorem_dimension = false;
  ModelParams params;
  std::vector<GroundEnergyRow> rows;
  double min_gap = 0.0;          ///< over random samples
  double max_control_abs = 0.0;  ///< |gap| of the pure-gauge sample
  bool pass = false;
};

[[nodiscard]] GroundEnergyReport ground_energy_report(const FieldScan& scan);
[[nodiscard]] GroundEnergyReport check_ground_energy(const Lattice& lat, const ModelParams& params, int n_samples,
                                                     std::uint64_t seed, const Progress& progress = {});

/// Fermionic Hamiltonian at one field with its spectrum and ground space.
struct GroundModel {
  HamiltonianBundle h;
  SpectralData spec;
  GroundSpace ground;
};

[[nodiscard]] GroundModel solve_ground(const Lattice& lat, const ModelParams& params, const GaugeField& tilde);

/// omega_0(a+_{x,up} a+_{x,dn} a_{y,dn} a_{y,up}).
[[nodiscard]] cplx cooper_correlation(const GroundModel& m, int x, int y);
[[nodiscard]] cplx cooper_correlation(const Lattice& lat, const ModelParams& params, const GaugeField& tilde, int x,
                                      int y);
/// Cooper correlation dressed with the scalar string phase exp(2i tA[path]).
/// Throws Error{InvalidPath} if the path does not run from x to y.
[[nodiscard]] cplx string_correlation(const GroundModel& m, const Lattice& lat, const GaugeField& tilde,
                                      const Path& path, int x, int y);

struct CovarianceRow {
  std::uint64_t seed = 0;
  int x = 0;
  int y = 0;
  cplx value;      ///< direct ED at tilde = d phi
  cplx predicted;  ///< exp(-2i(phi_x - phi_y)) * value at tilde = 0
  double error = 0.0;
};

struct CorrelationReport {
  int dim = 0;
  int half_side = 0;
  ModelParams params;
  std::vector<std::pair<int, int>> pairs;
  std::vector<cplx> fixed_gauge_values;  ///< at tilde = 0, one per pair
  std::vector<cplx> gamma_values;        ///< omega_0(G1_x G1_y), one per pair
  std::vector<CovarianceRow> covariance;
  double max_covariance_error = 0.0;
  double max_gamma_error = 0.0;  ///< |Re omega(G1 G1) - 2 Re omega(P+ P)| over x != y
  bool pass = false;
};

/// Phase covariance of the Cooper correlation under n seeded pure-gauge
/// fields (phases from seed .. seed + n - 1).
[[nodiscard]] CorrelationReport check_correlations(const Lattice& lat, const ModelParams& params,
                                                   const std::vector<std::pair<int, int>>& pairs, int n_fields,
                                                   std::uint64_t seed, const Progress& progress = {});

struct OrbitSample {
  int index = 0;
  double phi_x = 0.0;
  double phi_y = 0.0;
  cplx value;
};

struct OrbitDirectCheck {
  int index = 0;
  cplx law_value;
  cplx ed_value;
  double error = 0.0;
  cplx onsite_value;  ///< omega_0(P+_x P_x) at the same field
};

struct ConvergenceRow {
  int n = 0;
  cplx mean;
  double std_error = 0.0;
};

struct OrbitReport {
  int dim = 0;
  int half_side = 0;
  ModelParams params;
  int x = 0;
  int y = 0;
  std::uint64_t seed = 0;
  cplx fixed_gauge_value;  ///< tilde = 0
  cplx onsite_value;       ///< omega_0(P+_x P_x) at tilde = 0
  cplx analytic;           ///< 0 for x != y, the fixed-gauge value for x = y
  std::vector<OrbitSample> samples;
  cplx mean;
  double std_error = 0.0;
  std::vector<OrbitDirectCheck> direct;
  double max_direct_error = 0.0;
  double max_onsite_deviation = 0.0;
  std::vector<ConvergenceRow> convergence;
  double convergence_slope = 0.0;  ///< fitted d log(std_error) / d log n
  bool pass = false;
};

/// Average over uniform site phases. The headline estimate uses the covariance
/// law on n_samples phase draws; n_direct of them are re-solved by full ED.
/// The convergence table doubles n from 20 over two decades.
[[nodiscard]] OrbitReport orbit_average(const Lattice& lat, const ModelParams& params, int x, int y, int n_samples,
                                        std::uint64_t seed, int n_direct = 8, const Progress& progress = {});

/// At least three distinct walks from x to y (x != y).
[[nodiscard]] std::vector<Path> candidate_paths(const Lattice& lat, int x, int y);

struct StringRow {
  int x = 0;
  int y = 0;
  int path_index = 0;
  std::string path;  ///< steps as "+1-2..." with 1-based axes
  cplx value;
  cplx reference;  ///< Cooper correlation at tilde = 0
  double error = 0.0;
};

struct StringReport {
  int dim = 0;
  int half_side = 0;
  ModelParams params;
  std::uint64_t seed = 0;
  std::vector<StringRow> rows;
  double max_error = 0.0;
  bool pass = false;
};

/// String correlations under the pure-gauge field with phases from `seed`, for
/// every candidate path of every pair, against the tilde = 0 correlation.
[[nodiscard]] StringReport check_strings(const Lattice& lat, const ModelParams& params,
                                         const std::vector<std::pair<int, int>>& pairs, std::uint64_t seed);

struct IdentityRow {
  int param_set = 0;
  ModelParams params;
  std::uint64_t seed = 0;
  IdentityReport report;
};

struct IdentitySuite {
  int dim = 0;
  int half_side = 0;
  std::vector<IdentityRow> rows;
  double max_error = 0.0;
  bool pass = false;
};

[[nodiscard]] IdentitySuite run_identities(const Lattice& lat, const std::vector<ModelParams>& param_sets,
                                           int n_seeds, std::uint64_t seed);

[[nodiscard]] std::string describe_path(const Path& p);

}  // namespace fluxlab
