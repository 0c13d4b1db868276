#pragma once

#include <limits>
#include <map>
#include <string>
#include <vector>

#include "fluxlab/fock.hpp"
#include "fluxlab/model.hpp"

namespace fluxlab {

/// Eigenvalues of a dense Hermitian matrix (LAPACK zheevd_2stage), ascending.
/// Throws Error{EigensolverFailure}.
[[nodiscard]] Eigen::VectorXd eigvalsh(Eigen::MatrixXcd a);

struct EigenSystem {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;  ///< columns, orthonormal
};
[[nodiscard]] EigenSystem eigh(Eigen::MatrixXcd a);

/// How diagonalize() splits the Fock space.
enum class Reduction {
  Auto,     ///< Spin when the bundle is flagged spin symmetric, else Sectors
  Sectors,  ///< one dense block per (N_up, N_down)
  Spin,     ///< highest-weight (N, S) blocks, mirrored across half filling when allowed
};

struct SpectralBlock {
  int n_up = 0;  ///< sector holding the block (the S_z = S sector for spin blocks)
  int n_down = 0;
  int twice_spin = -1;    ///< 2S for spin blocks, -1 for a plain sector
  int multiplicity = 1;   ///< copies of each eigenvalue in the full spectrum
  bool mirrored = false;  ///< eigenvalues taken from the particle-hole partner block
  std::vector<double> eigs;  ///< ascending, classical shift included
};

struct SpectralData {
  int num_sites = 0;
  double shift = 0.0;
  std::vector<SpectralBlock> blocks;
  double e0 = 0.0;
  double e_max = 0.0;
  double ground_tolerance = 0.0;
  long long degeneracy = 0;

  /// Sum of block sizes times multiplicities; equals 4^sites.
  [[nodiscard]] long long dimension() const;
  /// Per-(N_up, N_down) eigenvalue lists, reconstructed from spin blocks if needed.
  [[nodiscard]] std::map<SectorKey, std::vector<double>> sector_eigs() const;
  /// Whole spectrum with multiplicity, ascending.
  [[nodiscard]] std::vector<double> all_eigs() const;
};

/// max(1e-9, 1e-9 * width).
[[nodiscard]] double ground_tolerance_for(double width) noexcept;

/// Full spectrum of a bundle. Throws Error{NotBlockDiagonal} when a term changes
/// N_up or N_down, Error{NotHermitian} when a block fails the Hermiticity check.
[[nodiscard]] SpectralData diagonalize(const HamiltonianBundle& h, Reduction reduction = Reduction::Auto);

/// log Tr exp(-beta H) by log-sum-exp in fixed block order.
[[nodiscard]] double log_partition(const SpectralData& spec, double beta);

/// A vector living in one (N_up, N_down) sector.
struct SectorVector {
  SectorKey sector;
  Eigen::VectorXcd v;
};

/// Orthonormal basis of the ground space.
struct GroundSpace {
  int num_sites = 0;
  double e0 = 0.0;
  double tolerance = 0.0;
  std::vector<SectorVector> states;
};

/// Ground vectors of the bundle; `spec` must come from diagonalize(h).
/// Throws Error{DegenerateToleranceAmbiguity} when halving the tolerance
/// changes the ground-state count.
[[nodiscard]] GroundSpace ground_space(const HamiltonianBundle& h, const SpectralData& spec);

struct ObservableValue {
  cplx value;
  double beta = std::numeric_limits<double>::infinity();
  std::string gauge_tag;
};

/// Uniform average of <psi|O|psi> over the ground space (the beta -> infinity
/// Gibbs limit).
[[nodiscard]] ObservableValue ground_expectation(const GroundSpace& gs, const TermList& observable);
[[nodiscard]] ObservableValue ground_expectation(const GroundSpace& gs, const FockOperator& observable);
/// Tr(O e^{-beta H}) / Tr e^{-beta H} from plain sector eigenvectors.
[[nodiscard]] ObservableValue thermal_expectation(const HamiltonianBundle& h, const TermList& observable, double beta);

/// Eigenvalues of one plain (N_up, N_down) sector, ascending, shift included.
[[nodiscard]] std::vector<double> sector_spectrum(const HamiltonianBundle& h, SectorKey sector);

/// Eigenvalues of one highest-weight (N, S) block, ascending, shift included.
/// Requires a spin-symmetric bundle.
[[nodiscard]] std::vector<double> block_spectrum(const HamiltonianBundle& h, int total, int twice_spin);

/// Worker threads for block-parallel solves; 0 keeps the runtime default.
void set_num_threads(int n);

}  // namespace fluxlab
