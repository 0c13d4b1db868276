#pragma once

#include <Eigen/Dense>
#include <bit>
#include <Eigen/Sparse>
#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace fluxlab {

using cplx = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<cplx>;

/// Occupation bitmask: bit m set iff mode m is occupied.
using FockState = std::uint64_t;

enum class Spin : int { Up = 0, Down = 1 };

/// Mode id = 2 * site + (0 for up, 1 for down).
struct ModeIndex {
  int site = 0;
  Spin spin = Spin::Up;
  [[nodiscard]] constexpr int id() const noexcept { return 2 * site + static_cast<int>(spin); }
};

[[nodiscard]] constexpr int mode_id(int site, Spin spin) noexcept { return ModeIndex{site, spin}.id(); }

/// Single creation (dagger = true) or annihilation operator.
struct Ladder {
  int mode = 0;
  bool dagger = false;
};

[[nodiscard]] inline Ladder cdag(int site, Spin s) { return {mode_id(site, s), true}; }
[[nodiscard]] inline Ladder c(int site, Spin s) { return {mode_id(site, s), false}; }

/// Applies one ladder operator in place. Returns the fermionic sign
/// (-1)^{#occupied modes below the mode}, or 0 when the result vanishes.
[[nodiscard]] inline int apply_ladder(FockState& state, Ladder op) noexcept {
  const FockState bit = FockState{1} << op.mode;
  const bool occupied = (state & bit) != 0;
  if (occupied == op.dagger) return 0;
  const int below = std::popcount(state & (bit - 1));
  state ^= bit;
  return (below & 1) ? -1 : 1;
}

/// coeff * ops[0] ops[1] ... ops[k-1]; the rightmost operator acts first.
struct Term {
  cplx coeff{1.0, 0.0};
  std::vector<Ladder> ops;

  /// Returns the sign-carrying amplitude and writes the image state.
  [[nodiscard]] cplx apply(FockState in, FockState& out) const noexcept {
    out = in;
    int sign = 1;
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
      const int s = apply_ladder(out, *it);
      if (s == 0) return {0.0, 0.0};
      sign *= s;
    }
    return coeff * static_cast<double>(sign);
  }
};

/// Symbolic sum of normal-ordered-or-not operator strings. Builders produce
/// term lists; matrices are materialized on demand, either on the whole Fock
/// space or on a single particle-number sector.
class TermList {
 public:
  TermList() = default;
  TermList(std::initializer_list<Term> terms) : terms_(terms) {}

  void add(cplx coeff, std::vector<Ladder> ops) { terms_.push_back({coeff, std::move(ops)}); }
  TermList& operator+=(const TermList& other);
  TermList& operator*=(cplx s);

  [[nodiscard]] const std::vector<Term>& terms() const noexcept { return terms_; }
  [[nodiscard]] bool empty() const noexcept { return terms_.empty(); }
  [[nodiscard]] std::size_t size() const noexcept { return terms_.size(); }

  /// True when every term has equal numbers of up creators and annihilators,
  /// and likewise for down.
  [[nodiscard]] bool conserves_spin_numbers() const;

 private:
  std::vector<Term> terms_;
};

[[nodiscard]] TermList operator+(TermList a, const TermList& b);
[[nodiscard]] TermList operator*(cplx s, TermList a);
/// Operator product: concatenates strings, multiplies coefficients.
[[nodiscard]] TermList operator*(const TermList& a, const TermList& b);
[[nodiscard]] TermList adjoint(const TermList& a);
/// Antilinear spin mirror: up <-> down on every mode, coefficients conjugated.
[[nodiscard]] TermList spin_mirror(const TermList& a);

/// Sparse complex matrix on the full 2^modes Fock space in the occupation basis.
class FockOperator {
 public:
  FockOperator() = default;
  FockOperator(int num_modes, SparseMatrix matrix);

  [[nodiscard]] int num_modes() const noexcept { return num_modes_; }
  [[nodiscard]] Eigen::Index dim() const noexcept { return matrix_.rows(); }
  [[nodiscard]] const SparseMatrix& matrix() const noexcept { return matrix_; }

  [[nodiscard]] bool is_hermitian(double rel_tol = 1e-13) const;
  /// Largest |entry|; zero for the zero operator.
  [[nodiscard]] double max_abs() const;

  FockOperator& operator+=(const FockOperator& o);
  FockOperator& operator-=(const FockOperator& o);

 private:
  int num_modes_ = 0;
  SparseMatrix matrix_;
};

[[nodiscard]] FockOperator operator+(FockOperator a, const FockOperator& b);
[[nodiscard]] FockOperator operator-(FockOperator a, const FockOperator& b);
[[nodiscard]] FockOperator operator*(const FockOperator& a, const FockOperator& b);
[[nodiscard]] FockOperator operator*(cplx s, const FockOperator& a);
[[nodiscard]] FockOperator adjoint(const FockOperator& a);
[[nodiscard]] FockOperator anticommutator(const FockOperator& a, const FockOperator& b);
[[nodiscard]] FockOperator commutator(const FockOperator& a, const FockOperator& b);
/// max |(a - b)_{ij}|.
[[nodiscard]] double max_abs_diff(const FockOperator& a, const FockOperator& b);

/// Upper bound on the number of modes for full-space materialization.
inline constexpr int kFullSpaceModeCap = 20;

[[nodiscard]] FockOperator identity(int num_modes);
[[nodiscard]] FockOperator zero_operator(int num_modes);
[[nodiscard]] FockOperator create(int num_modes, ModeIndex mode);
[[nodiscard]] FockOperator annihilate(int num_modes, ModeIndex mode);
[[nodiscard]] FockOperator number(int num_modes, ModeIndex mode);
[[nodiscard]] FockOperator total_number(int num_modes, Spin spin);
[[nodiscard]] FockOperator materialize(const TermList& terms, int num_modes);

/// Basis of the sector with fixed (N_up, N_down) on `num_sites` sites.
/// States are ordered by (up pattern, down pattern), each in increasing
/// bitmask order, so that the index is rank(up) * C(n, N_down) + rank(down).
class SectorBasis {
 public:
  SectorBasis(int num_sites, int n_up, int n_down);

  [[nodiscard]] int num_sites() const noexcept { return n_; }
  [[nodiscard]] int n_up() const noexcept { return n_up_; }
  [[nodiscard]] int n_down() const noexcept { return n_down_; }
  [[nodiscard]] Eigen::Index size() const noexcept { return static_cast<Eigen::Index>(states_.size()); }
  [[nodiscard]] FockState state(Eigen::Index k) const { return states_[k]; }
  [[nodiscard]] const std::vector<FockState>& states() const noexcept { return states_; }
  /// Position of a state of this sector in the basis.
  [[nodiscard]] Eigen::Index index(FockState s) const;
  [[nodiscard]] bool contains(FockState s) const noexcept;

 private:
  int n_ = 0;
  int n_up_ = 0;
  int n_down_ = 0;
  std::vector<FockState> states_;
  std::vector<std::vector<std::int64_t>> binom_;
};

using SectorKey = std::pair<int, int>;

[[nodiscard]] std::int64_t binomial(int n, int k);
/// Sector block of a number-conserving term list.
[[nodiscard]] SparseMatrix sector_matrix(const TermList& terms, const SectorBasis& basis);
/// Terms that keep N_up and N_down fixed; the only ones with nonzero
/// sector-diagonal blocks.
[[nodiscard]] TermList number_conserving_part(const TermList& terms);
/// Applies a term list to a vector of sector `from`, keeping the image in `to`.
/// Amplitudes landing outside `to` are dropped.
[[nodiscard]] Eigen::VectorXcd transfer(const TermList& terms, const SectorBasis& from, const Eigen::VectorXcd& v,
                                        const SectorBasis& to);
/// Applies a term list to a full Fock-space vector.
[[nodiscard]] Eigen::VectorXcd apply_terms(const TermList& terms, const Eigen::VectorXcd& v);

/// Splits an operator into dense (N_up, N_down) blocks. Throws
/// Error{NotBlockDiagonal} when it fails to commute with N_up or N_down.
[[nodiscard]] std::map<SectorKey, Eigen::MatrixXcd> sector_split(const FockOperator& op, double tol = 1e-12);
[[nodiscard]] FockOperator assemble(int num_modes, const std::map<SectorKey, Eigen::MatrixXcd>& blocks);

}  // namespace fluxlab
