#include "fluxlab/fock.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fluxlab/error.hpp"

namespace fluxlab {

TermList& TermList::operator+=(const TermList& other) {
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  return *this;
}

TermList& TermList::operator*=(cplx s) {
  for (Term& t : terms_) t.coeff *= s;
  return *this;
}

bool TermList::conserves_spin_numbers() const {
  for (const Term& t : terms_) {
    int balance[2] = {0, 0};
    for (const Ladder& op : t.ops) balance[op.mode & 1] += op.dagger ? 1 : -1;
    if (balance[0] != 0 || balance[1] != 0) return false;
  }
  return true;
}

TermList operator+(TermList a, const TermList& b) {
  a += b;
  return a;
}

TermList operator*(cplx s, TermList a) {
  a *= s;
  return a;
}

TermList operator*(const TermList& a, const TermList& b) {
  TermList out;
  for (const Term& x : a.terms()) {
    for (const Term& y : b.terms()) {
      std::vector<Ladder> ops = x.ops;
      ops.insert(ops.end(), y.ops.begin(), y.ops.end());
      out.add(x.coeff * y.coeff, std::move(ops));
    }
  }
  return out;
}

TermList adjoint(const TermList& a) {
  TermList out;
  for (const Term& t : a.terms()) {
    std::vector<Ladder> ops(t.ops.rbegin(), t.ops.rend());
    for (Ladder& op : ops) op.dagger = !op.dagger;
    out.add(std::conj(t.coeff), std::move(ops));
  }
  return out;
}

TermList spin_mirror(const TermList& a) {
  TermList out;
  for (const Term& t : a.terms()) {
    std::vector<Ladder> ops = t.ops;
    for (Ladder& op : ops) op.mode ^= 1;
    out.add(std::conj(t.coeff), std::move(ops));
  }
  return out;
}

FockOperator::FockOperator(int num_modes, SparseMatrix matrix) : num_modes_(num_modes), matrix_(std::move(matrix)) {
  const Eigen::Index dim = Eigen::Index{1} << num_modes;
  if (matrix_.rows() != dim || matrix_.cols() != dim)
    throw Error(ErrorKind::InvalidArgument, "matrix size does not match the number of modes");
  matrix_.makeCompressed();
}

double FockOperator::max_abs() const {
  double m = 0.0;
  for (Eigen::Index k = 0; k < matrix_.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(matrix_, k); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

bool FockOperator::is_hermitian(double rel_tol) const {
  const SparseMatrix diff = matrix_ - SparseMatrix(matrix_.adjoint());
  double worst = 0.0;
  for (Eigen::Index k = 0; k < diff.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  return worst <= rel_tol * max_abs();
}

namespace {

void require_same_space(const FockOperator& a, const FockOperator& b) {
  if (a.num_modes() != b.num_modes())
    throw Error(ErrorKind::InvalidArgument, "operators act on different Fock spaces");
}

void require_cap(int num_modes) {
  if (num_modes < 0 || num_modes > kFullSpaceModeCap) {
    throw Error(ErrorKind::SizeExceedsCap, std::to_string(num_modes) + " modes exceed the full-space cap of " +
                                               std::to_string(kFullSpaceModeCap));
  }
}

}  // namespace

FockOperator& FockOperator::operator+=(const FockOperator& o) {
  require_same_space(*this, o);
  matrix_ += o.matrix_;
  return *this;
}

FockOperator& FockOperator::operator-=(const FockOperator& o) {
  require_same_space(*this, o);
  matrix_ -= o.matrix_;
  return *this;
}

FockOperator operator+(FockOperator a, const FockOperator& b) {
  a += b;
  return a;
}

FockOperator operator-(FockOperator a, const FockOperator& b) {
  a -= b;
  return a;
}

FockOperator operator*(const FockOperator& a, const FockOperator& b) {
  require_same_space(a, b);
  return FockOperator(a.num_modes(), SparseMatrix(a.matrix() * b.matrix()));
}

FockOperator operator*(cplx s, const FockOperator& a) {
  return FockOperator(a.num_modes(), SparseMatrix(s * a.matrix()));
}

FockOperator adjoint(const FockOperator& a) {
  return FockOperator(a.num_modes(), SparseMatrix(a.matrix().adjoint()));
}

FockOperator anticommutator(const FockOperator& a, const FockOperator& b) { return a * b + b * a; }

FockOperator commutator(const FockOperator& a, const FockOperator& b) { return a * b - b * a; }

double max_abs_diff(const FockOperator& a, const FockOperator& b) { return (a - b).max_abs(); }

FockOperator identity(int num_modes) {
  require_cap(num_modes);
  const Eigen::Index dim = Eigen::Index{1} << num_modes;
  SparseMatrix m(dim, dim);
  m.setIdentity();
  return FockOperator(num_modes, std::move(m));
}

FockOperator zero_operator(int num_modes) {
  require_cap(num_modes);
  const Eigen::Index dim = Eigen::Index{1} << num_modes;
  return FockOperator(num_modes, SparseMatrix(dim, dim));
}

namespace {

FockOperator single_ladder(int num_modes, ModeIndex mode, bool dagger) {
  require_cap(num_modes);
  if (mode.id() < 0 || mode.id() >= num_modes) throw Error(ErrorKind::InvalidArgument, "mode index out of range");
  TermList t;
  t.add(1.0, {{mode.id(), dagger}});
  return materialize(t, num_modes);
}

}  // namespace

FockOperator create(int num_modes, ModeIndex mode) { return single_ladder(num_modes, mode, true); }

FockOperator annihilate(int num_modes, ModeIndex mode) { return single_ladder(num_modes, mode, false); }

FockOperator number(int num_modes, ModeIndex mode) {
  require_cap(num_modes);
  if (mode.id() < 0 || mode.id() >= num_modes) throw Error(ErrorKind::InvalidArgument, "mode index out of range");
  TermList t;
  t.add(1.0, {{mode.id(), true}, {mode.id(), false}});
  return materialize(t, num_modes);
}

FockOperator total_number(int num_modes, Spin spin) {
  require_cap(num_modes);
  TermList t;
  for (int m = static_cast<int>(spin); m < num_modes; m += 2) t.add(1.0, {{m, true}, {m, false}});
  return materialize(t, num_modes);
}

FockOperator materialize(const TermList& terms, int num_modes) {
  require_cap(num_modes);
  for (const Term& t : terms.terms())
    for (const Ladder& op : t.ops)
      if (op.mode < 0 || op.mode >= num_modes) throw Error(ErrorKind::InvalidArgument, "mode index out of range");
  const Eigen::Index dim = Eigen::Index{1} << num_modes;
  std::vector<Eigen::Triplet<cplx>> triplets;
  for (FockState in = 0; in < static_cast<FockState>(dim); ++in) {
    for (const Term& t : terms.terms()) {
      FockState out = 0;
      const cplx amp = t.apply(in, out);
      if (amp != cplx{0.0, 0.0})
        triplets.emplace_back(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(in), amp);
    }
  }
  SparseMatrix m(dim, dim);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.prune(cplx{0.0, 0.0}, 0.0);
  return FockOperator(num_modes, std::move(m));
}

std::int64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t r = 1;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

namespace {

std::vector<std::uint32_t> patterns(int n, int k) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t p = 0; p < (std::uint32_t{1} << n); ++p)
    if (std::popcount(p) == k) out.push_back(p);
  return out;
}

FockState interleave(std::uint32_t up, std::uint32_t down, int n) {
  FockState s = 0;
  for (int x = 0; x < n; ++x) {
    if ((up >> x) & 1U) s |= FockState{1} << (2 * x);
    if ((down >> x) & 1U) s |= FockState{1} << (2 * x + 1);
  }
  return s;
}

}  // namespace

SectorBasis::SectorBasis(int num_sites, int n_up, int n_down) : n_(num_sites), n_up_(n_up), n_down_(n_down) {
  if (num_sites < 0 || 2 * num_sites > 62) throw Error(ErrorKind::InvalidArgument, "too many sites for a sector basis");
  if (n_up < 0 || n_up > num_sites || n_down < 0 || n_down > num_sites)
    throw Error(ErrorKind::InvalidArgument, "particle numbers out of range");
  binom_.assign(num_sites + 1, std::vector<std::int64_t>(num_sites + 2, 0));
  for (int a = 0; a <= num_sites; ++a)
    for (int b = 0; b <= num_sites + 1; ++b) binom_[a][b] = binomial(a, b);
  const auto ups = patterns(num_sites, n_up);
  const auto downs = patterns(num_sites, n_down);
  states_.reserve(ups.size() * downs.size());
  for (std::uint32_t u : ups)
    for (std::uint32_t d : downs) states_.push_back(interleave(u, d, num_sites));
}

Eigen::Index SectorBasis::index(FockState s) const {
  std::int64_t rank_up = 0;
  std::int64_t rank_down = 0;
  int seen_up = 0;
  int seen_down = 0;
  for (int x = 0; x < n_; ++x) {
    if ((s >> (2 * x)) & 1U) rank_up += binom_[x][++seen_up];
    if ((s >> (2 * x + 1)) & 1U) rank_down += binom_[x][++seen_down];
  }
  if (seen_up != n_up_ || seen_down != n_down_ || (s >> (2 * n_)) != 0)
    throw Error(ErrorKind::InvalidArgument, "state is outside the sector");
  return static_cast<Eigen::Index>(rank_up * binom_[n_][n_down_] + rank_down);
}

bool SectorBasis::contains(FockState s) const noexcept {
  constexpr FockState kUpMask = 0x5555555555555555ULL;
  if (n_ < 32 && (s >> (2 * n_)) != 0) return false;
  return std::popcount(s & kUpMask) == n_up_ && std::popcount(s & ~kUpMask) == n_down_;
}

TermList number_conserving_part(const TermList& terms) {
  TermList out;
  for (const Term& t : terms.terms()) {
    TermList one{t};
    if (one.conserves_spin_numbers()) out += one;
  }
  return out;
}

Eigen::VectorXcd transfer(const TermList& terms, const SectorBasis& from, const Eigen::VectorXcd& v,
                          const SectorBasis& to) {
  if (v.size() != from.size()) throw Error(ErrorKind::InvalidArgument, "vector does not match its sector");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(to.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] == cplx{0.0, 0.0}) continue;
    for (const Term& t : terms.terms()) {
      FockState target = 0;
      const cplx amp = t.apply(from.state(i), target);
      if (amp == cplx{0.0, 0.0} || !to.contains(target)) continue;
      out[to.index(target)] += amp * v[i];
    }
  }
  return out;
}

SparseMatrix sector_matrix(const TermList& terms, const SectorBasis& basis) {
  if (!terms.conserves_spin_numbers())
    throw Error(ErrorKind::NotBlockDiagonal, "term list does not conserve N_up and N_down");
  std::vector<Eigen::Triplet<cplx>> triplets;
  for (Eigen::Index col = 0; col < basis.size(); ++col) {
    const FockState in = basis.state(col);
    for (const Term& t : terms.terms()) {
      FockState out = 0;
      const cplx amp = t.apply(in, out);
      if (amp != cplx{0.0, 0.0}) triplets.emplace_back(basis.index(out), col, amp);
    }
  }
  SparseMatrix m(basis.size(), basis.size());
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.prune(cplx{0.0, 0.0}, 0.0);
  return m;
}

Eigen::VectorXcd apply_terms(const TermList& terms, const Eigen::VectorXcd& v) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
  for (Eigen::Index in = 0; in < v.size(); ++in) {
    if (v[in] == cplx{0.0, 0.0}) continue;
    for (const Term& t : terms.terms()) {
      FockState target = 0;
      const cplx amp = t.apply(static_cast<FockState>(in), target);
      if (amp == cplx{0.0, 0.0}) continue;
      if (static_cast<Eigen::Index>(target) >= v.size())
        throw Error(ErrorKind::InvalidArgument, "term acts outside the vector's Fock space");
      out[static_cast<Eigen::Index>(target)] += amp * v[in];
    }
  }
  return out;
}

namespace {

SectorKey sector_of(FockState s) {
  constexpr FockState kUpMask = 0x5555555555555555ULL;
  return {std::popcount(s & kUpMask), std::popcount(s & ~kUpMask)};
}

}  // namespace

std::map<SectorKey, Eigen::MatrixXcd> sector_split(const FockOperator& op, double tol) {
  const int n = op.num_modes() / 2;
  if (op.num_modes() % 2 != 0) throw Error(ErrorKind::InvalidArgument, "odd number of modes");
  std::map<SectorKey, SectorBasis> bases;
  std::map<SectorKey, Eigen::MatrixXcd> blocks;
  for (int nu = 0; nu <= n; ++nu) {
    for (int nd = 0; nd <= n; ++nd) {
      SectorBasis basis(n, nu, nd);
      blocks.emplace(SectorKey{nu, nd}, Eigen::MatrixXcd::Zero(basis.size(), basis.size()));
      bases.emplace(SectorKey{nu, nd}, std::move(basis));
    }
  }
  const SparseMatrix& m = op.matrix();
  for (Eigen::Index col = 0; col < m.outerSize(); ++col) {
    const SectorKey kc = sector_of(static_cast<FockState>(col));
    for (SparseMatrix::InnerIterator it(m, col); it; ++it) {
      const SectorKey kr = sector_of(static_cast<FockState>(it.row()));
      if (kr != kc) {
        if (std::abs(it.value()) > tol)
          throw Error(ErrorKind::NotBlockDiagonal, "operator does not commute with N_up and N_down");
        continue;
      }
      const SectorBasis& b = bases.at(kc);
      blocks.at(kc)(b.index(static_cast<FockState>(it.row())), b.index(static_cast<FockState>(col))) = it.value();
    }
  }
  return blocks;
}

FockOperator assemble(int num_modes, const std::map<SectorKey, Eigen::MatrixXcd>& blocks) {
  require_cap(num_modes);
  if (num_modes % 2 != 0) throw Error(ErrorKind::InvalidArgument, "odd number of modes");
  const int n = num_modes / 2;
  const Eigen::Index dim = Eigen::Index{1} << num_modes;
  std::vector<Eigen::Triplet<cplx>> triplets;
  for (const auto& [key, block] : blocks) {
    SectorBasis basis(n, key.first, key.second);
    if (block.rows() != basis.size() || block.cols() != basis.size())
      throw Error(ErrorKind::InvalidArgument, "block size does not match its sector");
    for (Eigen::Index c = 0; c < block.cols(); ++c)
      for (Eigen::Index r = 0; r < block.rows(); ++r)
        if (block(r, c) != cplx{0.0, 0.0})
          triplets.emplace_back(static_cast<Eigen::Index>(basis.state(r)), static_cast<Eigen::Index>(basis.state(c)),
                                block(r, c));
  }
  SparseMatrix m(dim, dim);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return FockOperator(num_modes, std::move(m));
}

}  // namespace fluxlab
