#include "fluxlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <exception>
#include <string>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "fluxlab/error.hpp"

namespace fluxlab {

Eigen::VectorXd eigvalsh(Eigen::MatrixXcd a) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Eigen::VectorXd w(n);
  if (n == 0) return w;
  // two-stage reduction, eigenvalues only
  const lapack_int info = LAPACKE_zheevd_2stage(LAPACK_COL_MAJOR, 'N', 'U', n, a.data(), n, w.data());
  if (info != 0) throw Error(ErrorKind::EigensolverFailure, "zheevd_2stage returned " + std::to_string(info));
  return w;
}

EigenSystem eigh(Eigen::MatrixXcd a) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  EigenSystem out;
  out.values.resize(n);
  if (n > 0) {
    const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'U', n, a.data(), n, out.values.data());
    if (info != 0) throw Error(ErrorKind::EigensolverFailure, "zheevd returned " + std::to_string(info));
  }
  out.vectors = std::move(a);
  return out;
}

void set_num_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

double ground_tolerance_for(double width) noexcept { return std::max(1e-9, 1e-9 * width); }

long long SpectralData::dimension() const {
  long long total = 0;
  for (const SpectralBlock& b : blocks) total += static_cast<long long>(b.eigs.size()) * b.multiplicity;
  return total;
}

std::map<SectorKey, std::vector<double>> SpectralData::sector_eigs() const {
  std::map<SectorKey, std::vector<double>> out;
  for (const SpectralBlock& b : blocks) {
    if (b.twice_spin < 0) {
      auto& dst = out[{b.n_up, b.n_down}];
      dst.insert(dst.end(), b.eigs.begin(), b.eigs.end());
      continue;
    }
    const int total = b.n_up + b.n_down;
    for (int up = 0; up <= total; ++up) {
      const int down = total - up;
      if (up > num_sites || down > num_sites || std::abs(up - down) > b.twice_spin) continue;
      auto& dst = out[{up, down}];
      dst.insert(dst.end(), b.eigs.begin(), b.eigs.end());
    }
  }
  for (auto& [key, eigs] : out) std::sort(eigs.begin(), eigs.end());
  return out;
}

std::vector<double> SpectralData::all_eigs() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(dimension()));
  for (const SpectralBlock& b : blocks)
    for (int k = 0; k < b.multiplicity; ++k) out.insert(out.end(), b.eigs.begin(), b.eigs.end());
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Orthonormal highest-weight vectors of m spin-1/2 with u spins up, i.e. the
// kernel of S+ on that S_z sector, expanded over the u-up bit strings.
struct SpinKernel {
  std::vector<std::uint32_t> strings;
  Eigen::MatrixXd vecs;
};

SpinKernel make_kernel(int m, int u) {
  SpinKernel k;
  std::vector<int> lookup(std::size_t{1} << m, -1);
  std::vector<std::uint32_t> raised;
  for (std::uint32_t s = 0; s < (std::uint32_t{1} << m); ++s) {
    if (std::popcount(s) == u) k.strings.push_back(s);
    if (std::popcount(s) == u + 1) {
      lookup[s] = static_cast<int>(raised.size());
      raised.push_back(s);
    }
  }
  const Eigen::Index dim = static_cast<Eigen::Index>(k.strings.size());
  if (raised.empty()) {
    k.vecs = Eigen::MatrixXd::Identity(dim, dim);
    return k;
  }
  Eigen::MatrixXd raise = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(raised.size()), dim);
  for (Eigen::Index c = 0; c < dim; ++c)
    for (int j = 0; j < m; ++j)
      if (!((k.strings[c] >> j) & 1U)) raise(lookup[k.strings[c] | (1U << j)], c) = 1.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(raise.transpose() * raise);
  const Eigen::Index expect = dim - static_cast<Eigen::Index>(raised.size());
  Eigen::Index zeros = 0;
  while (zeros < dim && es.eigenvalues()[zeros] < 0.5) ++zeros;
  if (zeros != expect) throw Error(ErrorKind::EigensolverFailure, "spin kernel has unexpected dimension");
  k.vecs = es.eigenvectors().leftCols(zeros);
  return k;
}

class KernelCache {
 public:
  explicit KernelCache(int max_m) : max_m_(max_m) {
    for (int m = 0; m <= max_m; ++m)
      for (int u = 0; u <= m; ++u)
        if (2 * u >= m) table_[{m, u}] = make_kernel(m, u);
  }
  [[nodiscard]] const SpinKernel& get(int m, int u) const { return table_.at({m, u}); }

 private:
  int max_m_;
  std::map<std::pair<int, int>, SpinKernel> table_;
};

struct HighestWeightBasis {
  SectorBasis sector;
  SparseMatrix v;  // sector.size() x block dimension, orthonormal columns
};

// Basis of the states with N particles, total spin S and S_z = S. Each column
// is a charge configuration (doubly occupied set, singly occupied set) times a
// highest-weight spin vector on the singly occupied sites. With modes ordered
// (x,up),(x,down) the on-site spin flip carries no fermionic sign, so the spin
// vectors can be used verbatim.
HighestWeightBasis highest_weight_basis(int n, int total, int twice_spin, const KernelCache& kernels) {
  const int n_up = (total + twice_spin) / 2;
  const int n_down = (total - twice_spin) / 2;
  HighestWeightBasis hw{SectorBasis(n, n_up, n_down), {}};
  std::vector<Eigen::Triplet<cplx>> triplets;
  Eigen::Index col = 0;
  const std::uint32_t all = (std::uint32_t{1} << n) - 1;
  for (int p = 0; 2 * p <= total; ++p) {
    const int m = total - 2 * p;
    if (m < twice_spin || p + m > n) continue;
    const int u = (m + twice_spin) / 2;
    const SpinKernel& ker = kernels.get(m, u);
    const Eigen::Index width = ker.vecs.cols();
    for (std::uint32_t dbl = 0; dbl <= all; ++dbl) {
      if (std::popcount(dbl) != p) continue;
      const std::uint32_t rest = all & ~dbl;
      for (std::uint32_t single = rest;; single = (single - 1) & rest) {
        if (std::popcount(single) == m) {
          std::vector<int> xs;
          for (int x = 0; x < n; ++x)
            if ((single >> x) & 1U) xs.push_back(x);
          FockState base = 0;
          for (int x = 0; x < n; ++x)
            if ((dbl >> x) & 1U) base |= FockState{3} << (2 * x);
          for (std::size_t r = 0; r < ker.strings.size(); ++r) {
            FockState s = base;
            for (int j = 0; j < m; ++j) s |= FockState{1} << (2 * xs[j] + (((ker.strings[r] >> j) & 1U) ? 0 : 1));
            const Eigen::Index row = hw.sector.index(s);
            for (Eigen::Index k = 0; k < width; ++k) {
              const double c = ker.vecs(static_cast<Eigen::Index>(r), k);
              if (c != 0.0) triplets.emplace_back(row, col + k, cplx(c, 0.0));
            }
          }
          col += width;
        }
        if (single == 0) break;
      }
    }
  }
  hw.v.resize(hw.sector.size(), col);
  hw.v.setFromTriplets(triplets.begin(), triplets.end());
  return hw;
}

void require_hermitian(const SparseMatrix& h) {
  const SparseMatrix d = h - SparseMatrix(h.adjoint());
  double worst = 0.0;
  double scale = 0.0;
  for (Eigen::Index k = 0; k < d.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(d, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  for (Eigen::Index k = 0; k < h.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(h, k); it; ++it) scale = std::max(scale, std::abs(it.value()));
  if (worst > 1e-13 * scale) throw Error(ErrorKind::NotHermitian, "sector block is not Hermitian");
}

Eigen::MatrixXcd plain_block(const HamiltonianBundle& h, const SectorBasis& basis) {
  const SparseMatrix m = sector_matrix(h.terms, basis);
  require_hermitian(m);
  return Eigen::MatrixXcd(m);
}

Eigen::MatrixXcd reduced_block(const HamiltonianBundle& h, const HighestWeightBasis& hw) {
  const SparseMatrix m = sector_matrix(h.terms, hw.sector);
  require_hermitian(m);
  const SparseMatrix hv = m * hw.v;
  Eigen::MatrixXcd r = Eigen::MatrixXcd(SparseMatrix(hw.v.adjoint()) * hv);
  return (r + r.adjoint()) / 2.0;
}

struct Task {
  int n_up = 0;
  int n_down = 0;
  int twice_spin = -1;
  int mirror_of = -1;
};

std::vector<Task> plan(const HamiltonianBundle& h, Reduction reduction, bool& spin_path) {
  const int n = h.num_sites;
  spin_path = reduction == Reduction::Spin || (reduction == Reduction::Auto && h.spin_symmetric);
  if (reduction == Reduction::Spin && !h.spin_symmetric)
    throw Error(ErrorKind::InvalidArgument, "spin reduction requested for a bundle without spin symmetry");
  std::vector<Task> tasks;
  if (!spin_path) {
    for (int a = 0; a <= n; ++a)
      for (int b = 0; b <= n; ++b) tasks.push_back({a, b, -1, -1});
    return tasks;
  }
  std::map<std::pair<int, int>, int> where;
  for (int total = 0; total <= 2 * n; ++total) {
    for (int s2 = total % 2; s2 <= std::min(total, 2 * n - total); s2 += 2) {
      Task t{(total + s2) / 2, (total - s2) / 2, s2, -1};
      if (h.particle_hole_mirror && total > n) t.mirror_of = where.at({2 * n - total, s2});
      where[{total, s2}] = static_cast<int>(tasks.size());
      tasks.push_back(t);
    }
  }
  return tasks;
}

}  // namespace

SpectralData diagonalize(const HamiltonianBundle& h, Reduction reduction) {
  if (!h.terms.conserves_spin_numbers())
    throw Error(ErrorKind::NotBlockDiagonal, "Hamiltonian does not conserve N_up and N_down");
  if (h.num_modes() > 2 * 16) throw Error(ErrorKind::SizeExceedsCap, "too many sites for sector diagonalization");
  const int n = h.num_sites;
  bool spin_path = false;
  const std::vector<Task> tasks = plan(h, reduction, spin_path);
  const KernelCache kernels(spin_path ? n : 0);

  std::vector<std::vector<double>> eigs(tasks.size());
  std::vector<std::exception_ptr> failures(tasks.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t k = 0; k < tasks.size(); ++k) {
    const Task& t = tasks[k];
    if (t.mirror_of >= 0) continue;
    try {
      Eigen::VectorXd w;
      if (t.twice_spin < 0) {
        w = eigvalsh(plain_block(h, SectorBasis(n, t.n_up, t.n_down)));
      } else {
        w = eigvalsh(reduced_block(h, highest_weight_basis(n, t.n_up + t.n_down, t.twice_spin, kernels)));
      }
      eigs[k].resize(w.size());
      for (Eigen::Index i = 0; i < w.size(); ++i) eigs[k][i] = w[i] + h.classical_shift;
    } catch (...) {
      failures[k] = std::current_exception();
    }
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);

  SpectralData out;
  out.num_sites = n;
  out.shift = h.classical_shift;
  out.e0 = std::numeric_limits<double>::infinity();
  out.e_max = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < tasks.size(); ++k) {
    const Task& t = tasks[k];
    SpectralBlock b;
    b.n_up = t.n_up;
    b.n_down = t.n_down;
    b.twice_spin = t.twice_spin;
    b.multiplicity = t.twice_spin < 0 ? 1 : t.twice_spin + 1;
    b.mirrored = t.mirror_of >= 0;
    b.eigs = b.mirrored ? eigs[t.mirror_of] : eigs[k];
    if (!b.eigs.empty()) {
      out.e0 = std::min(out.e0, b.eigs.front());
      out.e_max = std::max(out.e_max, b.eigs.back());
    }
    out.blocks.push_back(std::move(b));
  }
  out.ground_tolerance = ground_tolerance_for(out.e_max - out.e0);
  for (const SpectralBlock& b : out.blocks)
    for (double e : b.eigs)
      if (e <= out.e0 + out.ground_tolerance) out.degeneracy += b.multiplicity;
  return out;
}

double log_partition(const SpectralData& spec, double beta) {
  if (!(beta > 0.0)) throw Error(ErrorKind::InvalidArgument, "beta must be > 0");
  double sum = 0.0;
  for (const SpectralBlock& b : spec.blocks) {
    double block = 0.0;
    for (double e : b.eigs) block += std::exp(-beta * (e - spec.e0));
    sum += b.multiplicity * block;
  }
  return -beta * spec.e0 + std::log(sum);
}

std::vector<double> sector_spectrum(const HamiltonianBundle& h, SectorKey sector) {
  const Eigen::VectorXd w = eigvalsh(plain_block(h, SectorBasis(h.num_sites, sector.first, sector.second)));
  std::vector<double> out(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) out[i] = w[i] + h.classical_shift;
  return out;
}

std::vector<double> block_spectrum(const HamiltonianBundle& h, int total, int twice_spin) {
  const int n = h.num_sites;
  if (!h.spin_symmetric) throw Error(ErrorKind::InvalidArgument, "block spectrum needs a spin-symmetric bundle");
  if (total < 0 || total > 2 * n || twice_spin < 0 || twice_spin > std::min(total, 2 * n - total) ||
      (total - twice_spin) % 2 != 0)
    throw Error(ErrorKind::InvalidArgument, "no (N, S) block with these quantum numbers");
  const KernelCache kernels(n);
  const Eigen::VectorXd w = eigvalsh(reduced_block(h, highest_weight_basis(n, total, twice_spin, kernels)));
  std::vector<double> out(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) out[i] = w[i] + h.classical_shift;
  return out;
}

GroundSpace ground_space(const HamiltonianBundle& h, const SpectralData& spec) {
  if (spec.num_sites != h.num_sites) throw Error(ErrorKind::InvalidArgument, "spectrum belongs to another system");
  const double tol = spec.ground_tolerance;
  long long wide = 0;
  long long narrow = 0;
  for (const SpectralBlock& b : spec.blocks) {
    for (double e : b.eigs) {
      if (e <= spec.e0 + tol) wide += b.multiplicity;
      if (e <= spec.e0 + tol / 2) narrow += b.multiplicity;
    }
  }
  if (wide != narrow) {
    throw Error(ErrorKind::DegenerateToleranceAmbiguity,
                "ground count " + std::to_string(wide) + " at tolerance " + std::to_string(tol) + " but " +
                    std::to_string(narrow) + " at half of it");
  }

  const int n = h.num_sites;
  const bool spin_path = std::any_of(spec.blocks.begin(), spec.blocks.end(), [](const SpectralBlock& b) { return b.twice_spin >= 0; });
  const KernelCache kernels(spin_path ? n : 0);
  TermList lower;
  for (int x = 0; x < n; ++x) lower.add(1.0, {cdag(x, Spin::Down), c(x, Spin::Up)});

  GroundSpace gs;
  gs.num_sites = n;
  gs.e0 = spec.e0;
  gs.tolerance = tol;
  for (const SpectralBlock& b : spec.blocks) {
    if (b.eigs.empty() || b.eigs.front() > spec.e0 + tol) continue;
    if (b.twice_spin < 0) {
      const SectorBasis basis(n, b.n_up, b.n_down);
      const EigenSystem es = eigh(plain_block(h, basis));
      for (Eigen::Index k = 0; k < es.values.size(); ++k)
        if (es.values[k] + h.classical_shift <= spec.e0 + tol) gs.states.push_back({{b.n_up, b.n_down}, es.vectors.col(k)});
      continue;
    }
    const HighestWeightBasis hw = highest_weight_basis(n, b.n_up + b.n_down, b.twice_spin, kernels);
    const EigenSystem es = eigh(reduced_block(h, hw));
    for (Eigen::Index k = 0; k < es.values.size(); ++k) {
      if (es.values[k] + h.classical_shift > spec.e0 + tol) continue;
      Eigen::VectorXcd psi = hw.v * es.vectors.col(k);
      SectorBasis from = hw.sector;
      gs.states.push_back({{from.n_up(), from.n_down()}, psi});
      for (int step = 0; step < b.twice_spin; ++step) {
        SectorBasis to(n, from.n_up() - 1, from.n_down() + 1);
        psi = transfer(lower, from, psi, to);
        psi.normalize();
        gs.states.push_back({{to.n_up(), to.n_down()}, psi});
        from = std::move(to);
      }
    }
  }
  if (static_cast<long long>(gs.states.size()) != spec.degeneracy) {
    throw Error(ErrorKind::DegenerateToleranceAmbiguity,
                "recomputed ground space has " + std::to_string(gs.states.size()) + " states, spectrum counted " +
                    std::to_string(spec.degeneracy));
  }
  return gs;
}

ObservableValue ground_expectation(const GroundSpace& gs, const TermList& observable) {
  if (gs.states.empty()) throw Error(ErrorKind::InvalidArgument, "empty ground space");
  const TermList diag = number_conserving_part(observable);
  std::map<SectorKey, SparseMatrix> cache;
  cplx sum = 0.0;
  for (const SectorVector& s : gs.states) {
    auto it = cache.find(s.sector);
    if (it == cache.end())
      it = cache.emplace(s.sector, sector_matrix(diag, SectorBasis(gs.num_sites, s.sector.first, s.sector.second))).first;
    sum += s.v.dot(it->second * s.v);
  }
  ObservableValue out;
  out.value = sum / static_cast<double>(gs.states.size());
  return out;
}

ObservableValue ground_expectation(const GroundSpace& gs, const FockOperator& observable) {
  if (gs.states.empty()) throw Error(ErrorKind::InvalidArgument, "empty ground space");
  if (observable.num_modes() != 2 * gs.num_sites)
    throw Error(ErrorKind::InvalidArgument, "observable acts on another Fock space");
  cplx sum = 0.0;
  for (const SectorVector& s : gs.states) {
    const SectorBasis basis(gs.num_sites, s.sector.first, s.sector.second);
    Eigen::VectorXcd full = Eigen::VectorXcd::Zero(observable.dim());
    for (Eigen::Index i = 0; i < basis.size(); ++i) full[static_cast<Eigen::Index>(basis.state(i))] = s.v[i];
    sum += full.dot(observable.matrix() * full);
  }
  ObservableValue out;
  out.value = sum / static_cast<double>(gs.states.size());
  return out;
}

ObservableValue thermal_expectation(const HamiltonianBundle& h, const TermList& observable, double beta) {
  if (!(beta > 0.0)) throw Error(ErrorKind::InvalidArgument, "beta must be > 0");
  const TermList diag = number_conserving_part(observable);
  const int n = h.num_sites;
  std::vector<double> energies;
  std::vector<cplx> values;
  for (int a = 0; a <= n; ++a) {
    for (int b = 0; b <= n; ++b) {
      const SectorBasis basis(n, a, b);
      const EigenSystem es = eigh(plain_block(h, basis));
      const Eigen::MatrixXcd o = Eigen::MatrixXcd(sector_matrix(diag, basis));
      for (Eigen::Index k = 0; k < es.values.size(); ++k) {
        energies.push_back(es.values[k]);
        values.push_back(es.vectors.col(k).dot(o * es.vectors.col(k)));
      }
    }
  }
  const double e0 = *std::min_element(energies.begin(), energies.end());
  double z = 0.0;
  cplx num = 0.0;
  for (std::size_t k = 0; k < energies.size(); ++k) {
    const double w = std::exp(-beta * (energies[k] - e0));
    z += w;
    num += w * values[k];
  }
  return {num / z, beta, {}};
}

}  // namespace fluxlab
