#pragma once

#include <array>
#include <span>
#include <vector>

namespace fluxlab {

/// Default cap on the number of fermionic modes (2 per site). The Fock space
/// has dimension 2^modes, so 20 modes is ~1M states.
inline constexpr int kDefaultModeCap = 20;

/// Directed bond (x, x + e_axis) with periodic wrap. Axes are 0-based:
/// axis 0 is the first lattice direction e_1.
struct Bond {
  int site = 0;
  int axis = 0;
  friend bool operator==(const Bond&, const Bond&) = default;
};

/// Oriented unit square x -> x+e_i -> x+e_i+e_j -> x+e_j -> x with i < j.
struct Plaquette {
  int site = 0;
  int axis_i = 0;
  int axis_j = 1;
  friend bool operator==(const Plaquette&, const Plaquette&) = default;
};

/// One traversed edge of a loop or path: the bond and whether it is walked
/// along (+1) or against (-1) its orientation.
struct BondStep {
  int bond = 0;
  int orientation = 1;
};

enum class Parity { Even, Odd };

/// Finite periodic hypercube {-L+1, ..., L}^d.
///
/// Sites are ordered lexicographically on coordinates shifted by L-1 into
/// {0, ..., 2L-1}, first coordinate most significant. Bond (x, i) has index
/// site(x) * d + i. For L = 1 the direct and the wrapped bond between the
/// same pair of sites are distinct members of the bond family.
class Lattice {
 public:
  [[nodiscard]] int dim() const noexcept { return d_; }
  [[nodiscard]] int half_side() const noexcept { return L_; }
  [[nodiscard]] int side() const noexcept { return 2 * L_; }
  [[nodiscard]] int num_sites() const noexcept { return static_cast<int>(coords_.size()); }
  [[nodiscard]] int num_bonds() const noexcept { return num_sites() * d_; }
  [[nodiscard]] int num_plaquettes() const noexcept { return static_cast<int>(plaquettes_.size()); }
  [[nodiscard]] int num_modes() const noexcept { return 2 * num_sites(); }
  [[nodiscard]] int mode_cap() const noexcept { return mode_cap_; }

  /// Coordinates of a site, each component in {-L+1, ..., L}.
  [[nodiscard]] std::span<const int> coords(int site) const { return coords_[site]; }
  /// Inverse of coords(); components are wrapped into range first.
  [[nodiscard]] int site_index(std::span<const int> x) const;

  [[nodiscard]] int neighbor(int site, int axis) const { return forward_[site * d_ + axis]; }
  [[nodiscard]] int neighbor_back(int site, int axis) const { return backward_[site * d_ + axis]; }
  [[nodiscard]] Parity parity(int site) const { return parity_[site]; }

  [[nodiscard]] int bond_index(Bond b) const noexcept { return b.site * d_ + b.axis; }
  [[nodiscard]] Bond bond(int index) const noexcept { return {index / d_, index % d_}; }
  [[nodiscard]] int bond_head(int index) const { return neighbor(index / d_, index % d_); }

  [[nodiscard]] const std::vector<Plaquette>& plaquettes() const noexcept { return plaquettes_; }
  [[nodiscard]] std::array<BondStep, 4> plaquette_steps(const Plaquette& p) const;

  /// Runs below the dimension the theory assumes (d >= 3) are flagged in reports.
  [[nodiscard]] bool below_theorem_dimension() const noexcept { return d_ < 3; }
  [[nodiscard]] bool has_doubled_bonds() const noexcept { return L_ == 1; }

  friend Lattice build_lattice(int d, int L, int mode_cap);

 private:
  Lattice() = default;

  int d_ = 0;
  int L_ = 0;
  int mode_cap_ = kDefaultModeCap;
  std::vector<std::vector<int>> coords_;
  std::vector<int> forward_;
  std::vector<int> backward_;
  std::vector<Parity> parity_;
  std::vector<Plaquette> plaquettes_;
};

/// Throws Error{DimensionTooSmall} for d < 2 and Error{SizeExceedsCap} when
/// 2 * (2L)^d exceeds mode_cap.
Lattice build_lattice(int d, int L, int mode_cap = kDefaultModeCap);

[[nodiscard]] inline Parity site_parity(const Lattice& lat, int site) { return lat.parity(site); }
[[nodiscard]] inline int neighbor(const Lattice& lat, int site, int axis) { return lat.neighbor(site, axis); }

/// Integer parity that is correct for negative values too.
[[nodiscard]] constexpr int parity_of(int v) noexcept { return ((v % 2) + 2) % 2; }

}  // namespace fluxlab
