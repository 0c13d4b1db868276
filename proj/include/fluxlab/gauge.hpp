#pragma once

#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "fluxlab/lattice.hpp"

namespace fluxlab {

inline constexpr double kPi = std::numbers::pi;

/// Reduces an angle to the canonical branch (-pi, pi].
[[nodiscard]] double normalize_angle(double a) noexcept;
/// |normalize(a - b)|: distance on the circle.
[[nodiscard]] double angle_distance(double a, double b) noexcept;

/// Classical U(1) field: one angle per directed bond (x, i), stored in
/// (-pi, pi]. Reading a bond against its orientation yields the negated angle.
class GaugeField {
 public:
  GaugeField() = default;
  explicit GaugeField(const Lattice& lat) : d_(lat.dim()), L_(lat.half_side()), angles_(lat.num_bonds(), 0.0) {}

  [[nodiscard]] int dim() const noexcept { return d_; }
  [[nodiscard]] int half_side() const noexcept { return L_; }
  [[nodiscard]] int num_bonds() const noexcept { return static_cast<int>(angles_.size()); }
  [[nodiscard]] bool lives_on(const Lattice& lat) const noexcept {
    return d_ == lat.dim() && L_ == lat.half_side() && num_bonds() == lat.num_bonds();
  }

  [[nodiscard]] double angle(int bond) const { return angles_[bond]; }
  [[nodiscard]] double angle(int bond, int orientation) const {
    return orientation > 0 ? angles_[bond] : normalize_angle(-angles_[bond]);
  }
  void set(int bond, double a) { angles_[bond] = normalize_angle(a); }
  [[nodiscard]] std::span<const double> angles() const noexcept { return angles_; }

  friend bool operator==(const GaugeField&, const GaugeField&) = default;

 private:
  int d_ = 0;
  int L_ = 0;
  std::vector<double> angles_;
};

/// Site phases phi_x in (-pi, pi], one per site.
struct SitePhases {
  std::vector<double> phi;
};

/// Nearest-neighbour walk. Steps are stored as (axis, direction) so that the
/// two distinct bonds joining a pair of sites on an L = 1 lattice are told apart.
class Path {
 public:
  struct Step {
    int axis = 0;
    bool forward = true;
  };

  Path(const Lattice& lat, int start, std::vector<Step> steps);
  /// Builds a path from consecutive sites; throws Error{InvalidPath} if a pair
  /// is not nearest neighbours. Where both +e_i and -e_i reach the next site
  /// (L = 1), the forward bond is taken.
  static Path from_vertices(const Lattice& lat, std::span<const int> sites);

  [[nodiscard]] int start() const noexcept { return start_; }
  [[nodiscard]] int end() const noexcept { return vertices_.back(); }
  [[nodiscard]] int length() const noexcept { return static_cast<int>(steps_.size()); }
  [[nodiscard]] const std::vector<Step>& steps() const noexcept { return steps_; }
  [[nodiscard]] const std::vector<int>& vertices() const noexcept { return vertices_; }
  [[nodiscard]] const std::vector<BondStep>& bond_steps() const noexcept { return bond_steps_; }

 private:
  int start_ = 0;
  std::vector<Step> steps_;
  std::vector<int> vertices_;
  std::vector<BondStep> bond_steps_;
};

/// Parity (0 or 1) of the staggering exponent for bond (x, axis): for axis 0
/// it is 1 only on the boundary layer x^(1) = L; for higher axes it is the
/// parity of the preceding coordinates, flipped on the boundary layer.
[[nodiscard]] int theta(const Lattice& lat, int axis, int site);

[[nodiscard]] GaugeField zero_field(const Lattice& lat);
/// A_{x,x+e_i} = pi/2 + pi * theta_i(x): every plaquette carries flux pi.
[[nodiscard]] GaugeField pi_flux_field(const Lattice& lat);
/// Maps perturbation variables (tilde) to physical bond angles.
[[nodiscard]] GaugeField compose(const Lattice& lat, const GaugeField& tilde);
/// Inverse of compose().
[[nodiscard]] GaugeField decompose(const Lattice& lat, const GaugeField& physical);
/// Bondwise sum modulo 2 pi.
[[nodiscard]] GaugeField add(const GaugeField& a, const GaugeField& b);

[[nodiscard]] double flux(const Lattice& lat, const GaugeField& a, const Plaquette& p);
/// Largest |flux| over all plaquettes; zero exactly on the pure-gauge orbit.
[[nodiscard]] double flux_distance(const Lattice& lat, const GaugeField& a);

[[nodiscard]] GaugeField pure_gauge(const Lattice& lat, const SitePhases& phases);
[[nodiscard]] GaugeField random_field(const Lattice& lat, std::uint64_t seed);
[[nodiscard]] SitePhases random_phases(const Lattice& lat, std::uint64_t seed);
[[nodiscard]] double string_phase(const Lattice& lat, const GaugeField& a, const Path& path);

/// JSON form {d, L, entries: [{x, i, angle}]}, with i 1-based.
[[nodiscard]] std::string gauge_to_json(const Lattice& lat, const GaugeField& a);
[[nodiscard]] GaugeField gauge_from_json(const Lattice& lat, const std::string& text);

}  // namespace fluxlab
