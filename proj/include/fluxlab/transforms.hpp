#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fluxlab/fock.hpp"
#include "fluxlab/gauge.hpp"
#include "fluxlab/lattice.hpp"
#include "fluxlab/model.hpp"

namespace fluxlab {

/// Sign functions entering the transformed hopping terms. Axes are 0-based.
class SignTables {
 public:
  explicit SignTables(const Lattice& lat) : lat_(&lat) {}

  /// +1 for up, -1 for down.
  [[nodiscard]] static int eta(Spin s) noexcept { return s == Spin::Up ? 1 : -1; }
  /// (-1)^{x^(1) + ... + x^(d)}.
  [[nodiscard]] int upsilon(int site) const { return lat_->parity(site) == Parity::Odd ? -1 : 1; }
  [[nodiscard]] int upsilon(int site, Spin s) const { return upsilon(site) * eta(s); }
  /// (-1)^{theta_i(x) + x^(i)}.
  [[nodiscard]] int varrho(int site, int axis) const;
  [[nodiscard]] int varrho_tilde(int site, int axis) const { return varrho(site, axis) * upsilon(site); }

 private:
  const Lattice* lat_;
};

enum class UnitaryLabel {
  OddHalfPi,  ///< prod over odd sites and spins of exp(i pi/2 n)
  U1j,        ///< prod over sites with x^(j) even of exp(i pi/2 n), j >= 2
  U1,         ///< product of U1j over j = 2..d
  UOdd,       ///< prod over odd sites of u_{x,s}, a_{x,s} -> a+_{x,s}
  U1Tilde,    ///< U1 * UOdd
  Phase,      ///< prod exp(i phi_x n_{x,s})
};

[[nodiscard]] std::string_view to_string(UnitaryLabel label) noexcept;
/// Throws Error{UnknownLabel}.
[[nodiscard]] UnitaryLabel parse_unitary_label(std::string_view name);

struct UnitaryOp {
  UnitaryLabel label = UnitaryLabel::OddHalfPi;
  FockOperator matrix;
};

struct UnitaryArgs {
  /// 0-based axis for U1j (must be >= 1).
  int axis = 1;
  std::optional<SitePhases> phases;
};

[[nodiscard]] UnitaryOp build_unitary(const Lattice& lat, UnitaryLabel label, const UnitaryArgs& args = {});
/// U^dagger op U.
[[nodiscard]] FockOperator conjugate(const UnitaryOp& u, const FockOperator& op);

enum class IdentityKind {
  SpinRotationHop,
  SpinRotationInt,
  GammaDecomposition,
  U1Int1,
  U1IntJ,
  U1Hop1,
  U1HopI,
};

inline constexpr IdentityKind kAllIdentityKinds[] = {
    IdentityKind::SpinRotationHop, IdentityKind::SpinRotationInt, IdentityKind::GammaDecomposition,
    IdentityKind::U1Int1,          IdentityKind::U1IntJ,          IdentityKind::U1Hop1,
    IdentityKind::U1HopI,
};

[[nodiscard]] std::string_view to_string(IdentityKind kind) noexcept;
/// Throws Error{UnknownKind}.
[[nodiscard]] IdentityKind parse_identity_kind(std::string_view name);

struct IdentityReport {
  IdentityKind kind = IdentityKind::SpinRotationHop;
  double max_error = 0.0;
  bool pass = false;
};

inline constexpr double kIdentityTolerance = 1e-12;
/// Full-space identity checks stop at 16 modes (d = 3, L = 1).
inline constexpr int kIdentityModeCap = 16;

/// Checks one transformed-Hamiltonian identity as an entrywise operator
/// equality. Throws Error{SizeExceedsCap} above kIdentityModeCap modes.
[[nodiscard]] IdentityReport verify_identity(const Lattice& lat, const ModelParams& params, const GaugeField& tilde,
                                             IdentityKind kind);

// Right-hand sides of the identities, exposed for tests.

/// The two-case sign pattern after the odd-site quarter rotation.
[[nodiscard]] TermList rotated_hop_terms(const Lattice& lat, const GaugeField& tilde, double kappa, Spin spin);
/// -g sum (e^{2i tA} P+_x P_y + h.c.).
[[nodiscard]] TermList rotated_int_terms(const Lattice& lat, const GaugeField& tilde, double g);
/// -g sum [e^{2i tA} (a+_{x,up} a_{y,up}) mirror(a+_{x,up} a_{y,up}) + h.c.].
[[nodiscard]] TermList rotated_int_mirror_terms(const Lattice& lat, const GaugeField& tilde, double g);
/// g/4 sum [G1_x + s1 G1_y]^2 - g/4 sum [G2_x + s2 G2_y]^2 along one axis.
[[nodiscard]] TermList gamma_bond_terms(const Lattice& lat, double g, int axis, int s1, int s2);
/// Pair-creation forms of the transformed spin-resolved hopping.
[[nodiscard]] TermList u1_hop_axis1_terms(const Lattice& lat, const GaugeField& tilde, double kappa, Spin spin);
[[nodiscard]] TermList u1_hop_axis_terms(const Lattice& lat, const GaugeField& tilde, double kappa, Spin spin, int axis);

}  // namespace fluxlab
