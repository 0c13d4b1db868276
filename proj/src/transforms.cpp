#include "fluxlab/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fluxlab/error.hpp"

namespace fluxlab {

int SignTables::varrho(int site, int axis) const {
  const int exponent = theta(*lat_, axis, site) + lat_->coords(site)[axis];
  return parity_of(exponent) ? -1 : 1;
}

std::string_view to_string(UnitaryLabel label) noexcept {
  switch (label) {
    case UnitaryLabel::OddHalfPi: return "odd_half_pi";
    case UnitaryLabel::U1j: return "u1j";
    case UnitaryLabel::U1: return "u1";
    case UnitaryLabel::UOdd: return "u_odd";
    case UnitaryLabel::U1Tilde: return "u1_tilde";
    case UnitaryLabel::Phase: return "phase";
  }
  return "?";
}

UnitaryLabel parse_unitary_label(std::string_view name) {
  for (UnitaryLabel l : {UnitaryLabel::OddHalfPi, UnitaryLabel::U1j, UnitaryLabel::U1, UnitaryLabel::UOdd,
                         UnitaryLabel::U1Tilde, UnitaryLabel::Phase})
    if (to_string(l) == name) return l;
  throw Error(ErrorKind::UnknownLabel, "no unitary named '" + std::string(name) + "'");
}

std::string_view to_string(IdentityKind kind) noexcept {
  switch (kind) {
    case IdentityKind::SpinRotationHop: return "spin_rotation_hop";
    case IdentityKind::SpinRotationInt: return "spin_rotation_int";
    case IdentityKind::GammaDecomposition: return "gamma_decomposition";
    case IdentityKind::U1Int1: return "u1_int_1";
    case IdentityKind::U1IntJ: return "u1_int_j";
    case IdentityKind::U1Hop1: return "u1_hop_1";
    case IdentityKind::U1HopI: return "u1_hop_i";
  }
  return "?";
}

IdentityKind parse_identity_kind(std::string_view name) {
  for (IdentityKind k : kAllIdentityKinds)
    if (to_string(k) == name) return k;
  throw Error(ErrorKind::UnknownKind, "no identity kind '" + std::string(name) + "'");
}

namespace {

FockOperator diagonal_unitary(int num_modes, const std::vector<double>& mode_angle) {
  const Eigen::Index dim = Eigen::Index{1} << num_modes;
  SparseMatrix m(dim, dim);
  m.reserve(Eigen::VectorXi::Constant(dim, 1));
  for (Eigen::Index s = 0; s < dim; ++s) {
    double angle = 0.0;
    for (int k = 0; k < num_modes; ++k)
      if ((s >> k) & 1) angle += mode_angle[k];
    // exact values for quarter turns keep the identity checks free of rounding
    const double q = angle / (kPi / 2);
    cplx v;
    if (std::abs(q - std::round(q)) < 1e-15 * std::max(1.0, std::abs(q))) {
      const long r = ((static_cast<long>(std::llround(q)) % 4) + 4) % 4;
      static constexpr cplx quarter[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
      v = quarter[r];
    } else {
      v = std::polar(1.0, angle);
    }
    m.insert(s, s) = v;
  }
  return FockOperator(num_modes, std::move(m));
}

// Product u_{m_1} u_{m_2} ... u_{m_k} over the given modes (ascending), each
// u_m = [prod_{m' != m} (-1)^{n_m'}] (a+_m + a_m). It is a signed permutation.
FockOperator mode_flip_product(int num_modes, const std::vector<int>& modes) {
  const Eigen::Index dim = Eigen::Index{1} << num_modes;
  std::vector<Eigen::Triplet<cplx>> triplets;
  triplets.reserve(dim);
  for (Eigen::Index s0 = 0; s0 < dim; ++s0) {
    FockState s = static_cast<FockState>(s0);
    int sign = 1;
    for (auto it = modes.rbegin(); it != modes.rend(); ++it) {
      const FockState bit = FockState{1} << *it;
      const int below = std::popcount(s & (bit - 1));
      const int others = std::popcount(s & ~bit);
      if ((below + others) & 1) sign = -sign;
      s ^= bit;
    }
    triplets.emplace_back(static_cast<Eigen::Index>(s), s0, cplx(sign, 0.0));
  }
  SparseMatrix m(dim, dim);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return FockOperator(num_modes, std::move(m));
}

}  // namespace

UnitaryOp build_unitary(const Lattice& lat, UnitaryLabel label, const UnitaryArgs& args) {
  const int nm = lat.num_modes();
  if (nm > kFullSpaceModeCap) throw Error(ErrorKind::SizeExceedsCap, "unitary needs the full Fock space");
  std::vector<double> angle(nm, 0.0);
  auto per_site = [&](auto&& pick) {
    for (int x = 0; x < lat.num_sites(); ++x) {
      const double a = pick(x);
      angle[mode_id(x, Spin::Up)] += a;
      angle[mode_id(x, Spin::Down)] += a;
    }
  };
  switch (label) {
    case UnitaryLabel::OddHalfPi:
      per_site([&](int x) { return lat.parity(x) == Parity::Odd ? kPi / 2 : 0.0; });
      return {label, diagonal_unitary(nm, angle)};
    case UnitaryLabel::U1j:
      if (args.axis < 1 || args.axis >= lat.dim()) throw Error(ErrorKind::InvalidArgument, "U1j needs 2 <= j <= d");
      per_site([&](int x) { return parity_of(lat.coords(x)[args.axis]) == 0 ? kPi / 2 : 0.0; });
      return {label, diagonal_unitary(nm, angle)};
    case UnitaryLabel::U1:
      for (int j = 1; j < lat.dim(); ++j)
        per_site([&](int x) { return parity_of(lat.coords(x)[j]) == 0 ? kPi / 2 : 0.0; });
      return {label, diagonal_unitary(nm, angle)};
    case UnitaryLabel::UOdd: {
      std::vector<int> modes;
      for (int m = 0; m < nm; ++m)
        if (lat.parity(m / 2) == Parity::Odd) modes.push_back(m);
      return {label, mode_flip_product(nm, modes)};
    }
    case UnitaryLabel::U1Tilde: {
      const UnitaryOp u1 = build_unitary(lat, UnitaryLabel::U1);
      const UnitaryOp uodd = build_unitary(lat, UnitaryLabel::UOdd);
      return {label, u1.matrix * uodd.matrix};
    }
    case UnitaryLabel::Phase: {
      if (!args.phases || static_cast<int>(args.phases->phi.size()) != lat.num_sites())
        throw Error(ErrorKind::InvalidArgument, "phase unitary needs one phase per site");
      per_site([&](int x) { return args.phases->phi[x]; });
      return {label, diagonal_unitary(nm, angle)};
    }
  }
  throw Error(ErrorKind::UnknownLabel, "unhandled unitary label");
}

FockOperator conjugate(const UnitaryOp& u, const FockOperator& op) { return adjoint(u.matrix) * op * u.matrix; }

namespace {

GaugeField negated(const Lattice& lat, const GaugeField& a) {
  GaugeField out(lat);
  for (int b = 0; b < lat.num_bonds(); ++b) out.set(b, -a.angle(b));
  return out;
}

double diff(const FockOperator& a, const TermList& rhs) {
  return max_abs_diff(a, materialize(rhs, a.num_modes()));
}

}  // namespace

TermList rotated_hop_terms(const Lattice& lat, const GaugeField& tilde, double kappa, Spin spin) {
  TermList out;
  if (kappa == 0.0) return out;
  for (int b = 0; b < lat.num_bonds(); ++b) {
    const Bond bond = lat.bond(b);
    const int x = bond.site;
    const int y = lat.bond_head(b);
    // every bond of an even-sided torus joins opposite parities, so exactly one case applies
    if (lat.parity(x) == lat.parity(y)) throw Error(ErrorKind::InvalidArgument, "bond joins sites of equal parity");
    const double s = lat.parity(x) == Parity::Odd ? 1.0 : -1.0;
    const double sign = theta(lat, bond.axis, x) ? -1.0 : 1.0;
    const cplx t = kappa * s * sign * std::polar(1.0, tilde.angle(b));
    out.add(t, {cdag(x, spin), c(y, spin)});
    out.add(std::conj(t), {cdag(y, spin), c(x, spin)});
  }
  return out;
}

TermList rotated_int_terms(const Lattice& lat, const GaugeField& tilde, double g) {
  TermList out;
  if (g == 0.0) return out;
  for (int b = 0; b < lat.num_bonds(); ++b) {
    const int x = lat.bond(b).site;
    const int y = lat.bond_head(b);
    const cplx t = -g * std::polar(1.0, 2.0 * tilde.angle(b));
    out += t * cooper_pair_terms(x, y);
    out += std::conj(t) * cooper_pair_terms(y, x);
  }
  return out;
}

TermList rotated_int_mirror_terms(const Lattice& lat, const GaugeField& tilde, double g) {
  TermList out;
  if (g == 0.0) return out;
  for (int b = 0; b < lat.num_bonds(); ++b) {
    const int x = lat.bond(b).site;
    const int y = lat.bond_head(b);
    const TermList xy{Term{1.0, {cdag(x, Spin::Up), c(y, Spin::Up)}}};
    const TermList yx{Term{1.0, {cdag(y, Spin::Up), c(x, Spin::Up)}}};
    const cplx t = -g * std::polar(1.0, 2.0 * tilde.angle(b));
    out += t * (xy * spin_mirror(xy));
    out += std::conj(t) * (yx * spin_mirror(yx));
  }
  return out;
}

TermList gamma_bond_terms(const Lattice& lat, double g, int axis, int s1, int s2) {
  TermList out;
  if (g == 0.0) return out;
  for (int x = 0; x < lat.num_sites(); ++x) {
    const int y = lat.neighbor(x, axis);
    const auto [g1x, g2x] = gamma_terms(x);
    const auto [g1y, g2y] = gamma_terms(y);
    const TermList a = g1x + cplx(s1) * g1y;
    const TermList b = g2x + cplx(s2) * g2y;
    out += cplx(g / 4) * (a * a);
    out += cplx(-g / 4) * (b * b);
  }
  return out;
}

TermList u1_hop_axis1_terms(const Lattice& lat, const GaugeField& tilde, double kappa, Spin spin) {
  TermList out;
  if (kappa == 0.0) return out;
  const SignTables signs(lat);
  for (int x = 0; x < lat.num_sites(); ++x) {
    const int b = lat.bond_index({x, 0});
    const int y = lat.bond_head(b);
    const double sign = theta(lat, 0, x) ? -1.0 : 1.0;
    const double phase = signs.upsilon(x, spin) * tilde.angle(b);
    out.add(cplx(0.0, kappa * sign) * std::polar(1.0, phase), {cdag(x, spin), cdag(y, spin)});
    out.add(cplx(0.0, kappa * sign) * std::polar(1.0, -phase), {c(x, spin), c(y, spin)});
  }
  return out;
}

TermList u1_hop_axis_terms(const Lattice& lat, const GaugeField& tilde, double kappa, Spin spin, int axis) {
  TermList out;
  if (kappa == 0.0) return out;
  const SignTables signs(lat);
  for (int x = 0; x < lat.num_sites(); ++x) {
    const int b = lat.bond_index({x, axis});
    const int y = lat.bond_head(b);
    const double pre = kappa * signs.varrho_tilde(x, axis);
    const double phase = signs.upsilon(x, spin) * tilde.angle(b);
    out.add(pre * std::polar(1.0, phase), {cdag(x, spin), cdag(y, spin)});
    out.add(pre * std::polar(1.0, -phase), {c(y, spin), c(x, spin)});
  }
  return out;
}

IdentityReport verify_identity(const Lattice& lat, const ModelParams& params, const GaugeField& tilde,
                               IdentityKind kind) {
  if (lat.num_modes() > kIdentityModeCap) {
    throw Error(ErrorKind::SizeExceedsCap, "identity checks need at most " + std::to_string(kIdentityModeCap) +
                                               " modes, lattice has " + std::to_string(lat.num_modes()));
  }
  if (!tilde.lives_on(lat)) throw Error(ErrorKind::InvalidArgument, "gauge field does not live on this lattice");
  const int nm = lat.num_modes();
  const double kappa = params.kappa;
  const double g = params.g;
  double err = 0.0;
  switch (kind) {
    case IdentityKind::SpinRotationHop: {
      const UnitaryOp u = build_unitary(lat, UnitaryLabel::OddHalfPi);
      const FockOperator lhs = conjugate(u, build_barred_hop(lat, tilde, kappa));
      const TermList pattern = rotated_hop_terms(lat, tilde, kappa, Spin::Up) +
                               rotated_hop_terms(lat, tilde, kappa, Spin::Down);
      const TermList mirrored = rotated_hop_terms(lat, tilde, kappa, Spin::Up) +
                                spin_mirror(rotated_hop_terms(lat, negated(lat, tilde), kappa, Spin::Up));
      err = std::max(diff(lhs, pattern), diff(lhs, mirrored));
      break;
    }
    case IdentityKind::SpinRotationInt: {
      const UnitaryOp u = build_unitary(lat, UnitaryLabel::OddHalfPi);
      const FockOperator lhs = conjugate(u, build_barred_int(lat, tilde, g));
      err = std::max(diff(lhs, rotated_int_terms(lat, tilde, g)), diff(lhs, rotated_int_mirror_terms(lat, tilde, g)));
      break;
    }
    case IdentityKind::GammaDecomposition: {
      const FockOperator lhs = build_barred_int(lat, zero_field(lat), g);
      TermList rhs;
      for (int j = 0; j < lat.dim(); ++j) rhs += gamma_bond_terms(lat, g, j, +1, -1);
      if (g != 0.0) {
        for (int x = 0; x < lat.num_sites(); ++x) {
          const auto [g1, g2] = gamma_terms(x);
          rhs += cplx(-lat.dim() * g / 2) * (g1 * g1);
          rhs += cplx(lat.dim() * g / 2) * (g2 * g2);
        }
      }
      err = diff(lhs, rhs);
      break;
    }
    case IdentityKind::U1Int1: {
      const UnitaryOp u = build_unitary(lat, UnitaryLabel::U1Tilde);
      const FockOperator lhs = conjugate(u, materialize(gamma_bond_terms(lat, g, 0, +1, -1), nm));
      err = diff(lhs, gamma_bond_terms(lat, g, 0, -1, -1));
      break;
    }
    case IdentityKind::U1IntJ: {
      const UnitaryOp u = build_unitary(lat, UnitaryLabel::U1Tilde);
      for (int j = 1; j < lat.dim(); ++j) {
        const FockOperator lhs = conjugate(u, materialize(gamma_bond_terms(lat, g, j, +1, -1), nm));
        err = std::max(err, diff(lhs, gamma_bond_terms(lat, g, j, +1, +1)));
      }
      break;
    }
    case IdentityKind::U1Hop1: {
      const UnitaryOp u = build_unitary(lat, UnitaryLabel::U1Tilde);
      for (Spin s : {Spin::Up, Spin::Down}) {
        const FockOperator lhs = conjugate(u, materialize(barred_hop_terms(lat, tilde, kappa, s, 0), nm));
        err = std::max(err, diff(lhs, u1_hop_axis1_terms(lat, tilde, kappa, s)));
      }
      break;
    }
    case IdentityKind::U1HopI: {
      const UnitaryOp u = build_unitary(lat, UnitaryLabel::U1Tilde);
      for (Spin s : {Spin::Up, Spin::Down}) {
        for (int i = 1; i < lat.dim(); ++i) {
          const FockOperator lhs = conjugate(u, materialize(barred_hop_terms(lat, tilde, kappa, s, i), nm));
          err = std::max(err, diff(lhs, u1_hop_axis_terms(lat, tilde, kappa, s, i)));
        }
      }
      break;
    }
  }
  return {kind, err, err <= kIdentityTolerance};
}

}  // namespace fluxlab
