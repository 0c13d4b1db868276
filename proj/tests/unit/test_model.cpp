#include "doctest.h"

#include <cmath>
#include <complex>

#include "fluxlab/error.hpp"
#include "fluxlab/model.hpp"

using namespace fluxlab;

namespace {

Eigen::VectorXcd vacuum(int modes) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(Eigen::Index{1} << modes);
  v[0] = 1.0;
  return v;
}

Eigen::VectorXcd pair_on(int modes, int site) {
  const FockOperator up = create(modes, {site, Spin::Up});
  const FockOperator dn = create(modes, {site, Spin::Down});
  return up.matrix() * (dn.matrix() * vacuum(modes));
}

std::string error_text(const ModelParams& p) {
  try {
    p.validate();
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ConstraintViolation);
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("parameter validation names the offending key") {
  ModelParams p;
  CHECK_NOTHROW(p.validate());
  p.g = -0.1;
  CHECK(error_text(p).find("g") != std::string::npos);
  p = {};
  p.K = 0.0;
  CHECK(error_text(p).find("K") != std::string::npos);
  p = {};
  p.beta = 0.0;
  CHECK(error_text(p).find("beta") != std::string::npos);
  p = {};
  p.g = 0.0;
  CHECK_NOTHROW(p.validate());
}

TEST_CASE("fermionic Hamiltonian is Hermitian and conserves both spin numbers") {
  for (int d : {2, 3}) {
    const Lattice lat = build_lattice(d, 1);
    const ModelParams p{0.8, 1.3, 1.0, 1.0};
    const HamiltonianBundle h = build_fermionic(lat, p, random_field(lat, 11));
    CHECK(h.terms.conserves_spin_numbers());
    if (d == 3) continue;  // full-space matrix checks only at 256 states
    const FockOperator m = h.fermionic();
    CHECK(m.is_hermitian());
    FockOperator n_up = zero_operator(lat.num_modes());
    FockOperator n_dn = zero_operator(lat.num_modes());
    for (int x = 0; x < lat.num_sites(); ++x) {
      n_up = n_up + number(lat.num_modes(), {x, Spin::Up});
      n_dn = n_dn + number(lat.num_modes(), {x, Spin::Down});
    }
    CHECK(commutator(m, n_up).max_abs() <= 1e-12);
    CHECK(commutator(m, n_dn).max_abs() <= 1e-12);
  }
}

TEST_CASE("change of variables maps the physical Hamiltonian onto the barred one") {
  const Lattice lat = build_lattice(2, 1);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const GaugeField tilde = random_field(lat, seed);
    const GaugeField phys = compose(lat, tilde);
    CHECK(max_abs_diff(build_hop(lat, phys, 1.3), build_barred_hop(lat, tilde, 1.3)) <= 1e-12);
    CHECK(max_abs_diff(build_int(lat, phys, 0.9), build_barred_int(lat, tilde, 0.9)) <= 1e-12);
    CHECK(std::abs(flux_energy(lat, phys, 1.7, FluxConvention::Original) -
                   flux_energy(lat, tilde, 1.7, FluxConvention::Barred)) <= 1e-12);
  }
}

TEST_CASE("flux energy at zero barred field is -K per plaquette") {
  for (int d : {2, 3}) {
    const Lattice lat = build_lattice(d, 1);
    CHECK(flux_energy(lat, zero_field(lat), 2.0, FluxConvention::Barred) ==
          doctest::Approx(-2.0 * lat.num_plaquettes()).epsilon(1e-14));
    CHECK(build_full(lat, {}, zero_field(lat)).classical_shift ==
          doctest::Approx(-1.0 * lat.num_plaquettes()).epsilon(1e-14));
  }
}

TEST_CASE("pair transfer matrix element carries the doubled bond phase") {
  // On the L = 1 torus x and x + e_1 are joined by two bonds, (x,1) forward and
  // (y,1) wrapping back; both contribute to <P+_x| H_int |P+_y>.
  const Lattice lat = build_lattice(2, 1);
  const GaugeField a = random_field(lat, 4);
  const double g = 0.7;
  const int x = 0;
  const int y = lat.neighbor(x, 0);
  REQUIRE(lat.neighbor(y, 0) == x);
  const FockOperator h = build_int(lat, a, g);
  const int modes = lat.num_modes();
  const cplx got = pair_on(modes, x).dot(h.matrix() * pair_on(modes, y));
  const double ax = a.angle(lat.bond_index({x, 0}));
  const double ay = a.angle(lat.bond_index({y, 0}));
  const cplx want = -g * (std::polar(1.0, 2 * ax) + std::polar(1.0, -2 * ay));
  CHECK(std::abs(got - want) <= 1e-14);
}

TEST_CASE("gamma operators obey the on-site pair algebra") {
  const Lattice lat = build_lattice(2, 1);
  const int modes = lat.num_modes();
  const FockOperator one = identity(modes);
  for (int x = 0; x < lat.num_sites(); ++x) {
    const auto [g1, g2] = gamma_ops(lat, x);
    CHECK(g1.is_hermitian());
    CHECK(g2.is_hermitian());
    const FockOperator nu = number(modes, {x, Spin::Up});
    const FockOperator nd = number(modes, {x, Spin::Down});
    // [G1, G2] = 2i (1 - n_up - n_dn)
    CHECK(max_abs_diff(commutator(g1, g2), cplx(0, 2) * (one - nu - nd)) <= 1e-14);
    // G1^2 = G2^2 = n_up n_dn + (1 - n_up)(1 - n_dn)
    const FockOperator sq = nu * nd + (one - nu) * (one - nd);
    CHECK(max_abs_diff(g1 * g1, sq) <= 1e-14);
    CHECK(max_abs_diff(g2 * g2, sq) <= 1e-14);
  }
  const int x = 0;
  const int y = 3;
  const auto [g1x, g2x] = gamma_ops(lat, x);
  const auto [g1y, g2y] = gamma_ops(lat, y);
  const FockOperator pp = materialize(cooper_pair_terms(x, y), modes);
  CHECK(max_abs_diff(g1x * g1y + g2x * g2y, cplx(2.0) * (pp + adjoint(pp))) <= 1e-14);
}

TEST_CASE("pure gauge field leaves the hopping unitarily equivalent to zero field") {
  const Lattice lat = build_lattice(2, 1);
  const SitePhases phi = random_phases(lat, 8);
  const GaugeField a = pure_gauge(lat, phi);
  const int modes = lat.num_modes();
  // U = prod exp(i phi_x n_x), U^dagger a_x U = e^{i phi_x} a_x
  std::vector<Eigen::Triplet<cplx>> diag;
  for (Eigen::Index s = 0; s < (Eigen::Index{1} << modes); ++s) {
    double angle = 0.0;
    for (int m = 0; m < modes; ++m)
      if ((s >> m) & 1) angle += phi.phi[m / 2];
    diag.emplace_back(s, s, std::polar(1.0, angle));
  }
  SparseMatrix u(Eigen::Index{1} << modes, Eigen::Index{1} << modes);
  u.setFromTriplets(diag.begin(), diag.end());
  const FockOperator uop(modes, u);
  const FockOperator h = build_barred_hop(lat, a, 1.0) + build_barred_int(lat, a, 0.6);
  const FockOperator h0 = build_barred_hop(lat, zero_field(lat), 1.0) + build_barred_int(lat, zero_field(lat), 0.6);
  CHECK(max_abs_diff(adjoint(uop) * h * uop, h0) <= 1e-13);
}
