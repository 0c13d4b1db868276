#include "doctest.h"

#include <cmath>
#include <vector>

#include "fluxlab/error.hpp"
#include "fluxlab/gauge.hpp"

using namespace fluxlab;

namespace {

int site_at(const Lattice& lat, std::vector<int> x) { return lat.site_index(x); }

}  // namespace

TEST_CASE("angle normalization") {
  CHECK(normalize_angle(kPi) == doctest::Approx(kPi));
  CHECK(normalize_angle(-kPi) == doctest::Approx(kPi));
  CHECK(normalize_angle(3 * kPi / 2) == doctest::Approx(-kPi / 2));
  for (double a : {-7.0, -1.0, 0.3, 2.9, 11.0}) {
    for (int k = -3; k <= 3; ++k) CHECK(std::abs(normalize_angle(a + 2 * kPi * k) - normalize_angle(a)) < 1e-12);
    const double r = normalize_angle(a);
    CHECK((r > -kPi && r <= kPi));
  }
}

TEST_CASE("theta values") {
  const Lattice lat = build_lattice(3, 1);
  CHECK(theta(lat, 0, site_at(lat, {0, 0, 0})) == 0);
  CHECK(theta(lat, 0, site_at(lat, {1, 0, 0})) == 1);
  CHECK(theta(lat, 1, site_at(lat, {1, 0, 0})) == 1);
  CHECK(theta(lat, 1, site_at(lat, {1, 1, 0})) == 0);
  CHECK(theta(lat, 2, site_at(lat, {1, 1, 0})) == 0);
  CHECK(theta(lat, 2, site_at(lat, {1, 0, 1})) == 0);
}

TEST_CASE("pi flux field") {
  for (int d : {2, 3}) {
    const Lattice lat = build_lattice(d, 1);
    const GaugeField a = pi_flux_field(lat);
    for (const Plaquette& p : lat.plaquettes()) CHECK(angle_distance(flux(lat, a, p), kPi) < 1e-12);
    CHECK(a == compose(lat, zero_field(lat)));
  }
  const Lattice lat = build_lattice(3, 1);
  const GaugeField a = pi_flux_field(lat);
  CHECK(a.angle(lat.bond_index({site_at(lat, {0, 0, 0}), 0})) == doctest::Approx(kPi / 2));
  CHECK(a.angle(lat.bond_index({site_at(lat, {1, 0, 0}), 0})) == doctest::Approx(-kPi / 2));
}

TEST_CASE("flux basics") {
  const Lattice lat = build_lattice(2, 2, 32);
  GaugeField a(lat);
  const Plaquette p = lat.plaquettes()[5];
  CHECK(flux(lat, a, p) == 0.0);
  a.set(lat.bond_index({p.site, p.axis_i}), kPi / 2);
  CHECK(flux(lat, a, p) == doctest::Approx(kPi / 2));
}

TEST_CASE("flux shift, round trip and gauge invariance") {
  for (int d : {2, 3}) {
    const Lattice lat = build_lattice(d, 1);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const GaugeField t = random_field(lat, seed);
      const GaugeField a = compose(lat, t);
      for (const Plaquette& p : lat.plaquettes())
        CHECK(angle_distance(flux(lat, a, p), normalize_angle(flux(lat, t, p) + kPi)) <= 1e-12);
      const GaugeField back = decompose(lat, a);
      for (int b = 0; b < lat.num_bonds(); ++b) CHECK(angle_distance(back.angle(b), t.angle(b)) <= 1e-12);
      const GaugeField shifted = add(t, pure_gauge(lat, random_phases(lat, seed + 100)));
      for (const Plaquette& p : lat.plaquettes())
        CHECK(angle_distance(flux(lat, shifted, p), flux(lat, t, p)) <= 1e-12);
    }
  }
}

TEST_CASE("random fields") {
  const Lattice lat = build_lattice(2, 1);
  CHECK(random_field(lat, 5) == random_field(lat, 5));
  CHECK_FALSE(random_field(lat, 5) == random_field(lat, 6));
  const GaugeField r = random_field(lat, 9);
  for (double v : r.angles()) CHECK((v > -kPi && v <= kPi));
}

TEST_CASE("pure gauge fields and strings") {
  const Lattice lat = build_lattice(2, 2, 32);
  SitePhases c;
  c.phi.assign(lat.num_sites(), 0.7);
  const GaugeField flat = pure_gauge(lat, c);
  for (double v : flat.angles()) CHECK(std::abs(v) < 1e-15);

  const SitePhases phi = random_phases(lat, 3);
  const GaugeField g = pure_gauge(lat, phi);
  CHECK(flux_distance(lat, g) <= 1e-12);

  const int x = site_at(lat, {0, 0});
  const int y = site_at(lat, {2, 1});
  const std::vector<int> v1{x, site_at(lat, {1, 0}), site_at(lat, {2, 0}), y};
  const std::vector<int> v2{x, site_at(lat, {0, 1}), site_at(lat, {1, 1}), y};
  const std::vector<int> v3{x, site_at(lat, {-1, 0}), site_at(lat, {-1, 1}), y};
  for (const auto& v : {v1, v2, v3}) {
    const Path path = Path::from_vertices(lat, v);
    CHECK(path.end() == y);
    CHECK(angle_distance(string_phase(lat, g, path), phi.phi[x] - phi.phi[y]) <= 1e-12);
  }
  CHECK(string_phase(lat, g, Path(lat, x, {})) == 0.0);

  const GaugeField t = random_field(lat, 4);
  const Plaquette p = lat.plaquettes()[3];
  const Path loop(lat, p.site, {{p.axis_i, true}, {p.axis_j, true}, {p.axis_i, false}, {p.axis_j, false}});
  CHECK(angle_distance(string_phase(lat, t, loop), flux(lat, t, p)) <= 1e-12);

  const Path gamma = Path::from_vertices(lat, v1);
  CHECK(angle_distance(string_phase(lat, add(t, g), gamma),
                       string_phase(lat, t, gamma) + phi.phi[x] - phi.phi[y]) <= 1e-12);

  const std::vector<int> bad{x, y};
  try {
    (void)Path::from_vertices(lat, bad);
    FAIL("expected invalid path");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidPath);
  }
}

TEST_CASE("doubled bonds are distinct path steps on L = 1") {
  const Lattice lat = build_lattice(2, 1);
  const GaugeField t = random_field(lat, 11);
  const int x = site_at(lat, {0, 0});
  const Path direct(lat, x, {{0, true}});
  const Path wrapped(lat, x, {{0, false}});
  CHECK(direct.end() == wrapped.end());
  CHECK(direct.bond_steps()[0].bond != wrapped.bond_steps()[0].bond);
  CHECK(angle_distance(string_phase(lat, t, direct), string_phase(lat, t, wrapped)) > 1e-6);
}

TEST_CASE("antisymmetry under orientation reversal") {
  const Lattice lat = build_lattice(3, 1);
  const GaugeField t = random_field(lat, 2);
  for (int b = 0; b < lat.num_bonds(); ++b) CHECK(angle_distance(t.angle(b, -1), -t.angle(b)) < 1e-15);
}

TEST_CASE("json round trip") {
  const Lattice lat = build_lattice(3, 1);
  const GaugeField t = random_field(lat, 8);
  const GaugeField back = gauge_from_json(lat, gauge_to_json(lat, t));
  CHECK(back == t);
  CHECK_THROWS_AS((void)gauge_from_json(build_lattice(2, 1), gauge_to_json(lat, t)), Error);
  CHECK_THROWS_AS((void)gauge_from_json(lat, "{not json"), Error);
}
