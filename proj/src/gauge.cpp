#include "fluxlab/gauge.hpp"

#include <cmath>
#include "json.hpp"

#include "fluxlab/error.hpp"
#include "fluxlab/rng.hpp"

namespace fluxlab {

double normalize_angle(double a) noexcept {
  double r = std::remainder(a, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

double angle_distance(double a, double b) noexcept { return std::abs(normalize_angle(a - b)); }

namespace {

void require_field(const Lattice& lat, const GaugeField& a) {
  if (!a.lives_on(lat)) throw Error(ErrorKind::InvalidArgument, "gauge field does not live on this lattice");
}

}  // namespace

Path::Path(const Lattice& lat, int start, std::vector<Step> steps) : start_(start), steps_(std::move(steps)) {
  if (start < 0 || start >= lat.num_sites()) throw Error(ErrorKind::InvalidPath, "start site out of range");
  vertices_.push_back(start);
  int x = start;
  for (const Step& s : steps_) {
    if (s.axis < 0 || s.axis >= lat.dim()) throw Error(ErrorKind::InvalidPath, "step axis out of range");
    if (s.forward) {
      bond_steps_.push_back({lat.bond_index({x, s.axis}), +1});
      x = lat.neighbor(x, s.axis);
    } else {
      const int back = lat.neighbor_back(x, s.axis);
      bond_steps_.push_back({lat.bond_index({back, s.axis}), -1});
      x = back;
    }
    vertices_.push_back(x);
  }
}

Path Path::from_vertices(const Lattice& lat, std::span<const int> sites) {
  if (sites.empty()) throw Error(ErrorKind::InvalidPath, "empty vertex list");
  for (int s : sites)
    if (s < 0 || s >= lat.num_sites()) throw Error(ErrorKind::InvalidPath, "site out of range");
  std::vector<Step> steps;
  for (std::size_t k = 0; k + 1 < sites.size(); ++k) {
    const int x = sites[k];
    const int y = sites[k + 1];
    bool found = false;
    for (int i = 0; i < lat.dim() && !found; ++i) {
      if (lat.neighbor(x, i) == y) {
        steps.push_back({i, true});
        found = true;
      } else if (lat.neighbor_back(x, i) == y) {
        steps.push_back({i, false});
        found = true;
      }
    }
    if (!found) {
      throw Error(ErrorKind::InvalidPath,
                  "sites " + std::to_string(x) + " and " + std::to_string(y) + " are not nearest neighbours");
    }
  }
  return Path(lat, sites.front(), std::move(steps));
}

int theta(const Lattice& lat, int axis, int site) {
  const auto x = lat.coords(site);
  int value = 0;
  for (int k = 0; k < axis; ++k) value += x[k];
  if (x[axis] == lat.half_side()) value += 1;
  return parity_of(value);
}

GaugeField zero_field(const Lattice& lat) { return GaugeField(lat); }

GaugeField pi_flux_field(const Lattice& lat) { return compose(lat, zero_field(lat)); }

GaugeField compose(const Lattice& lat, const GaugeField& tilde) {
  require_field(lat, tilde);
  GaugeField a(lat);
  for (int b = 0; b < lat.num_bonds(); ++b) {
    const Bond bond = lat.bond(b);
    a.set(b, kPi / 2 + kPi * theta(lat, bond.axis, bond.site) + tilde.angle(b));
  }
  return a;
}

GaugeField decompose(const Lattice& lat, const GaugeField& physical) {
  require_field(lat, physical);
  GaugeField tilde(lat);
  for (int b = 0; b < lat.num_bonds(); ++b) {
    const Bond bond = lat.bond(b);
    tilde.set(b, physical.angle(b) - kPi / 2 - kPi * theta(lat, bond.axis, bond.site));
  }
  return tilde;
}

GaugeField add(const GaugeField& a, const GaugeField& b) {
  if (a.dim() != b.dim() || a.half_side() != b.half_side() || a.num_bonds() != b.num_bonds())
    throw Error(ErrorKind::InvalidArgument, "adding fields on different lattices");
  GaugeField out = a;
  for (int k = 0; k < a.num_bonds(); ++k) out.set(k, a.angle(k) + b.angle(k));
  return out;
}

double flux(const Lattice& lat, const GaugeField& a, const Plaquette& p) {
  require_field(lat, a);
  double sum = 0.0;
  for (const BondStep& s : lat.plaquette_steps(p)) sum += s.orientation * a.angle(s.bond);
  return normalize_angle(sum);
}

double flux_distance(const Lattice& lat, const GaugeField& a) {
  double worst = 0.0;
  for (const Plaquette& p : lat.plaquettes()) worst = std::max(worst, std::abs(flux(lat, a, p)));
  return worst;
}

GaugeField pure_gauge(const Lattice& lat, const SitePhases& phases) {
  if (static_cast<int>(phases.phi.size()) != lat.num_sites())
    throw Error(ErrorKind::InvalidArgument, "site phases do not cover the lattice");
  GaugeField a(lat);
  for (int b = 0; b < lat.num_bonds(); ++b) {
    const Bond bond = lat.bond(b);
    a.set(b, phases.phi[bond.site] - phases.phi[lat.bond_head(b)]);
  }
  return a;
}

GaugeField random_field(const Lattice& lat, std::uint64_t seed) {
  auto rng = make_rng(seed, Stream::GaugeField);
  GaugeField a(lat);
  for (int b = 0; b < lat.num_bonds(); ++b) a.set(b, -kPi + 2.0 * kPi * rng.uniform_open_closed());
  return a;
}

SitePhases random_phases(const Lattice& lat, std::uint64_t seed) {
  auto rng = make_rng(seed, Stream::SitePhases);
  SitePhases phases;
  phases.phi.resize(lat.num_sites());
  for (double& p : phases.phi) p = normalize_angle(-kPi + 2.0 * kPi * rng.uniform_open_closed());
  return phases;
}

double string_phase(const Lattice& lat, const GaugeField& a, const Path& path) {
  require_field(lat, a);
  double sum = 0.0;
  for (const BondStep& s : path.bond_steps()) sum += s.orientation * a.angle(s.bond);
  return normalize_angle(sum);
}

std::string gauge_to_json(const Lattice& lat, const GaugeField& a) {
  require_field(lat, a);
  nlohmann::ordered_json j;
  j["d"] = lat.dim();
  j["L"] = lat.half_side();
  auto& entries = j["entries"] = nlohmann::ordered_json::array();
  for (int b = 0; b < lat.num_bonds(); ++b) {
    const Bond bond = lat.bond(b);
    const auto x = lat.coords(bond.site);
    entries.push_back({{"x", std::vector<int>(x.begin(), x.end())}, {"i", bond.axis + 1}, {"angle", a.angle(b)}});
  }
  return j.dump(1);
}

GaugeField gauge_from_json(const Lattice& lat, const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
  try {
    if (j.at("d").get<int>() != lat.dim() || j.at("L").get<int>() != lat.half_side())
      throw Error(ErrorKind::InvalidArgument, "gauge field file is for a different lattice");
    GaugeField a(lat);
    std::vector<bool> seen(lat.num_bonds(), false);
    for (const auto& e : j.at("entries")) {
      const auto x = e.at("x").get<std::vector<int>>();
      const int axis = e.at("i").get<int>() - 1;
      if (axis < 0 || axis >= lat.dim()) throw Error(ErrorKind::InvalidArgument, "axis out of range in gauge file");
      const int b = lat.bond_index({lat.site_index(x), axis});
      a.set(b, e.at("angle").get<double>());
      seen[b] = true;
    }
    for (bool s : seen)
      if (!s) throw Error(ErrorKind::InvalidArgument, "gauge field file does not cover every bond");
    return a;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

}  // namespace fluxlab
