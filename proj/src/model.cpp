#include "fluxlab/model.hpp"

#include <cmath>
#include <string>

#include "fluxlab/error.hpp"

namespace fluxlab {

void ModelParams::validate() const {
  auto bad = [](const char* key, const std::string& why) { throw Error(ErrorKind::ConstraintViolation, std::string(key) + ": " + why); };
  if (!std::isfinite(kappa)) bad("kappa", "must be finite");
  if (!std::isfinite(g) || g < 0.0) bad("g", "must be >= 0");
  if (!std::isfinite(K) || K <= 0.0) bad("K", "must be > 0");
  if (!std::isfinite(beta) || beta <= 0.0) bad("beta", "must be > 0");
}

namespace {

cplx phase(double angle) { return std::polar(1.0, angle); }

void require_field(const Lattice& lat, const GaugeField& a) {
  if (!a.lives_on(lat)) throw Error(ErrorKind::InvalidArgument, "gauge field does not live on this lattice");
}

void add_pair_hop(TermList& out, cplx coeff, int x, int y) {
  out.add(coeff, {cdag(x, Spin::Up), cdag(x, Spin::Down), c(y, Spin::Down), c(y, Spin::Up)});
  out.add(std::conj(coeff), {cdag(y, Spin::Up), cdag(y, Spin::Down), c(x, Spin::Down), c(x, Spin::Up)});
}

}  // namespace

TermList hop_terms(const Lattice& lat, const GaugeField& a, double kappa) {
  require_field(lat, a);
  TermList out;
  if (kappa == 0.0) return out;
  for (int b = 0; b < lat.num_bonds(); ++b) {
    const int x = lat.bond(b).site;
    const int y = lat.bond_head(b);
    const cplx t = kappa * phase(a.angle(b));
    for (Spin s : {Spin::Up, Spin::Down}) {
      out.add(t, {cdag(x, s), c(y, s)});
      out.add(std::conj(t), {cdag(y, s), c(x, s)});
    }
  }
  return out;
}

TermList int_terms(const Lattice& lat, const GaugeField& a, double g) {
  require_field(lat, a);
  TermList out;
  if (g == 0.0) return out;
  for (int b = 0; b < lat.num_bonds(); ++b) add_pair_hop(out, -g * phase(2.0 * a.angle(b)), lat.bond(b).site, lat.bond_head(b));
  return out;
}

TermList barred_hop_terms(const Lattice& lat, const GaugeField& tilde, double kappa, Spin spin, int axis) {
  require_field(lat, tilde);
  if (axis < 0 || axis >= lat.dim()) throw Error(ErrorKind::InvalidArgument, "axis out of range");
  TermList out;
  if (kappa == 0.0) return out;
  const double eta = spin == Spin::Up ? 1.0 : -1.0;
  for (int x = 0; x < lat.num_sites(); ++x) {
    const int b = lat.bond_index({x, axis});
    const int y = lat.bond_head(b);
    const double sign = theta(lat, axis, x) ? -1.0 : 1.0;
    const cplx t = cplx(0.0, kappa * sign) * phase(eta * tilde.angle(b));
    out.add(t, {cdag(x, spin), c(y, spin)});
    out.add(std::conj(t), {cdag(y, spin), c(x, spin)});
  }
  return out;
}

TermList barred_hop_terms(const Lattice& lat, const GaugeField& tilde, double kappa) {
  require_field(lat, tilde);
  TermList out;
  if (kappa == 0.0) return out;
  for (int b = 0; b < lat.num_bonds(); ++b) {
    const Bond bond = lat.bond(b);
    const int x = bond.site;
    const int y = lat.bond_head(b);
    const double sign = theta(lat, bond.axis, x) ? -1.0 : 1.0;
    const cplx t = cplx(0.0, kappa * sign) * phase(tilde.angle(b));
    for (Spin s : {Spin::Up, Spin::Down}) {
      out.add(t, {cdag(x, s), c(y, s)});
      out.add(std::conj(t), {cdag(y, s), c(x, s)});
    }
  }
  return out;
}

TermList barred_int_terms(const Lattice& lat, const GaugeField& tilde, double g) {
  require_field(lat, tilde);
  TermList out;
  if (g == 0.0) return out;
  for (int b = 0; b < lat.num_bonds(); ++b)
    add_pair_hop(out, g * phase(2.0 * tilde.angle(b)), lat.bond(b).site, lat.bond_head(b));
  return out;
}

FockOperator build_hop(const Lattice& lat, const GaugeField& a, double kappa) {
  return materialize(hop_terms(lat, a, kappa), lat.num_modes());
}

FockOperator build_int(const Lattice& lat, const GaugeField& a, double g) {
  return materialize(int_terms(lat, a, g), lat.num_modes());
}

FockOperator build_barred_hop(const Lattice& lat, const GaugeField& tilde, double kappa) {
  return materialize(barred_hop_terms(lat, tilde, kappa), lat.num_modes());
}

FockOperator build_barred_int(const Lattice& lat, const GaugeField& tilde, double g) {
  return materialize(barred_int_terms(lat, tilde, g), lat.num_modes());
}

double flux_energy(const Lattice& lat, const GaugeField& a, double K, FluxConvention convention) {
  double sum = 0.0;
  for (const Plaquette& p : lat.plaquettes()) sum += std::cos(flux(lat, a, p));
  return convention == FluxConvention::Original ? K * sum : -K * sum;
}

TermList pair_create(int site) { return {Term{1.0, {cdag(site, Spin::Up), cdag(site, Spin::Down)}}}; }

TermList pair_annihilate(int site) { return {Term{1.0, {c(site, Spin::Down), c(site, Spin::Up)}}}; }

std::pair<TermList, TermList> gamma_terms(int site) {
  const TermList up = pair_create(site);
  const TermList down = pair_annihilate(site);
  TermList g1 = up + down;
  TermList g2 = cplx(0.0, 1.0) * up + cplx(0.0, -1.0) * down;
  return {g1, g2};
}

std::pair<FockOperator, FockOperator> gamma_ops(const Lattice& lat, int site) {
  if (site < 0 || site >= lat.num_sites()) throw Error(ErrorKind::InvalidArgument, "site out of range");
  const auto [g1, g2] = gamma_terms(site);
  return {materialize(g1, lat.num_modes()), materialize(g2, lat.num_modes())};
}

TermList cooper_pair_terms(int x, int y) { return pair_create(x) * pair_annihilate(y); }

HamiltonianBundle build_fermionic(const Lattice& lat, const ModelParams& p, const GaugeField& tilde) {
  p.validate();
  HamiltonianBundle h;
  h.num_sites = lat.num_sites();
  h.terms = barred_hop_terms(lat, tilde, p.kappa) + barred_int_terms(lat, tilde, p.g);
  h.spin_symmetric = true;
  h.particle_hole_mirror = true;
  return h;
}

HamiltonianBundle build_full(const Lattice& lat, const ModelParams& p, const GaugeField& tilde) {
  HamiltonianBundle h = build_fermionic(lat, p, tilde);
  h.classical_shift = flux_energy(lat, tilde, p.K, FluxConvention::Barred);
  return h;
}

}  // namespace fluxlab
