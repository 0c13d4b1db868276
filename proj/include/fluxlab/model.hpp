#pragma once

#include <utility>

#include "fluxlab/fock.hpp"
#include "fluxlab/gauge.hpp"
#include "fluxlab/lattice.hpp"

namespace fluxlab {

struct ModelParams {
  double kappa = 1.0;
  double g = 1.0;
  double K = 1.0;
  double beta = 1.0;

  /// Throws Error{ConstraintViolation} naming the first offending field.
  void validate() const;
};

/// Sign convention of the classical plaquette energy.
enum class FluxConvention {
  Original,  ///< +K sum cos F(A)
  Barred,    ///< -K sum cos F(tilde A)
};

/// Fermionic Hamiltonian kept symbolic, plus the classical gauge-field energy
/// which commutes with everything and is carried as a scalar shift.
struct HamiltonianBundle {
  int num_sites = 0;
  TermList terms;
  double classical_shift = 0.0;
  /// Spin-independent hopping with a singlet pair term: commutes with total spin.
  bool spin_symmetric = false;
  /// Invariant under the antiunitary particle-hole map a_{x,s} -> (-1)^{|x|} a_{x,s}^dagger
  /// (needs a bipartite lattice, which every even-sided torus is).
  bool particle_hole_mirror = false;

  [[nodiscard]] int num_modes() const noexcept { return 2 * num_sites; }
  [[nodiscard]] FockOperator fermionic() const { return materialize(terms, num_modes()); }
};

/// kappa * sum_{(x,i)} sum_s (a+_{x,s} e^{iA} a_{y,s} + h.c.), y = x + e_i.
[[nodiscard]] TermList hop_terms(const Lattice& lat, const GaugeField& a, double kappa);
/// -g * sum_{(x,i)} (e^{2iA} a+_{x,up} a+_{x,dn} a_{y,dn} a_{y,up} + h.c.).
[[nodiscard]] TermList int_terms(const Lattice& lat, const GaugeField& a, double g);
/// i kappa * sum_{(x,i)} sum_s (-1)^{theta_i(x)} (a+_{x,s} e^{i tA} a_{y,s} - h.c.).
[[nodiscard]] TermList barred_hop_terms(const Lattice& lat, const GaugeField& tilde, double kappa);
/// Single-spin, single-axis piece of the barred hopping with the field scaled
/// by eta_s (+1 up, -1 down).
[[nodiscard]] TermList barred_hop_terms(const Lattice& lat, const GaugeField& tilde, double kappa, Spin spin,
                                        int axis);
/// +g * sum_{(x,i)} (e^{2i tA} a+_{x,up} a+_{x,dn} a_{y,dn} a_{y,up} + h.c.).
[[nodiscard]] TermList barred_int_terms(const Lattice& lat, const GaugeField& tilde, double g);

[[nodiscard]] FockOperator build_hop(const Lattice& lat, const GaugeField& a, double kappa);
[[nodiscard]] FockOperator build_int(const Lattice& lat, const GaugeField& a, double g);
[[nodiscard]] FockOperator build_barred_hop(const Lattice& lat, const GaugeField& tilde, double kappa);
[[nodiscard]] FockOperator build_barred_int(const Lattice& lat, const GaugeField& tilde, double g);

[[nodiscard]] double flux_energy(const Lattice& lat, const GaugeField& a, double K, FluxConvention convention);

/// Pair creation a+_{x,up} a+_{x,dn}.
[[nodiscard]] TermList pair_create(int site);
/// Pair annihilation a_{x,dn} a_{x,up}.
[[nodiscard]] TermList pair_annihilate(int site);
/// Gamma^(1)_x = P+_x + P_x and Gamma^(2)_x = i (P+_x - P_x).
[[nodiscard]] std::pair<TermList, TermList> gamma_terms(int site);
[[nodiscard]] std::pair<FockOperator, FockOperator> gamma_ops(const Lattice& lat, int site);
/// a+_{x,up} a+_{x,dn} a_{y,dn} a_{y,up}.
[[nodiscard]] TermList cooper_pair_terms(int x, int y);

/// Barred hop + barred interaction, shift = barred flux energy.
[[nodiscard]] HamiltonianBundle build_full(const Lattice& lat, const ModelParams& p, const GaugeField& tilde);
/// Same fermionic part without the classical term (the operator inside the traces
/// compared by the pi-flux inequality).
[[nodiscard]] HamiltonianBundle build_fermionic(const Lattice& lat, const ModelParams& p, const GaugeField& tilde);

}  // namespace fluxlab
