#include "fluxlab/lattice.hpp"

#include <string>

#include "fluxlab/error.hpp"

namespace fluxlab {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DimensionTooSmall: return "dimension-too-small";
    case ErrorKind::SizeExceedsCap: return "size-exceeds-cap";
    case ErrorKind::InvalidPath: return "invalid-path";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::NotBlockDiagonal: return "not-block-diagonal";
    case ErrorKind::NotHermitian: return "not-hermitian";
    case ErrorKind::EigensolverFailure: return "eigensolver-failure";
    case ErrorKind::DegenerateToleranceAmbiguity: return "degenerate-tolerance-ambiguity";
    case ErrorKind::UnknownLabel: return "unknown-label";
    case ErrorKind::UnknownKind: return "kind-unknown";
    case ErrorKind::ParseError: return "parse-error";
    case ErrorKind::UnknownKey: return "unknown-key";
    case ErrorKind::ConstraintViolation: return "constraint-violation";
    case ErrorKind::Io: return "io-error";
  }
  return "error";
}

Lattice build_lattice(int d, int L, int mode_cap) {
  if (d < 2) throw Error(ErrorKind::DimensionTooSmall, "d = " + std::to_string(d) + " < 2");
  if (L < 1) throw Error(ErrorKind::InvalidArgument, "L = " + std::to_string(L) + " < 1");

  const long side = 2 * static_cast<long>(L);
  long sites = 1;
  for (int k = 0; k < d; ++k) {
    sites *= side;
    if (2 * sites > mode_cap) {
      throw Error(ErrorKind::SizeExceedsCap, "lattice d=" + std::to_string(d) + ", L=" + std::to_string(L) +
                                                 " needs more than " + std::to_string(mode_cap) + " modes");
    }
  }

  Lattice lat;
  lat.d_ = d;
  lat.L_ = L;
  lat.mode_cap_ = mode_cap;
  const int n = static_cast<int>(sites);
  lat.coords_.resize(n);
  lat.parity_.resize(n);
  for (int s = 0; s < n; ++s) {
    std::vector<int> x(d);
    int rest = s;
    for (int k = d - 1; k >= 0; --k) {
      x[k] = rest % static_cast<int>(side) - L + 1;
      rest /= static_cast<int>(side);
    }
    int sum = 0;
    for (int v : x) sum += v;
    lat.parity_[s] = parity_of(sum) ? Parity::Odd : Parity::Even;
    lat.coords_[s] = std::move(x);
  }

  lat.forward_.resize(static_cast<std::size_t>(n) * d);
  lat.backward_.resize(static_cast<std::size_t>(n) * d);
  for (int s = 0; s < n; ++s) {
    for (int i = 0; i < d; ++i) {
      std::vector<int> y = lat.coords_[s];
      y[i] += 1;
      lat.forward_[s * d + i] = lat.site_index(y);
      y[i] -= 2;
      lat.backward_[s * d + i] = lat.site_index(y);
    }
  }

  for (int s = 0; s < n; ++s)
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) lat.plaquettes_.push_back({s, i, j});
  return lat;
}

int Lattice::site_index(std::span<const int> x) const {
  if (static_cast<int>(x.size()) != d_) throw Error(ErrorKind::InvalidArgument, "coordinate rank mismatch");
  const int side = 2 * L_;
  int index = 0;
  for (int k = 0; k < d_; ++k) {
    int offset = (x[k] + L_ - 1) % side;
    if (offset < 0) offset += side;
    index = index * side + offset;
  }
  return index;
}

std::array<BondStep, 4> Lattice::plaquette_steps(const Plaquette& p) const {
  const int x = p.site;
  const int xi = neighbor(x, p.axis_i);
  const int xj = neighbor(x, p.axis_j);
  return {BondStep{bond_index({x, p.axis_i}), +1}, BondStep{bond_index({xi, p.axis_j}), +1},
          BondStep{bond_index({xj, p.axis_i}), -1}, BondStep{bond_index({x, p.axis_j}), -1}};
}

}  // namespace fluxlab
