#include "doctest.h"

#include <cmath>
#include <random>

#include "fluxlab/error.hpp"
#include "fluxlab/fock.hpp"

using namespace fluxlab;

namespace {

ModeIndex mode(int m) { return {m / 2, m % 2 == 0 ? Spin::Up : Spin::Down}; }

bool is_integer_matrix(const FockOperator& op) {
  const SparseMatrix& m = op.matrix();
  for (Eigen::Index k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it)
      if (it.value().imag() != 0.0 || it.value().real() != std::round(it.value().real())) return false;
  return true;
}

}  // namespace

TEST_CASE("canonical anticommutation relations on 8 modes are exact") {
  constexpr int n = 8;
  const FockOperator one = identity(n);
  const FockOperator zero = zero_operator(n);
  for (int a = 0; a < n; ++a) {
    const FockOperator ca = annihilate(n, mode(a));
    const FockOperator cda = create(n, mode(a));
    CHECK(is_integer_matrix(ca));
    CHECK(max_abs_diff(adjoint(ca), cda) == 0.0);
    CHECK(max_abs_diff(cda * cda, zero) == 0.0);
    for (int b = 0; b < n; ++b) {
      const FockOperator cb = annihilate(n, mode(b));
      const FockOperator cdb = create(n, mode(b));
      const FockOperator ab = anticommutator(ca, cdb);
      CHECK(is_integer_matrix(ab));
      CHECK(max_abs_diff(ab, a == b ? one : zero) == 0.0);
      CHECK(max_abs_diff(anticommutator(ca, cb), zero) == 0.0);
      CHECK(max_abs_diff(anticommutator(cda, cdb), zero) == 0.0);
    }
  }
}

TEST_CASE("sign convention: a^dagger_m picks up (-1)^(occupied modes below m)") {
  const FockOperator c2 = create(4, mode(2));
  // |0b0011> -> |0b0111> with two occupied modes below mode 2
  CHECK(c2.matrix().coeff(0b0111, 0b0011) == cplx(1.0, 0.0));
  CHECK(c2.matrix().coeff(0b0101, 0b0001) == cplx(-1.0, 0.0));
  CHECK(c2.matrix().coeff(0b0110, 0b0010) == cplx(-1.0, 0.0));
  CHECK(c2.matrix().coeff(0b0100, 0b0000) == cplx(1.0, 0.0));
  CHECK(mode_id(3, Spin::Down) == 7);
}

TEST_CASE("number operators") {
  constexpr int n = 4;
  for (int m = 0; m < n; ++m) {
    const FockOperator nm = number(n, mode(m));
    CHECK(max_abs_diff(nm * nm, nm) == 0.0);
    CHECK(nm.matrix().diagonal().sum() == cplx(8.0, 0.0));
    CHECK(max_abs_diff(create(n, mode(m)) * annihilate(n, mode(m)), nm) == 0.0);
  }
  const FockOperator nup = total_number(n, Spin::Up);
  CHECK(max_abs_diff(nup, number(n, mode(0)) + number(n, mode(2))) == 0.0);
}

TEST_CASE("even operators on disjoint supports commute") {
  constexpr int n = 6;
  const FockOperator hop01 = create(n, mode(0)) * annihilate(n, mode(1));
  const FockOperator pair45 = create(n, mode(4)) * create(n, mode(5));
  CHECK(commutator(hop01, pair45).max_abs() == 0.0);
}

TEST_CASE("term lists agree with operator products") {
  constexpr int n = 6;
  TermList t;
  t.add({0.3, -1.2}, {cdag(0, Spin::Up), cdag(0, Spin::Down), c(2, Spin::Down), c(2, Spin::Up)});
  t.add({0.7, 0.0}, {cdag(1, Spin::Up), c(0, Spin::Up)});
  const FockOperator direct = cplx(0.3, -1.2) * (create(n, {0, Spin::Up}) * create(n, {0, Spin::Down}) *
                                                 annihilate(n, {2, Spin::Down}) * annihilate(n, {2, Spin::Up})) +
                              cplx(0.7, 0.0) * (create(n, {1, Spin::Up}) * annihilate(n, {0, Spin::Up}));
  const FockOperator mat = materialize(t, n);
  CHECK(max_abs_diff(mat, direct) < 1e-15);
  CHECK(max_abs_diff(materialize(adjoint(t), n), adjoint(mat)) < 1e-15);
  CHECK(max_abs_diff(materialize(t * t, n), mat * mat) < 1e-15);
  CHECK(t.conserves_spin_numbers());

  TermList mirrored = spin_mirror(t);
  TermList expect;
  expect.add({0.3, 1.2}, {cdag(0, Spin::Down), cdag(0, Spin::Up), c(2, Spin::Up), c(2, Spin::Down)});
  expect.add({0.7, 0.0}, {cdag(1, Spin::Down), c(0, Spin::Down)});
  CHECK(max_abs_diff(materialize(mirrored, n), materialize(expect, n)) < 1e-15);

  const FockOperator h = mat + adjoint(mat);
  CHECK(h.is_hermitian());
  CHECK_FALSE(mat.is_hermitian());
}

TEST_CASE("apply on vectors matches the matrix") {
  constexpr int n = 6;
  TermList t;
  t.add({1.0, 0.5}, {cdag(2, Spin::Up), c(1, Spin::Up)});
  t.add({-0.4, 0.0}, {cdag(0, Spin::Up), cdag(0, Spin::Down), c(1, Spin::Down), c(1, Spin::Up)});
  std::mt19937 gen(3);
  std::normal_distribution<double> nd;
  Eigen::VectorXcd v(64);
  for (Eigen::Index k = 0; k < v.size(); ++k) v[k] = {nd(gen), nd(gen)};
  CHECK((apply_terms(t, v) - materialize(t, n).matrix() * v).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("sector bases and split") {
  const SectorBasis b(4, 2, 2);
  CHECK(b.size() == 36);
  for (Eigen::Index k = 0; k < b.size(); ++k) CHECK(b.index(b.state(k)) == k);
  CHECK(SectorBasis(8, 4, 4).size() == 4900);
  CHECK(binomial(8, 4) == 70);

  constexpr int n = 8;
  TermList t;
  t.add({1.0, 0.3}, {cdag(0, Spin::Up), c(3, Spin::Up)});
  t.add({1.0, -0.3}, {cdag(3, Spin::Up), c(0, Spin::Up)});
  t.add({0.5, 0.0}, {cdag(1, Spin::Up), cdag(1, Spin::Down), c(2, Spin::Down), c(2, Spin::Up)});
  t.add({0.5, 0.0}, {cdag(2, Spin::Up), cdag(2, Spin::Down), c(1, Spin::Down), c(1, Spin::Up)});
  const FockOperator h = materialize(t, n);
  const auto blocks = sector_split(h);
  CHECK(blocks.size() == 25);
  Eigen::Index total = 0;
  Eigen::Index largest = 0;
  for (const auto& [key, m] : blocks) {
    total += m.rows();
    largest = std::max(largest, m.rows());
    const SectorBasis basis(4, key.first, key.second);
    CHECK((Eigen::MatrixXcd(sector_matrix(t, basis)) - m).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK(total == 256);
  CHECK(largest == 36);
  CHECK(max_abs_diff(assemble(n, blocks), h) == 0.0);

  const FockOperator bad = create(n, mode(0));
  try {
    (void)sector_split(bad);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotBlockDiagonal);
  }
}

TEST_CASE("full-space cap") {
  CHECK_THROWS_AS((void)identity(kFullSpaceModeCap + 2), Error);
}
