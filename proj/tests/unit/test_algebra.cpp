#include <doctest.h>

#include "modfactor/algebra.hpp"
#include "modfactor/error.hpp"
#include "test_support.hpp"

using namespace modfactor;

TEST_SUITE("algebra") {

TEST_CASE("spec dimensions") {
  const AlgebraSpec s({2, 1});
  CHECK(s.dim() == 5);
  CHECK(s.rep_dim() == 3);
  CHECK_THROWS_AS(AlgebraSpec(std::vector<int>{}), Error);
  CHECK_THROWS_AS(AlgebraSpec({2, 0}), Error);
}

TEST_CASE("unit of [2,1]") {
  const AlgebraElement u = AlgebraElement::unit(AlgebraSpec({2, 1}));
  CHECK(u.block(0) == ComplexMatrix::Identity(2, 2));
  CHECK(u.block(1) == ComplexMatrix::Identity(1, 1));
  CHECK(trace(u) == Complex(3.0));
}

TEST_CASE("involution and unit laws") {
  Rng rng(1);
  for (const auto& spec : test::small_specs()) {
    const AlgebraElement a = rng.gaussian_element(spec);
    const AlgebraElement b = rng.gaussian_element(spec);
    CHECK((a.adjoint().adjoint() - a).max_abs() == 0.0);
    CHECK(((a * b).adjoint() - b.adjoint() * a.adjoint()).max_abs() < 1e-14);
    const AlgebraElement one = AlgebraElement::unit(spec);
    CHECK((one * a - a).max_abs() == 0.0);
    CHECK((a * one - a).max_abs() == 0.0);
    CHECK(std::abs(trace(a * b) - trace(b * a)) < 1e-12 * (1.0 + a.max_abs() * b.max_abs()));
  }
}

TEST_CASE("multiplication agrees with the block-diagonal representation") {
  Rng rng(2);
  for (const auto& spec : test::small_specs()) {
    const AlgebraElement a = rng.gaussian_element(spec);
    const AlgebraElement b = rng.gaussian_element(spec);
    CHECK(max_abs((a * b).rep() - a.rep() * b.rep()) < 1e-14);
    CHECK(max_abs((a + b).rep() - (a.rep() + b.rep())) < 1e-15);
    CHECK(max_abs(a.adjoint().rep() - a.rep().adjoint()) == 0.0);
  }
}

TEST_CASE("spec mismatch is rejected") {
  const AlgebraElement a = AlgebraElement::unit(AlgebraSpec({2}));
  const AlgebraElement b = AlgebraElement::unit(AlgebraSpec({1, 1}));
  CHECK_THROWS_AS(a * b, Error);
  CHECK_THROWS_AS(a + b, Error);
}

TEST_CASE("is_positive") {
  Rng rng(3);
  for (const auto& spec : test::small_specs()) {
    const AlgebraElement a = rng.gaussian_element(spec);
    CHECK(is_positive(a.adjoint() * a));
  }
  AlgebraElement d = AlgebraElement::zero(AlgebraSpec({2}));
  d.block(0)(0, 0) = 1.0;
  d.block(0)(1, 1) = -0.1;
  CHECK_FALSE(is_positive(d));
  // Non-Hermitian
  AlgebraElement n = AlgebraElement::zero(AlgebraSpec({2}));
  n.block(0)(0, 1) = 1.0;
  CHECK_FALSE(is_positive(n));
}

TEST_CASE("is_positive matches block eigenvalue signs") {
  Rng rng(4);
  const AlgebraSpec spec({1, 2});
  for (int trial = 0; trial < 100; ++trial) {
    AlgebraElement h = rng.gaussian_element(spec);
    h = Complex(0.5) * (h + h.adjoint());
    bool expected = true;
    for (const auto& blk : h.blocks()) {
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(blk);
      expected = expected && es.eigenvalues().minCoeff() >= 0.0;
    }
    CHECK(is_positive(h) == expected);
  }
}

TEST_CASE("trace is faithful on matrix units") {
  const AlgebraSpec spec({2, 1});
  const auto basis = canonical_basis(spec);
  for (int i = 0; i < spec.dim(); ++i) {
    const BasisIndex bi = basis_index(spec, i);
    CHECK(trace(basis[i]) == Complex(bi.row == bi.col ? 1.0 : 0.0));
  }
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const AlgebraElement a = rng.gaussian_element(spec);
    CHECK(trace(a.adjoint() * a).real() > 0.0);
  }
  CHECK(trace(AlgebraElement::zero(spec)) == Complex(0.0));
}

TEST_CASE("canonical basis ordering") {
  const auto basis = canonical_basis(AlgebraSpec({2}));
  REQUIRE(basis.size() == 4);
  CHECK(basis[0].block(0)(0, 0) == Complex(1.0));
  CHECK(basis[1].block(0)(0, 1) == Complex(1.0));
  CHECK(basis[2].block(0)(1, 0) == Complex(1.0));
  CHECK(basis[3].block(0)(1, 1) == Complex(1.0));

  const auto two = canonical_basis(AlgebraSpec({1, 1}));
  CHECK((two[0] * two[0] - two[0]).max_abs() == 0.0);
  CHECK((two[0] * two[1]).max_abs() == 0.0);

  Rng rng(6);
  for (const auto& spec : test::small_specs()) {
    const AlgebraElement a = rng.gaussian_element(spec);
    CHECK((AlgebraElement::from_coordinates(spec, a.coordinates()) - a).max_abs() == 0.0);
  }
}

TEST_CASE("structure constants") {
  const AlgebraSpec m2({2});
  CHECK(max_abs(structure_constants(AlgebraElement::unit(m2)) - ComplexMatrix::Identity(4, 4)) == 0.0);
  // E11 * E12 = E12: column of E12 has a 1 in the E12 slot.
  const ComplexMatrix l = structure_constants(AlgebraElement::basis(m2, 0));
  CHECK(l(1, 1) == Complex(1.0));
  CHECK(l(2, 2) == Complex(0.0));

  Rng rng(7);
  for (const auto& spec : test::small_specs()) {
    const AlgebraElement a = rng.gaussian_element(spec);
    const AlgebraElement b = rng.gaussian_element(spec);
    CHECK(max_abs(structure_constants(a * b) - structure_constants(a) * structure_constants(b)) < 1e-12);
    // L(a) applied to coordinates of b is a*b.
    CHECK(max_abs(structure_constants(a) * b.coordinates() - (a * b).coordinates()) < 1e-13);
    CHECK(max_abs(right_structure_constants(b) * a.coordinates() - (a * b).coordinates()) < 1e-13);
  }
}

TEST_CASE("conditional expectation") {
  const AlgebraSpec spec({2, 1});
  Rng rng(8);
  const AlgebraElement a = rng.gaussian_element(spec);
  CHECK((conditional_expectation(a.rep(), spec) - a).max_abs() == 0.0);

  const ComplexMatrix ones = ComplexMatrix::Ones(3, 3);
  const AlgebraElement e = conditional_expectation(ones, spec);
  CHECK(e.block(0) == ComplexMatrix::Ones(2, 2));
  CHECK(e.block(1) == ComplexMatrix::Ones(1, 1));

  CHECK((conditional_expectation(ComplexMatrix::Identity(3, 3), spec) - AlgebraElement::unit(spec)).max_abs() == 0.0);
  for (int trial = 0; trial < 100; ++trial) {
    const ComplexMatrix x = rng.gaussian(3, 3);
    CHECK(is_positive(conditional_expectation(x.adjoint() * x, spec)));
  }
  CHECK_THROWS_AS(conditional_expectation(ComplexMatrix::Zero(2, 2), spec), Error);
}

}  // TEST_SUITE
