#include <doctest.h>

#include "modfactor/error.hpp"
#include "modfactor/stinespring.hpp"
#include "test_support.hpp"

using namespace modfactor;

TEST_SUITE("stinespring") {

TEST_CASE("column space correspondence") {
  const Correspondence h = column_space(3);
  CHECK(check_left_action(h).pass);
  CHECK(module_dim(h.module()) == 3);
}

TEST_CASE("identity map on M_2") {
  const AlgebraSpec m2({2});
  const PresentedModule e = matrix_module(2, 2);
  const ModuleMap t(e, e, ComplexMatrix::Identity(e.free_dim(), e.free_dim()));
  const LinearMap id = identity_map(m2);
  REQUIRE(is_phi_map(t, id).pass);
  const StinespringData s = stinespring(t, id);
  CHECK(s.pass);
  CHECK(s.h1_dim == 2);
  CHECK(s.h2_dim == 2);
  CHECK(s.k1_dim() == 2);
  REQUIRE(s.v.rows() == 2);
  CHECK(max_abs(s.v.adjoint() * s.v - ComplexMatrix::Identity(2, 2)) < 1e-12);
  CHECK(max_abs(s.v * s.v.adjoint() - ComplexMatrix::Identity(2, 2)) < 1e-12);
  // rho(b) = V b V*, so rho is the identity representation up to V.
  const auto basis = canonical_basis(m2);
  for (std::size_t a = 0; a < basis.size(); ++a) {
    CHECK(max_abs(s.rho[a] - s.v * basis[a].block(0) * s.v.adjoint()) < 1e-12);
  }
  const CyclicityReport c = cyclicity_check(s);
  CHECK(c.stinespring_cyclic);
  CHECK(c.nondegenerate);
}

TEST_CASE("scalar case") {
  const AlgebraSpec c1({1});
  const PresentedModule e = free_module(c1, 1);
  const PresentedModule f = matrix_module(1, 1);
  ComplexMatrix m(1, 1);
  m(0, 0) = std::sqrt(2.0);
  const ModuleMap t(e, f, m);
  const LinearMap phi(c1, c1, {Complex(2.0) * AlgebraElement::unit(c1)});
  const StinespringData s = stinespring(t, phi);
  CHECK(s.pass);
  const CyclicityReport c = cyclicity_check(s);
  CHECK(c.rho_v_span == 1);
  CHECK(c.psi_span == 1);
  CHECK(c.stinespring_cyclic);
  CHECK(c.nondegenerate);
  CHECK(std::abs(std::norm(s.v(0, 0)) - 2.0) < 1e-12);
}

TEST_CASE("random operator phi-maps satisfy the dilation identities") {
  int done = 0;
  for (std::uint64_t seed = 0; done < 12 && seed < 200; ++seed) {
    const AlgebraSpec& b = test::small_specs()[seed % 6];
    const int d1 = 1 + static_cast<int>(seed % 3);
    const PresentedModule e = random_module(b, 1 + static_cast<int>(seed % 2), seed);
    const PhiMapInstance inst = random_operator_phi_map(e, d1, 1, static_cast<int>(seed % 2), seed);
    if (as_matrix_module(inst.t.codomain())->first > 4) continue;
    ++done;
    const StinespringData s = stinespring(inst.t, inst.phi);
    CHECK(s.defects.reconstruction <= 1e-8);
    CHECK(s.defects.coisometry <= 1e-8);
    CHECK(s.defects.v_gram <= 1e-8);
    CHECK(s.defects.rho_unital <= 1e-8);
    CHECK(s.defects.rho_mult <= 1e-8);
    CHECK(s.defects.rho_adjoint <= 1e-8);
    CHECK(s.defects.psi_inner <= 1e-8);
    const CyclicityReport c = cyclicity_check(s);
    CHECK(c.stinespring_cyclic);
    CHECK(c.nondegenerate);
    // Independent check of the coisometry: W W* on K2 from the concrete Wstar.
    const ComplexMatrix w = s.wstar.adjoint();
    CHECK(max_abs(w * s.wstar - ComplexMatrix::Identity(s.k2_dim(), s.k2_dim())) < 1e-8);
    CHECK(s.k2_dim() <= s.h2_dim);
  }
  CHECK(done == 12);
}

TEST_CASE("padded K2 is degenerate") {
  const PresentedModule e = random_module(AlgebraSpec({2}), 1, 3);
  const PhiMapInstance inst = random_operator_phi_map(e, 2, 1, 0, 3);
  StinespringData s = stinespring(inst.t, inst.phi);
  REQUIRE(cyclicity_check(s).nondegenerate);
  for (auto& p : s.psi) {
    ComplexMatrix padded = ComplexMatrix::Zero(p.rows() + 1, p.cols());
    padded.topRows(p.rows()) = p;
    p = padded;
  }
  ComplexMatrix w = ComplexMatrix::Zero(s.wstar.rows(), s.wstar.cols() + 1);
  w.leftCols(s.wstar.cols()) = s.wstar;
  s.wstar = w;
  const CyclicityReport c = cyclicity_check(s);
  CHECK(c.stinespring_cyclic);
  CHECK_FALSE(c.nondegenerate);
}

TEST_CASE("wrong shapes are rejected") {
  const PresentedModule e = random_module(AlgebraSpec({2}), 1, 1);
  const PhiMapInstance direct_sum = random_phi_map(e, AlgebraSpec({1, 1}), 1, 0, 1);
  CHECK_THROWS_AS(stinespring(direct_sum.t, direct_sum.phi), Error);
  const PhiMapInstance free_target = random_phi_map(e, AlgebraSpec({2}), 1, 0, 1);
  try {
    stinespring(free_target.t, free_target.phi);
    FAIL("expected WrongShape");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::WrongShape);
  }
}

}  // TEST_SUITE
