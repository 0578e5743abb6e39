#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "modfactor/error.hpp"
#include "modfactor/report.hpp"
#include "modfactor/serialize.hpp"
#include "test_support.hpp"

using namespace modfactor;

namespace {

std::string fixture(const std::string& name) { return std::string(MODFACTOR_FIXTURE_DIR) + "/" + name; }

ErrorKind parse_kind(const std::string& text) {
  try {
    deserialize(text);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InternalError;
}

std::string parse_message(const std::string& text) {
  try {
    deserialize(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("round trip of every payload kind is bit exact") {
  const LinearMap cp = random_cp(AlgebraSpec({1, 2}), AlgebraSpec({2, 1}), 2, 1);
  const PhiMapInstance pm = random_phi_map(random_module(AlgebraSpec({2}), 2, 2), AlgebraSpec({1, 1}), 2, 1, 3);
  const FactorizationTriple tr = random_factorization_triple(AlgebraSpec({1, 1}), AlgebraSpec({2}), 2, 1, 2, 4);

  const InstanceFile a{.payload = CpMapProblem{cp}};
  const InstanceFile b{.payload = PhiMapProblem{pm.t, pm.phi}};
  const InstanceFile b2{.payload = PhiMapProblem{pm.t, std::nullopt}};
  const InstanceFile c{.payload = FactorizationBundle{tr.e, tr.corr, tr.zeta, tr.v}};
  for (const InstanceFile* f : {&a, &b, &b2, &c}) {
    const std::string text = serialize(*f);
    const InstanceFile back = deserialize(text);
    CHECK(back.payload.index() == f->payload.index());
    CHECK(serialize(back) == text);
  }

  const InstanceFile a_back = deserialize(serialize(a));
  const InstanceFile b_back = deserialize(serialize(b));
  const InstanceFile c_back = deserialize(serialize(c));
  const auto& cp_back = std::get<CpMapProblem>(a_back.payload).map;
  CHECK(max_difference(cp_back, cp) == 0.0);
  const auto& pm_back = std::get<PhiMapProblem>(b_back.payload);
  CHECK(max_abs(pm_back.t.matrix() - pm.t.matrix()) == 0.0);
  CHECK((pm_back.t.domain().gram() - pm.t.domain().gram()).max_abs() == 0.0);
  REQUIRE(pm_back.phi.has_value());
  CHECK(max_difference(*pm_back.phi, pm.phi) == 0.0);
  CHECK_FALSE(std::get<PhiMapProblem>(deserialize(serialize(b2)).payload).phi.has_value());
  const auto& fb = std::get<FactorizationBundle>(c_back.payload);
  CHECK(max_abs(fb.zeta.coordinates() - tr.zeta.coordinates()) == 0.0);
  for (std::size_t n = 0; n < fb.corr.action().size(); ++n) {
    CHECK((fb.corr.action()[n] - tr.corr.action()[n]).max_abs() == 0.0);
  }
}

TEST_CASE("element JSON layout") {
  const AlgebraSpec spec({1, 2});
  AlgebraElement a = AlgebraElement::zero(spec);
  a.block(0)(0, 0) = Complex(1.5, -2.0);
  a.block(1)(0, 1) = Complex(0.0, 1.0);
  const Json j = to_json(a);
  CHECK(j.dump() == "[[[[1.5,-2.0]]],[[[0.0,0.0],[0.0,1.0]],[[0.0,0.0],[0.0,0.0]]]]");
  CHECK((element_from_json(j, spec) - a).max_abs() == 0.0);
  CHECK(to_json(spec).dump() == R"({"blocks":[1,2]})");
}

TEST_CASE("malformed input is a ParseError") {
  const std::string text = serialize({.payload = CpMapProblem{trace_map(AlgebraSpec({2}), AlgebraSpec({1}))}});
  CHECK(parse_kind(text.substr(0, text.size() / 2)) == ErrorKind::ParseError);
  CHECK(parse_message(text.substr(0, text.size() / 2)).find("line") != std::string::npos);
  CHECK(parse_kind("") == ErrorKind::ParseError);
  CHECK(parse_kind("[]") == ErrorKind::ParseError);
  CHECK(parse_kind(R"({"version":"1","kind":"nope"})") == ErrorKind::ParseError);
  CHECK(parse_kind(R"({"version":"9","kind":"cp_map_problem"})") == ErrorKind::ParseError);

  Json j = Json::parse(text);
  j["map"]["values"][0] = "x";
  CHECK(parse_kind(j.dump()) == ErrorKind::ParseError);
  CHECK(parse_message(j.dump()).find("/map/values/0") != std::string::npos);

  j = Json::parse(text);
  j["map"]["values"].erase(j["map"]["values"].begin());
  CHECK(parse_kind(j.dump()) == ErrorKind::ParseError);

  j = Json::parse(text);
  j["map"]["domain"]["blocks"] = Json::array({0});
  CHECK(parse_kind(j.dump()) == ErrorKind::ParseError);

  // A Gram that is not positive is rejected at load time.
  const PresentedModule m = free_module(AlgebraSpec({1}), 1);
  Json mj = to_json(m);
  mj["gram"][0][0][0][0][0] = Json::array({-1.0, 0.0});
  try {
    module_from_json(mj, "/E");
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ParseError);
    CHECK(std::string(e.what()).find("/E") != std::string::npos);
  }
}

TEST_CASE("reading files") {
  CHECK_NOTHROW(read_instance_file(fixture("scalar_example.json")));
  try {
    read_instance_file(fixture("does_not_exist.json"));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK((e.kind() == ErrorKind::ParseError || e.kind() == ErrorKind::InvalidInput));
  }
  try {
    read_instance_file(fixture("truncated.json"));
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ParseError);
  }
}

TEST_CASE("golden scalar fixture parses and verifies") {
  const InstanceFile f = read_instance_file(fixture("scalar_example.json"));
  const auto& pm = std::get<PhiMapProblem>(f.payload);
  REQUIRE(pm.phi.has_value());
  CHECK(is_phi_map(pm.t, *pm.phi).max_defect <= 1e-12);
  const Factorization fac = factorize(pm.t, *pm.phi);
  CHECK(fac.pass);
  CHECK(fac.defects.isometry <= 1e-12);
}

TEST_CASE("generator outputs verify") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const AlgebraSpec& b = test::small_specs()[seed % 6];
    const AlgebraSpec& c = test::small_specs()[(seed / 6) % 6];
    CHECK(is_cp(random_cp(b, c, 1 + static_cast<int>(seed % 3), seed)));
    const PresentedModule e = random_module(b, 2, seed);
    CHECK(e.gram_is_positive());
    const PhiMapInstance inst = random_phi_map(e, c, 2, static_cast<int>(seed % 3), seed);
    CHECK(is_phi_map(inst.t, inst.phi).max_defect <= 1e-8);
    CHECK(isometry_defect(inst.v).max() <= 1e-10);
    CHECK(inst.t.codomain().generators() == interior_tensor(e, gns(inst.phi).corr).generators() + static_cast<int>(seed % 3));
  }
}

TEST_CASE("generator determinism and seed sensitivity") {
  const InstanceFile a{.payload = CpMapProblem{random_cp(AlgebraSpec({2}), AlgebraSpec({1, 2}), 2, 77)}};
  const InstanceFile b{.payload = CpMapProblem{random_cp(AlgebraSpec({2}), AlgebraSpec({1, 2}), 2, 77)}};
  const InstanceFile c{.payload = CpMapProblem{random_cp(AlgebraSpec({2}), AlgebraSpec({1, 2}), 2, 78)}};
  CHECK(serialize(a) == serialize(b));
  CHECK(serialize(a) != serialize(c));
  CHECK(derive_seed(1, 2) == derive_seed(1, 2));
  CHECK(derive_seed(1, 2) != derive_seed(2, 1));
  Rng r1(5), r2(5);
  for (int n = 0; n < 100; ++n) CHECK(r1.uniform() == r2.uniform());
}

TEST_CASE("rng basics") {
  Rng rng(9);
  double sum = 0.0, sq = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sq += x * x;
  }
  CHECK(std::abs(sum / n) < 0.05);
  CHECK(std::abs(sq / n - 1.0) < 0.05);
  for (int i = 0; i < 1000; ++i) {
    const int k = rng.uniform_int(2, 5);
    CHECK(k >= 2);
    CHECK(k <= 5);
  }
  const ComplexMatrix q = rng.isometry(5, 3);
  CHECK(max_abs(q.adjoint() * q - ComplexMatrix::Identity(3, 3)) < 1e-13);
}

TEST_CASE("perturbation breaks complete positivity") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const AlgebraSpec& b = test::small_specs()[seed % 6];
    const AlgebraSpec& c = test::small_specs()[(seed + 2) % 6];
    const LinearMap phi = random_cp(b, c, 1 + static_cast<int>(seed % 3), seed);
    const LinearMap bad = perturb_to_non_cp(phi, 0.05, seed);
    CHECK_FALSE(is_cp(bad));
    CHECK(choi_spectrum(bad).lambda_min < -1e-3);
    // Still Hermitian-preserving.
    for (std::size_t a = 0; a < bad.values().size(); ++a) {
      const AlgebraElement basis = AlgebraElement::basis(b, static_cast<int>(a));
      CHECK((apply(bad, basis.adjoint()) - apply(bad, basis).adjoint()).max_abs() < 1e-12);
    }
  }
}

TEST_CASE("report verdicts") {
  Report r;
  r.command = "x";
  r.defects.emplace_back("a", 1e-12);
  CHECK(r.pass());
  r.defects.emplace_back("b", 1e-3);
  CHECK_FALSE(r.pass());
  r.defects.pop_back();
  r.checks.emplace_back("c", false);
  CHECK_FALSE(r.pass());
  r.checks.back().second = true;
  r.error = "boom";
  CHECK_FALSE(r.pass());
  r.error.reset();
  r.defects.emplace_back("nan", std::nan(""));
  CHECK_FALSE(r.pass());
  r.defects.pop_back();
  const Json j = r.to_json();
  CHECK(j["pass"] == true);
  CHECK(j["defects"]["a"] == 1e-12);
  CHECK(r.to_text().find("pass: true") != std::string::npos);
}

}  // TEST_SUITE
