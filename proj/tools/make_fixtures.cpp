// Regenerates the CLI fixture corpus and its manifest.
//
//   make_fixtures <output-dir>
//
// Every entry of manifest.json names a fixture, the subcommand to run on it
// and the exit code that subcommand must return.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <string>

#include "modfactor/random.hpp"
#include "modfactor/serialize.hpp"

using namespace modfactor;

namespace {

struct Writer {
  std::filesystem::path dir;
  Json manifest = Json::array();

  void file(const std::string& name, const InstanceFile& f) {
    write_text_file((dir / name).string(), serialize(f));
  }
  void raw(const std::string& name, const std::string& text) {
    write_text_file((dir / name).string(), text);
  }
  void expect(const std::string& name, const std::string& command, int exit_code,
              const std::string& note) {
    manifest.push_back({{"file", name}, {"command", command}, {"exit", exit_code}, {"note", note}});
  }
};

ModuleMap with_matrix(const ModuleMap& t, ComplexMatrix m) {
  return {t.domain(), t.codomain(), std::move(m)};
}

ComplexMatrix noise(const ComplexMatrix& like, double scale, std::uint64_t seed) {
  Rng rng(seed);
  return rng.gaussian(static_cast<int>(like.rows()), static_cast<int>(like.cols()), scale);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_fixtures <output-dir>\n";
    return 2;
  }
  Writer w{argv[1]};
  std::filesystem::create_directories(w.dir);

  const AlgebraSpec c1({1});
  const AlgebraSpec m2({2});

  // Scalar example: B = C = E = F = C, phi(b) = 2b, T(x) = sqrt(2) x.
  {
    const LinearMap phi(c1, c1, {Complex(2.0) * AlgebraElement::unit(c1)});
    ComplexMatrix m(1, 1);
    m(0, 0) = std::sqrt(2.0);
    const ModuleMap t(free_module(c1, 1), matrix_module(1, 1), m);
    w.file("scalar_example.json", {.payload = PhiMapProblem{t, phi}});
    w.expect("scalar_example.json", "factorize", 0, "scalar factorization");
    w.expect("scalar_example.json", "check-phimap", 0, "scalar phi-map");
    w.expect("scalar_example.json", "stinespring", 0, "scalar dilation");
    w.expect("scalar_example.json", "infer-phi", 0, "recovers phi = 2");
  }

  // Identity on M_2 as a map of B(C^2, C^2).
  {
    const PresentedModule e = matrix_module(2, 2);
    const ModuleMap t(e, e, ComplexMatrix::Identity(e.free_dim(), e.free_dim()));
    w.file("identity_m2.json", {.payload = PhiMapProblem{t, identity_map(m2)}});
    w.expect("identity_m2.json", "factorize", 0, "identity factorization");
    w.expect("identity_m2.json", "stinespring", 0, "K1 = C^2, V unitary");
    w.expect("identity_m2.json", "infer-phi", 0, "recovers the identity");

    w.file("identity_m2_wrong_phi.json", {.payload = PhiMapProblem{t, Complex(2.0) * identity_map(m2)}});
    w.expect("identity_m2_wrong_phi.json", "check-phimap", 1, "phi = 2 id does not match T = id");
    w.expect("identity_m2_wrong_phi.json", "factorize", 1, "NotPhiMap");
  }

  // CP maps.
  {
    w.file("trace_m2.json", {.payload = CpMapProblem{trace_map(m2, c1)}});
    w.expect("trace_m2.json", "check-cp", 0, "trace is CP");
    w.expect("trace_m2.json", "gns", 0, "GNS of the trace");

    const LinearMap cp = random_cp(AlgebraSpec({1, 2}), AlgebraSpec({2}), 2, 7);
    w.file("random_cp.json", {.payload = CpMapProblem{cp}});
    w.expect("random_cp.json", "check-cp", 0, "generated CP map");
    w.expect("random_cp.json", "gns", 0, "generated CP map");

    w.file("transpose_m2.json", {.payload = CpMapProblem{transpose_map(m2)}});
    w.expect("transpose_m2.json", "check-cp", 1, "Choi lambda_min = -1");
    w.expect("transpose_m2.json", "gns", 1, "NotCP");

    const LinearMap perturbed = perturb_to_non_cp(cp, 0.05, 8);
    w.file("perturbed_cp.json", {.payload = CpMapProblem{perturbed}});
    w.expect("perturbed_cp.json", "check-cp", 1, "planted negative Choi eigenvalue");
    w.expect("perturbed_cp.json", "gns", 1, "NotCP");
  }

  // Random phi-map into a padded free module.
  {
    const PresentedModule e = random_module(AlgebraSpec({1, 2}), 2, derive_seed(7, 10));
    const PhiMapInstance inst = random_phi_map(e, AlgebraSpec({2}), 2, 1, derive_seed(7, 11));
    w.file("phimap_random.json", {.payload = PhiMapProblem{inst.t, inst.phi}});
    w.expect("phimap_random.json", "check-phimap", 0, "generated phi-map");
    w.expect("phimap_random.json", "factorize", 0, "generated phi-map");
    w.expect("phimap_random.json", "infer-phi", 0, "full module");
    w.expect("phimap_random.json", "stinespring", 2, "codomain is not a matrix module");

    const ModuleMap doubled = Complex(2.0) * inst.t;
    w.file("phimap_doubled.json", {.payload = PhiMapProblem{doubled, inst.phi}});
    w.expect("phimap_doubled.json", "check-phimap", 1, "2T against phi");
    w.expect("phimap_doubled.json", "factorize", 1, "NotPhiMap");

    const ModuleMap noisy = with_matrix(inst.t, inst.t.matrix() + noise(inst.t.matrix(), 1e-3, 12));
    w.file("phimap_noisy.json", {.payload = PhiMapProblem{noisy, std::nullopt}});
    w.expect("phimap_noisy.json", "infer-phi", 1, "Inconsistent");
    w.expect("phimap_noisy.json", "factorize", 1, "Inconsistent");

    w.file("phimap_non_cp_phi.json",
           {.payload = PhiMapProblem{inst.t, perturb_to_non_cp(inst.phi, 0.05, 13)}});
    w.expect("phimap_non_cp_phi.json", "factorize", 1, "NotCP");
    w.expect("phimap_non_cp_phi.json", "check-phimap", 1, "phi differs from the planted one");
  }

  // Module over C + C whose inner products miss the second summand.
  {
    const AlgebraSpec cc({1, 1});
    ElementMatrix g(1, 1, cc);
    g(0, 0) = AlgebraElement::basis(cc, 0);
    const PhiMapInstance inst = random_phi_map(PresentedModule(cc, g), c1, 1, 0, 14);
    w.file("phimap_not_full.json", {.payload = PhiMapProblem{inst.t, std::nullopt}});
    w.expect("phimap_not_full.json", "infer-phi", 1, "NotFull");
  }

  // Operator-valued phi-map into B(C^2, C^d2).
  {
    const PresentedModule e = random_module(m2, 1, derive_seed(3, 10));
    const PhiMapInstance inst = random_operator_phi_map(e, 2, 1, 1, derive_seed(3, 11));
    w.file("phimap_operator.json", {.payload = PhiMapProblem{inst.t, inst.phi}});
    w.expect("phimap_operator.json", "stinespring", 0, "dilation identities");
    w.expect("phimap_operator.json", "factorize", 0, "operator phi-map");

    w.file("phimap_operator_doubled.json", {.payload = PhiMapProblem{Complex(2.0) * inst.t, inst.phi}});
    w.expect("phimap_operator_doubled.json", "stinespring", 1, "NotPhiMap");
  }

  // Factorization bundles.
  {
    const FactorizationTriple t = random_factorization_triple(AlgebraSpec({1, 2}), AlgebraSpec({2}), 2, 2, 1, 5);
    w.file("bundle_random.json", {.payload = FactorizationBundle{t.e, t.corr, t.zeta, t.v}});
    w.expect("bundle_random.json", "verify", 0, "isometric bundle");

    w.file("bundle_scaled.json", {.payload = FactorizationBundle{t.e, t.corr, t.zeta, Complex(1.5) * t.v}});
    w.expect("bundle_scaled.json", "verify", 1, "NotIsometry");

    const ModuleMap noisy = with_matrix(t.v, t.v.matrix() + noise(t.v.matrix(), 1e-3, 15));
    w.file("bundle_noisy.json", {.payload = FactorizationBundle{t.e, t.corr, t.zeta, noisy}});
    w.expect("bundle_noisy.json", "verify", 1, "NotIsometry");
  }

  // Malformed input.
  {
    const std::string full = serialize({.payload = CpMapProblem{trace_map(m2, c1)}});
    w.raw("truncated.json", full.substr(0, full.size() / 2));
    w.expect("truncated.json", "check-cp", 2, "ParseError");
    w.expect("trace_m2.json", "factorize", 2, "wrong payload kind");
  }

  write_text_file((w.dir / "manifest.json").string(), w.manifest.dump(1) + "\n");
  std::cout << "wrote " << w.manifest.size() << " manifest entries to " << w.dir << "\n";
  return 0;
}
