// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failing criteria (capped at 1).

#include <array>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "modfactor/error.hpp"
#include "modfactor/serialize.hpp"
#include "modfactor/stinespring.hpp"
#include "unit/test_support.hpp"

using namespace modfactor;

namespace {

constexpr double kGnsTol = 1e-8;
constexpr double kFactorTol = 1e-8;
constexpr double kConverseTol = 1e-10;
constexpr double kKrausTol = 1e-8;
constexpr double kTransposeTol = 1e-10;
constexpr double kDilationTol = 1e-8;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

std::string fixture(const std::string& name) { return std::string(MODFACTOR_FIXTURE_DIR) + "/" + name; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Process {
  int code = -1;
  std::string out;
};

Process run_binary(const std::string& command, const std::string& file) {
  const std::string line = std::string("\"") + MODFACTOR_CLI_PATH + "\" " + command + " \"" + file + "\" 2>/dev/null";
  Process p;
  FILE* pipe = ::popen(line.c_str(), "r");
  if (!pipe) return p;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) p.out.append(buf.data(), n);
  const int status = ::pclose(pipe);
  p.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return p;
}

const std::vector<AlgebraSpec>& gns_specs() {
  static const std::vector<AlgebraSpec> s = {AlgebraSpec({1}), AlgebraSpec({2}), AlgebraSpec({3}),
                                             AlgebraSpec({1, 2}), AlgebraSpec({2, 2})};
  return s;
}

// All specs of dimension <= 9 used for the random instances.
const std::vector<AlgebraSpec>& instance_specs() {
  static const std::vector<AlgebraSpec> s = {AlgebraSpec({1}),    AlgebraSpec({2}),    AlgebraSpec({3}),
                                             AlgebraSpec({1, 2}), AlgebraSpec({2, 2}), AlgebraSpec({1, 1}),
                                             AlgebraSpec({1, 1, 1})};
  return s;
}

Outcome ac1_gns() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  int count = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng pick(derive_seed(seed, 100));
    const AlgebraSpec& b = gns_specs()[pick.uniform_int(0, 4)];
    const AlgebraSpec& c = gns_specs()[pick.uniform_int(0, 4)];
    const LinearMap phi = random_cp(b, c, pick.uniform_int(1, 3), seed);
    worst = std::max(worst, gns_defect(gns(phi), phi));
    ++count;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst <= kGnsTol && secs < 60.0,
          std::to_string(count) + " maps, max defect " + fmt(worst) + ", " + fmt(secs) + " s"};
}

Outcome ac2_round_trip() {
  double iso = 0.0, rec = 0.0;
  int failures = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng pick(derive_seed(seed, 200));
    const AlgebraSpec& b = instance_specs()[pick.uniform_int(0, 6)];
    const AlgebraSpec& c = instance_specs()[pick.uniform_int(0, 6)];
    const int gens = pick.uniform_int(1, 3);
    const int rank = pick.uniform_int(1, 3);
    const int pad = pick.uniform_int(0, 2);
    try {
      const PresentedModule e = random_module(b, gens, derive_seed(seed, 1));
      const PhiMapInstance inst = random_phi_map(e, c, rank, pad, derive_seed(seed, 2));
      const Factorization f = factorize(inst.t, inst.phi);
      iso = std::max(iso, f.defects.isometry);
      rec = std::max(rec, f.defects.reconstruction);
      if (!f.pass) ++failures;
    } catch (const Error& err) {
      ++failures;
    }
  }
  return {failures == 0 && iso <= kFactorTol && rec <= kFactorTol,
          "100 phi-maps, failures " + std::to_string(failures) + ", max isometry " + fmt(iso) +
              ", max reconstruction " + fmt(rec)};
}

Outcome ac3_converse() {
  double worst = 0.0;
  int not_cp = 0, errors = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng pick(derive_seed(seed, 300));
    const AlgebraSpec& b = instance_specs()[pick.uniform_int(0, 6)];
    const AlgebraSpec& c = instance_specs()[pick.uniform_int(0, 6)];
    try {
      const FactorizationTriple tr =
          random_factorization_triple(b, c, pick.uniform_int(1, 3), pick.uniform_int(1, 3), pick.uniform_int(0, 2), seed);
      const PhiMapPair pair = from_factorization(tr.corr, tr.zeta, tr.v, tr.e);
      worst = std::max(worst, is_phi_map(pair.t, pair.phi).max_defect);
      if (!is_cp(pair.phi)) ++not_cp;
    } catch (const Error&) {
      ++errors;
    }
  }
  return {errors == 0 && not_cp == 0 && worst <= kConverseTol,
          "100 triples, max phi-map defect " + fmt(worst) + ", not CP " + std::to_string(not_cp) +
              ", errors " + std::to_string(errors)};
}

Outcome ac4_cp_oracles() {
  int disagreements = 0, cp_seen = 0, non_cp_seen = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng pick(derive_seed(seed, 400));
    const AlgebraSpec& b = instance_specs()[pick.uniform_int(0, 6)];
    const AlgebraSpec& c = instance_specs()[pick.uniform_int(0, 6)];
    LinearMap phi = random_cp(b, c, pick.uniform_int(1, 3), seed);
    if (seed >= 100) phi = perturb_to_non_cp(phi, 0.05, derive_seed(seed, 401));
    const bool choi_cp = is_cp(phi);
    const bool kraus_cp = kraus_reconstruction(phi).reconstruction_defect <= kKrausTol;
    const bool gram_cp = gns_gram_is_positive(phi);
    (choi_cp ? cp_seen : non_cp_seen) += 1;
    if (choi_cp != kraus_cp || choi_cp != gram_cp) ++disagreements;
  }
  return {disagreements == 0 && cp_seen == 100 && non_cp_seen == 100,
          "200 maps (" + std::to_string(cp_seen) + " CP, " + std::to_string(non_cp_seen) +
              " not CP), disagreements " + std::to_string(disagreements)};
}

Outcome ac5_transpose() {
  const double lmin = choi_spectrum(transpose_map(AlgebraSpec({2}))).lambda_min;
  const Process p = run_binary("check-cp", fixture("transpose_m2.json"));
  return {std::abs(lmin + 1.0) <= kTransposeTol && p.code == 1,
          "lambda_min " + fmt(lmin) + ", check-cp exit " + std::to_string(p.code)};
}

Outcome ac6_stinespring() {
  int accepted = 0, skipped = 0, failures = 0;
  double worst_rec = 0.0, worst_co = 0.0, worst_v = 0.0;
  int max_d1 = 0, max_d2 = 0;
  for (std::uint64_t seed = 0; accepted < 50 && seed < 2000; ++seed) {
    Rng pick(derive_seed(seed, 600));
    const AlgebraSpec& b = instance_specs()[pick.uniform_int(0, 6)];
    const int d1 = pick.uniform_int(1, 4);
    const int gens = pick.uniform_int(1, 2);
    const int pad = pick.uniform_int(0, 1);
    const PresentedModule e = random_module(b, gens, derive_seed(seed, 1));
    const PhiMapInstance inst = random_operator_phi_map(e, d1, 1, pad, derive_seed(seed, 2));
    const int d2 = as_matrix_module(inst.t.codomain())->first;
    if (d2 > 4) {
      ++skipped;
      continue;
    }
    ++accepted;
    max_d1 = std::max(max_d1, d1);
    max_d2 = std::max(max_d2, d2);
    try {
      const StinespringData s = stinespring(inst.t, inst.phi);
      const CyclicityReport c = cyclicity_check(s);
      worst_rec = std::max(worst_rec, s.defects.reconstruction);
      worst_co = std::max(worst_co, s.defects.coisometry);
      worst_v = std::max(worst_v, s.defects.v_gram);
      if (!s.pass || !c.stinespring_cyclic || !c.nondegenerate) ++failures;
    } catch (const Error&) {
      ++failures;
    }
  }
  return {accepted == 50 && failures == 0 && worst_rec <= kDilationTol && worst_co <= kDilationTol &&
              worst_v <= kDilationTol,
          std::to_string(accepted) + " instances (d1 <= " + std::to_string(max_d1) + ", d2 <= " +
              std::to_string(max_d2) + ", " + std::to_string(skipped) + " seeds skipped for d2 > 4), failures " +
              std::to_string(failures) + ", max reconstruction " + fmt(worst_rec) + ", coisometry " +
              fmt(worst_co) + ", V*V " + fmt(worst_v)};
}

int brute_rank(const ComplexMatrix& m) {
  Eigen::FullPivLU<ComplexMatrix> lu(m);
  lu.setThreshold(1e-10);
  return static_cast<int>(lu.rank());
}

Outcome ac7_worked_example() {
  const AlgebraSpec m2({2});
  const GnsData f = gns(trace_map(m2, AlgebraSpec({1})));
  const PresentedModule e = matrix_module(1, 2);
  const PresentedModule t = interior_tensor(e, f.corr);

  // Brute force in the operator model: F is M_2 with <a, b> = tr(a* b), and
  // E (.) F is spanned by the row vectors r b_alpha with r = (1, 0).
  const auto basis = canonical_basis(m2);
  ComplexMatrix f_gram(4, 4);
  ComplexMatrix rows(4, 2);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) f_gram(a, b) = (basis[a].block(0).adjoint() * basis[b].block(0)).trace();
    rows.row(a) = basis[a].block(0).row(0);
  }
  const ComplexMatrix t_gram = rows.conjugate() * rows.transpose();
  const int f_dim = module_dim(f.corr.module());
  const int t_dim = module_dim(t);
  const bool grams_match = max_abs(scalar_gram(f.corr.module()) - f_gram) < 1e-14 && max_abs(scalar_gram(t) - t_gram) < 1e-14;
  return {f_dim == 4 && t_dim == 2 && brute_rank(f_gram) == 4 && brute_rank(t_gram) == 2 && grams_match,
          "module_dim(F) " + std::to_string(f_dim) + " (brute force " + std::to_string(brute_rank(f_gram)) +
              "), module_dim(E (.) F) " + std::to_string(t_dim) + " (brute force " +
              std::to_string(brute_rank(t_gram)) + ")"};
}

Outcome ac8_corpus() {
  const Json manifest = Json::parse(read_file(fixture("manifest.json")));
  int negatives = 0, negative_failures = 0, positives = 0, positive_failures = 0, other_failures = 0;
  for (const auto& entry : manifest) {
    const std::string file = fixture(entry["file"].get<std::string>());
    const std::string command = entry["command"];
    const int expected = entry["exit"];
    const Process first = run_binary(command, file);
    if (expected == 1) {
      ++negatives;
      if (first.code != 1) ++negative_failures;
    } else if (expected == 0) {
      ++positives;
      const Process second = run_binary(command, file);
      if (first.code != 0 || second.code != 0 || first.out != second.out) ++positive_failures;
    } else if (first.code != expected) {
      ++other_failures;
    }
  }

  // Planted defect outside the file corpus: K2 padded by one orthogonal dimension.
  const PresentedModule e = random_module(AlgebraSpec({2}), 1, 3);
  const PhiMapInstance inst = random_operator_phi_map(e, 2, 1, 0, 3);
  StinespringData s = stinespring(inst.t, inst.phi);
  for (auto& p : s.psi) {
    ComplexMatrix padded = ComplexMatrix::Zero(p.rows() + 1, p.cols());
    padded.topRows(p.rows()) = p;
    p = padded;
  }
  ++negatives;
  if (cyclicity_check(s).nondegenerate) ++negative_failures;

  return {negatives >= 10 && negative_failures == 0 && positive_failures == 0 && other_failures == 0,
          std::to_string(negatives) + " planted defects (" + std::to_string(negative_failures) + " missed), " +
              std::to_string(positives) + " golden runs (" + std::to_string(positive_failures) +
              " unstable or failing), usage-error mismatches " + std::to_string(other_failures)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"AC1 GNS correctness", ac1_gns},
      {"AC2 factorization round trip", ac2_round_trip},
      {"AC3 converse construction", ac3_converse},
      {"AC4 CP oracle agreement", ac4_cp_oracles},
      {"AC5 transpose rejection", ac5_transpose},
      {"AC6 dilation identities", ac6_stinespring},
      {"AC7 worked dimension example", ac7_worked_example},
      {"AC8 negative corpus and golden stability", ac8_corpus},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
