#pragma once

#include <cstdint>
#include <random>

#include "modfactor/factor.hpp"

namespace modfactor {

/// Seedable generator with platform-independent output: std::mt19937_64
/// (fully specified by the standard) driving a hand-written Box-Muller
/// transform, so no implementation-defined distribution is involved.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double normal();
  Complex complex_normal();
  int uniform_int(int lo, int hi);  // inclusive

  ComplexMatrix gaussian(int rows, int cols, double scale = 1.0);
  AlgebraElement gaussian_element(const AlgebraSpec& spec, double scale = 1.0);
  /// rows x cols matrix with orthonormal columns (rows >= cols).
  ComplexMatrix isometry(int rows, int cols);

 private:
  std::mt19937_64 engine_;
};

/// Independent stream for (seed, tag) via splitmix64 mixing.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

/// phi(b) = E_C(V^* (rep(b) (x) I_rank) V) with a Gaussian
/// (rep_dim(B) * rank) x rep_dim(C) matrix V.
LinearMap random_cp(const AlgebraSpec& b, const AlgebraSpec& c, int rank, std::uint64_t seed);

/// k generators with Gram X^* X for a Gaussian k x k array X over B.
PresentedModule random_module(const AlgebraSpec& b, int k, std::uint64_t seed);

struct PhiMapInstance {
  ModuleMap t;
  LinearMap phi;
  ModuleMap v;  // the isometry E (.) F -> codomain used to build t
};

/// T = v(id (.) zeta) with v = G^{1/2} embedding of E (.) F into the free
/// module C^{k + pad}.
PhiMapInstance random_phi_map(const PresentedModule& e, const AlgebraSpec& c, int rank, int pad,
                              std::uint64_t seed);

/// Same construction into matrix_module(d2, d1) = B(C^d1, C^d2), with
/// d2 = (rank of E (.) F as a right M_d1 module) + pad.
PhiMapInstance random_operator_phi_map(const PresentedModule& e, int d1, int rank, int pad,
                                       std::uint64_t seed);

struct FactorizationTriple {
  PresentedModule e;
  Correspondence corr;
  ModuleElement zeta;
  ModuleMap v;
};

/// GNS correspondence of a random CP map, a random vector zeta and the
/// padded free embedding of E (.) F as v.
FactorizationTriple random_factorization_triple(const AlgebraSpec& b, const AlgebraSpec& c, int k,
                                                int rank, int pad, std::uint64_t seed);

/// Subtracts a rank-one Choi term so that one Choi block gets
/// lambda_min = -eps * max(1, lambda_max). The result stays C-valued.
LinearMap perturb_to_non_cp(const LinearMap& phi, double eps, std::uint64_t seed);

}  // namespace modfactor
