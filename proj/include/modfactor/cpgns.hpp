#pragma once

#include <vector>

#include "modfactor/hilbmod.hpp"

namespace modfactor {

/// Linear map B -> C given by its values on the canonical basis of B.
class LinearMap {
 public:
  LinearMap() = default;
  LinearMap(AlgebraSpec domain, AlgebraSpec codomain, std::vector<AlgebraElement> values);

  const AlgebraSpec& domain() const { return domain_; }
  const AlgebraSpec& codomain() const { return codomain_; }
  const std::vector<AlgebraElement>& values() const { return values_; }

  /// dim(C) x dim(B) matrix in canonical coordinates.
  ComplexMatrix coordinate_matrix() const;

 private:
  AlgebraSpec domain_;
  AlgebraSpec codomain_;
  std::vector<AlgebraElement> values_;
};

AlgebraElement apply(const LinearMap& phi, const AlgebraElement& b);

LinearMap identity_map(const AlgebraSpec& spec);
/// b -> (sum of block traces of b) * 1_C.
LinearMap trace_map(const AlgebraSpec& domain, const AlgebraSpec& codomain);
/// Blockwise transpose on B.
LinearMap transpose_map(const AlgebraSpec& spec);
LinearMap operator*(Complex scale, const LinearMap& phi);
LinearMap operator+(const LinearMap& a, const LinearMap& b);
/// max over basis elements of |phi(b) - psi(b)|_max.
double max_difference(const LinearMap& a, const LinearMap& b);

/// Choi blocks C_i = sum_{jk} E_jk (x) rep(phi(iota_i(E_jk))), one per
/// domain block, each of size n_i * rep_dim(C).
std::vector<ComplexMatrix> choi(const LinearMap& phi);

struct ChoiSpectrum {
  double lambda_min = 0.0;  // over all blocks
  double lambda_max = 0.0;
  bool cp = false;
};

ChoiSpectrum choi_spectrum(const LinearMap& phi, const NumericConfig& cfg = {});

bool is_cp(const LinearMap& phi, const NumericConfig& cfg = {});

/// phi(iota_i(b)) = sum_r A_r b A_r^* with A_r : C^{n_i} -> C^{rep_dim(C)}.
struct KrausDecomposition {
  std::vector<std::vector<ComplexMatrix>> operators;  // per domain block
  double reconstruction_defect = 0.0;
  /// Largest off-block-diagonal entry of a reconstructed value.
  double subalgebra_defect = 0.0;
};

/// Builds Kraus operators from the positive part of each Choi spectrum and
/// measures how well they reconstruct phi. Throws NotCP when the
/// reconstruction defect exceeds verify_tol.
KrausDecomposition kraus_oracle(const LinearMap& phi, const NumericConfig& cfg = {});

/// Same construction without the NotCP guard.
KrausDecomposition kraus_reconstruction(const LinearMap& phi, const NumericConfig& cfg = {});

/// Correspondence generated by b_alpha * zeta together with the cyclic
/// vector zeta.
struct GnsData {
  Correspondence corr;
  ModuleElement zeta;
};

/// Paschke's construction: Gram phi(b_alpha^* b_beta), left action by
/// structure constants, zeta = coordinates of 1_B. Throws NotCP when the
/// Gram is not positive.
GnsData gns(const LinearMap& phi, const NumericConfig& cfg = {});

/// The Gram of gns() without the positivity guard; its positivity in
/// M_N(C) is an independent CP criterion.
ElementMatrix gns_gram(const LinearMap& phi);
bool gns_gram_is_positive(const LinearMap& phi, const NumericConfig& cfg = {});

/// max over basis b of |<zeta, b zeta> - phi(b)|_max.
double gns_defect(const GnsData& g, const LinearMap& phi);

struct MinimalityReport {
  int span_rank = 0;    // rank of span{b zeta c}
  int module_rank = 0;  // module_dim of the correspondence
  bool pass = false;
};

MinimalityReport gns_minimality(const GnsData& g, const NumericConfig& cfg = {});

/// phi(b) = <zeta, b zeta> for an arbitrary vector of a correspondence.
LinearMap induced_map(const Correspondence& corr, const ModuleElement& zeta);

}  // namespace modfactor
