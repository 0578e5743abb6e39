#pragma once

#include <vector>

#include "modfactor/factor.hpp"

namespace modfactor {

struct StinespringDefects {
  double reconstruction = 0.0;  // |rep(T x) - W* Psi(x) V|
  double coisometry = 0.0;      // |W W* - I| on K2
  double v_gram = 0.0;          // |V* V - phi(1)|
  double rho_unital = 0.0;
  double rho_mult = 0.0;
  double rho_adjoint = 0.0;
  double psi_inner = 0.0;       // |Psi(x)* Psi(x') - rho(<x, x'>)|
  double max() const;
};

/// Concrete dilation data for a phi-map into B(H1, H2). Operators act on
/// orthonormal bases of the quotient spaces K1 = F (.) H1 and
/// K2 = E (.) K1. `wstar` is v (.) id : K2 -> H2 and W is its adjoint.
struct StinespringData {
  int h1_dim = 0;
  int h2_dim = 0;
  Correspondence k1;       // F (.) H1 with the left action of B
  PresentedModule k2;      // E (.) K1
  std::vector<ComplexMatrix> rho;  // per basis element of B, on K1
  std::vector<ComplexMatrix> psi;  // per free basis element of E, K1 -> K2
  ComplexMatrix v;                 // H1 -> K1
  ComplexMatrix wstar;             // K2 -> H2
  StinespringDefects defects;
  bool pass = false;

  int k1_dim() const { return static_cast<int>(v.rows()); }
  int k2_dim() const { return static_cast<int>(wstar.cols()); }
};

/// C^d as a correspondence from M_d to the complex numbers; generators are
/// the standard basis columns.
Correspondence column_space(int d);

/// Requires phi to land in a single block M_{d1} and T to map into
/// matrix_module(d2, d1); otherwise WrongShape.
StinespringData stinespring(const ModuleMap& t, const LinearMap& phi, const NumericConfig& cfg = {});

struct CyclicityReport {
  int rho_v_span = 0;
  int psi_span = 0;
  bool stinespring_cyclic = false;
  bool nondegenerate = false;
};

CyclicityReport cyclicity_check(const StinespringData& s, const NumericConfig& cfg = {});

}  // namespace modfactor
