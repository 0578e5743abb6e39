#pragma once

#include "modfactor/cpgns.hpp"

namespace modfactor {

/// Complex-linear map between presented modules, given on the free basis
/// e_i * b_alpha of the domain. Stored as a matrix on canonical coordinates.
class ModuleMap {
 public:
  ModuleMap() = default;
  /// `values` has codomain.free_dim() rows and domain.free_dim() columns.
  ModuleMap(PresentedModule domain, PresentedModule codomain, ComplexMatrix values);
  ModuleMap(PresentedModule domain, PresentedModule codomain, const std::vector<ModuleElement>& values);

  const PresentedModule& domain() const { return domain_; }
  const PresentedModule& codomain() const { return codomain_; }
  const ComplexMatrix& matrix() const { return values_; }

  ModuleElement value(int free_index) const;
  ModuleElement operator()(const ModuleElement& x) const;

 private:
  PresentedModule domain_;
  PresentedModule codomain_;
  ComplexMatrix values_;
};

ModuleMap operator*(Complex scale, const ModuleMap& t);

/// Largest null_defect of T(kappa) over the kernel of the domain's scalar Gram.
double well_definedness_defect(const ModuleMap& t, const NumericConfig& cfg = {});

struct PhiMapReport {
  double max_defect = 0.0;
  bool pass = false;
};

/// max over free basis pairs of |<Tx, Tx'> - phi(<x, x'>)|_max.
PhiMapReport is_phi_map(const ModuleMap& t, const LinearMap& phi, const NumericConfig& cfg = {});

/// Recovers phi from phi(<x_p, x_q>) = <T x_p, T x_q> by least squares.
/// Throws NotFull if <E,E> does not span B and Inconsistent if the residual
/// exceeds verify_tol.
LinearMap infer_phi(const ModuleMap& t, const NumericConfig& cfg = {});

/// Isometry defects of a map v on the free basis. `scalar` compares the
/// trace forms v^* S_F v and S_E; `algebra` compares C-valued inner products
/// on generator pairs.
struct IsometryDefect {
  double scalar = 0.0;
  double algebra = 0.0;
  double max() const { return scalar > algebra ? scalar : algebra; }
};
IsometryDefect isometry_defect(const ModuleMap& v);

struct FactorizationDefects {
  double isometry = 0.0;
  double reconstruction = 0.0;
  double well_definedness = 0.0;
};

struct Factorization {
  GnsData gns;
  PresentedModule tensor;  // E (.) F
  ModuleMap v;             // E (.) F -> codomain of T
  FactorizationDefects defects;
  bool pass = false;
};

/// T = v (id_E (.) zeta) with (F, zeta) the GNS data of phi and
/// v((e_i (.) b_alpha zeta) c_beta) = T(e_i b_alpha) c_beta.
Factorization factorize(const ModuleMap& t, const LinearMap& phi, const NumericConfig& cfg = {});

struct PhiMapPair {
  ModuleMap t;
  LinearMap phi;
};

/// T(x) = v(x (.) zeta) and phi = <zeta, . zeta>. Throws NotIsometry if v
/// fails the isometry check on E (.) F.
PhiMapPair from_factorization(const Correspondence& corr, const ModuleElement& zeta,
                              const ModuleMap& v, const PresentedModule& e,
                              const NumericConfig& cfg = {});

}  // namespace modfactor
