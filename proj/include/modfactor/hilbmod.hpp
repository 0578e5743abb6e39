#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "modfactor/algebra.hpp"

namespace modfactor {

/// Dense rows x cols array of algebra elements (Gram matrices, left actions).
class ElementMatrix {
 public:
  ElementMatrix() = default;
  /// Zero matrix.
  ElementMatrix(int rows, int cols, const AlgebraSpec& spec);
  ElementMatrix(int rows, int cols, const AlgebraSpec& spec, std::vector<AlgebraElement> data);

  static ElementMatrix identity(int n, const AlgebraSpec& spec);

  const AlgebraSpec& spec() const { return spec_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const AlgebraElement& operator()(int i, int j) const { return data_[i * cols_ + j]; }
  AlgebraElement& operator()(int i, int j) { return data_[i * cols_ + j]; }
  const std::vector<AlgebraElement>& data() const { return data_; }

  /// Transpose with every entry replaced by its adjoint.
  ElementMatrix adjoint() const;
  double max_abs() const;

 private:
  AlgebraSpec spec_;
  int rows_ = 0;
  int cols_ = 0;
  std::vector<AlgebraElement> data_;
};

ElementMatrix operator*(const ElementMatrix& a, const ElementMatrix& b);
ElementMatrix operator-(const ElementMatrix& a, const ElementMatrix& b);
ElementMatrix operator+(const ElementMatrix& a, const ElementMatrix& b);
ElementMatrix operator*(Complex scale, const ElementMatrix& a);

/// Entry (i,j) of a k x k element matrix, rearranged into block s of
/// M_k(C): a (k n_s) x (k n_s) matrix with entry [(i,p),(j,q)] = G_ij[p,q].
ComplexMatrix rearranged_block(const ElementMatrix& m, int s);
/// Inverse of rearranged_block across all blocks.
ElementMatrix from_rearranged(const std::vector<ComplexMatrix>& blocks, int k,
                              const AlgebraSpec& spec);

/// Finitely generated Hilbert module over `algebra`: k generators e_i with
/// C-valued Gram G_ij = <e_i, e_j>. Elements sum_i e_i c_i are taken modulo
/// the null space of the Gram.
class PresentedModule {
 public:
  PresentedModule() = default;
  /// Validates shape, Hermitian symmetry (InvalidInput) and positivity in
  /// M_k(C) (NotPositive).
  PresentedModule(AlgebraSpec algebra, ElementMatrix gram, const NumericConfig& cfg = {});

  /// Skips the positivity check; used where the caller reports its own error.
  static PresentedModule unchecked(AlgebraSpec algebra, ElementMatrix gram);

  const AlgebraSpec& algebra() const { return algebra_; }
  int generators() const { return gram_.rows(); }
  const ElementMatrix& gram() const { return gram_; }
  const AlgebraElement& gram(int i, int j) const { return gram_(i, j); }
  /// Dimension of the coefficient space C^k over the complex numbers.
  int free_dim() const { return generators() * algebra_.dim(); }

  /// Smallest eigenvalue over the rearranged Gram blocks (relative check
  /// uses psd_tol).
  bool gram_is_positive(const NumericConfig& cfg = {}) const;

 private:
  AlgebraSpec algebra_;
  ElementMatrix gram_;
};

/// Coefficient tuple (c_1, ..., c_k) representing sum_i e_i c_i.
struct ModuleElement {
  std::vector<AlgebraElement> coeffs;

  static ModuleElement zero(const PresentedModule& m);
  static ModuleElement generator(const PresentedModule& m, int i);
  /// Free-basis vector e_i * c_beta for index i * dim(C) + beta.
  static ModuleElement free_basis(const PresentedModule& m, int index);
  static ModuleElement from_coordinates(const PresentedModule& m, const ComplexVector& coords);

  /// Canonical coordinates, generator-major.
  ComplexVector coordinates() const;
};

/// Throws InvalidInput if u does not have m's shape.
void require_element_of(const PresentedModule& m, const ModuleElement& u, const char* where);

ModuleElement operator+(const ModuleElement& u, const ModuleElement& v);
ModuleElement operator-(const ModuleElement& u, const ModuleElement& v);
ModuleElement operator*(Complex scale, const ModuleElement& u);

AlgebraElement inner_product(const PresentedModule& m, const ModuleElement& u,
                             const ModuleElement& v);

/// trace <u,u>, clamped at zero. Zero exactly on null vectors.
double null_defect(const PresentedModule& m, const ModuleElement& u);

/// Equal modulo the null space.
bool equivalent(const PresentedModule& m, const ModuleElement& u, const ModuleElement& v,
                const NumericConfig& cfg = {});

/// Scalar form trace(c_beta^* G_ij c_gamma) over the free basis {e_i c_beta}.
ComplexMatrix scalar_gram(const PresentedModule& m);

/// Complex dimension of the quotient by the null space.
int module_dim(const PresentedModule& m, const NumericConfig& cfg = {});

ModuleElement right_act(const PresentedModule& m, const ModuleElement& u, const AlgebraElement& c);

/// Left action of a second algebra on a presented module, stored on the
/// canonical basis of that algebra: b_alpha * e_j = sum_m e_m A(b_alpha)_mj.
class Correspondence {
 public:
  Correspondence() = default;
  Correspondence(PresentedModule module, AlgebraSpec left_algebra,
                 std::vector<ElementMatrix> action);

  const PresentedModule& module() const { return module_; }
  const AlgebraSpec& left_algebra() const { return left_; }
  const AlgebraSpec& right_algebra() const { return module_.algebra(); }
  const std::vector<ElementMatrix>& action() const { return action_; }
  int generators() const { return module_.generators(); }

  /// A(b), extended linearly from the basis.
  ElementMatrix action_matrix(const AlgebraElement& b) const;

 private:
  PresentedModule module_;
  AlgebraSpec left_;
  std::vector<ElementMatrix> action_;
};

ModuleElement left_act(const Correspondence& corr, const AlgebraElement& b, const ModuleElement& u);

/// Complex matrix of u -> b u on canonical coordinates.
ComplexMatrix left_action_coordinates(const Correspondence& corr, const AlgebraElement& b);

struct LeftActionReport {
  double unital_defect = 0.0;
  double mult_defect = 0.0;
  double adjoint_defect = 0.0;
  bool pass = false;
};

/// G A(1) = G, G A(ab) = G A(a) A(b), A(b*)^dagger G = G A(b).
LeftActionReport check_left_action(const Correspondence& corr, const NumericConfig& cfg = {});

/// E over B tensored with a B-C correspondence F. Generator (i, j) sits at
/// index i * k_F + j. Throws InternalError if the assembled Gram is not
/// positive (the correspondence was invalid).
PresentedModule interior_tensor(const PresentedModule& e, const Correspondence& f,
                                const NumericConfig& cfg = {});

/// Tensor of correspondences A->B and B->C, carrying the left A-action.
Correspondence interior_tensor(const Correspondence& e, const Correspondence& f,
                               const NumericConfig& cfg = {});

/// x (.) y as an element of interior_tensor(e, f).
ModuleElement tensor_element(const PresentedModule& e, const Correspondence& f,
                             const ModuleElement& x, const ModuleElement& y);

/// C^k with identity Gram.
PresentedModule free_module(const AlgebraSpec& algebra, int k);

/// B as a correspondence over itself (one generator, Gram 1, A(b) = [b]).
Correspondence identity_correspondence(const AlgebraSpec& algebra);

/// m x n complex matrices as a Hilbert module over M_n with <X,Y> = X^* Y.
/// Generator a is the matrix unit at (a, 0); its Gram is delta_ab E_00.
PresentedModule matrix_module(int m, int n);

/// Operator-model dictionary for matrix_module(m, n): sum_a e_a c_a maps to
/// the m x n matrix whose row a is row 0 of c_a.
ComplexMatrix to_operator(const PresentedModule& module, const ModuleElement& u);
ModuleElement from_operator(const PresentedModule& module, const ComplexMatrix& x);

/// (m, n) when `module` is matrix_module(m, n) up to verify_tol.
std::optional<std::pair<int, int>> as_matrix_module(const PresentedModule& module,
                                                    const NumericConfig& cfg = {});

/// Isometric embedding x -> G^{1/2} x of a presented module into C^k.
struct FreeEmbedding {
  PresentedModule target;
  ElementMatrix root;

  ModuleElement apply(const ModuleElement& u) const;
  /// The embedding as a complex matrix on canonical coordinates.
  ComplexMatrix coordinate_matrix() const;
};

FreeEmbedding embed_free(const PresentedModule& module, const NumericConfig& cfg = {});

}  // namespace modfactor
