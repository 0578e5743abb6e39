#pragma once

#include <vector>

#include "modfactor/numerics.hpp"

namespace modfactor {

/// A finite-dimensional C*-algebra M_{n_1} + ... + M_{n_s}, always unital.
class AlgebraSpec {
 public:
  AlgebraSpec() : AlgebraSpec(std::vector<int>{1}) {}
  explicit AlgebraSpec(std::vector<int> block_dims);

  const std::vector<int>& block_dims() const { return blocks_; }
  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  int block_dim(int s) const { return blocks_[s]; }

  /// Vector-space dimension, sum of n_i^2.
  int dim() const { return dim_; }
  /// Size of the block-diagonal representation, sum of n_i.
  int rep_dim() const { return rep_dim_; }

  /// Offset of block s in canonical coordinates / in the representation.
  int coord_offset(int s) const { return coord_offsets_[s]; }
  int rep_offset(int s) const { return rep_offsets_[s]; }

  bool operator==(const AlgebraSpec& other) const { return blocks_ == other.blocks_; }

 private:
  std::vector<int> blocks_;
  std::vector<int> coord_offsets_;
  std::vector<int> rep_offsets_;
  int dim_ = 0;
  int rep_dim_ = 0;
};

/// Position of a canonical basis element (matrix unit E_{row,col} in a block).
struct BasisIndex {
  int block;
  int row;
  int col;
};

class AlgebraElement {
 public:
  AlgebraElement() = default;
  /// Blocks must match the spec's shapes and be finite.
  AlgebraElement(AlgebraSpec spec, std::vector<ComplexMatrix> blocks);

  static AlgebraElement zero(const AlgebraSpec& spec);
  static AlgebraElement unit(const AlgebraSpec& spec);
  static AlgebraElement basis(const AlgebraSpec& spec, int index);
  static AlgebraElement from_coordinates(const AlgebraSpec& spec, const ComplexVector& coords);
  /// Block-diagonal part of a rep_dim x rep_dim matrix.
  static AlgebraElement from_rep(const AlgebraSpec& spec, const ComplexMatrix& m);

  const AlgebraSpec& spec() const { return spec_; }
  const std::vector<ComplexMatrix>& blocks() const { return blocks_; }
  const ComplexMatrix& block(int s) const { return blocks_[s]; }
  ComplexMatrix& block(int s) { return blocks_[s]; }

  ComplexVector coordinates() const;
  /// Block-diagonal matrix of size rep_dim.
  ComplexMatrix rep() const;
  AlgebraElement adjoint() const;
  double max_abs() const;

  AlgebraElement& operator+=(const AlgebraElement& other);
  AlgebraElement& operator-=(const AlgebraElement& other);
  AlgebraElement& operator*=(Complex scale);

 private:
  AlgebraSpec spec_;
  std::vector<ComplexMatrix> blocks_;
};

AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b);
AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b);
AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement operator*(Complex scale, AlgebraElement a);

/// Throws InvalidInput unless both specs agree.
void require_same_spec(const AlgebraSpec& a, const AlgebraSpec& b, const char* where);

BasisIndex basis_index(const AlgebraSpec& spec, int index);
int basis_position(const AlgebraSpec& spec, const BasisIndex& idx);

/// Matrix units, block-major then row-major within each block.
std::vector<AlgebraElement> canonical_basis(const AlgebraSpec& spec);

/// Hermitian within verify_tol and every block PSD.
bool is_positive(const AlgebraElement& a, const NumericConfig& cfg = {});

/// Unnormalized sum of block traces (faithful).
Complex trace(const AlgebraElement& a);

/// Matrix L(b) of left multiplication in canonical coordinates:
/// b * b_alpha = sum_m b_m L(b)[m, alpha].
ComplexMatrix structure_constants(const AlgebraElement& b);

/// Matrix of right multiplication: b_alpha * c = sum_m b_m R(c)[m, alpha].
ComplexMatrix right_structure_constants(const AlgebraElement& c);

/// Compression of a rep_dim x rep_dim matrix onto the block-diagonal subalgebra.
AlgebraElement conditional_expectation(const ComplexMatrix& m, const AlgebraSpec& spec);

}  // namespace modfactor
