#include "modfactor/algebra.hpp"

#include <string>

#include "modfactor/error.hpp"

namespace modfactor {

AlgebraSpec::AlgebraSpec(std::vector<int> block_dims) : blocks_(std::move(block_dims)) {
  if (blocks_.empty()) fail(ErrorKind::InvalidInput, "algebra needs at least one block");
  for (int n : blocks_) {
    if (n < 1) fail(ErrorKind::InvalidInput, "block dimensions must be >= 1");
    coord_offsets_.push_back(dim_);
    rep_offsets_.push_back(rep_dim_);
    dim_ += n * n;
    rep_dim_ += n;
  }
}

void require_same_spec(const AlgebraSpec& a, const AlgebraSpec& b, const char* where) {
  if (!(a == b)) fail(ErrorKind::InvalidInput, std::string(where) + ": algebra mismatch");
}

AlgebraElement::AlgebraElement(AlgebraSpec spec, std::vector<ComplexMatrix> blocks)
    : spec_(std::move(spec)), blocks_(std::move(blocks)) {
  if (static_cast<int>(blocks_.size()) != spec_.num_blocks()) {
    fail(ErrorKind::InvalidInput, "element has " + std::to_string(blocks_.size()) +
                                      " blocks, algebra has " +
                                      std::to_string(spec_.num_blocks()));
  }
  for (int s = 0; s < spec_.num_blocks(); ++s) {
    const int n = spec_.block_dim(s);
    if (blocks_[s].rows() != n || blocks_[s].cols() != n) {
      fail(ErrorKind::InvalidInput, "block " + std::to_string(s) + " must be " +
                                        std::to_string(n) + "x" + std::to_string(n));
    }
    if (!is_finite(blocks_[s])) fail(ErrorKind::InvalidInput, "element has non-finite entries");
  }
}

AlgebraElement AlgebraElement::zero(const AlgebraSpec& spec) {
  std::vector<ComplexMatrix> blocks;
  for (int n : spec.block_dims()) blocks.push_back(ComplexMatrix::Zero(n, n));
  return {spec, std::move(blocks)};
}

AlgebraElement AlgebraElement::unit(const AlgebraSpec& spec) {
  std::vector<ComplexMatrix> blocks;
  for (int n : spec.block_dims()) blocks.push_back(ComplexMatrix::Identity(n, n));
  return {spec, std::move(blocks)};
}

BasisIndex basis_index(const AlgebraSpec& spec, int index) {
  if (index < 0 || index >= spec.dim()) {
    fail(ErrorKind::InvalidInput, "basis index " + std::to_string(index) + " out of range");
  }
  int s = spec.num_blocks() - 1;
  while (spec.coord_offset(s) > index) --s;
  const int local = index - spec.coord_offset(s);
  const int n = spec.block_dim(s);
  return {s, local / n, local % n};
}

int basis_position(const AlgebraSpec& spec, const BasisIndex& idx) {
  return spec.coord_offset(idx.block) + idx.row * spec.block_dim(idx.block) + idx.col;
}

AlgebraElement AlgebraElement::basis(const AlgebraSpec& spec, int index) {
  const BasisIndex idx = basis_index(spec, index);
  AlgebraElement e = zero(spec);
  e.blocks_[idx.block](idx.row, idx.col) = 1.0;
  return e;
}

AlgebraElement AlgebraElement::from_coordinates(const AlgebraSpec& spec,
                                                const ComplexVector& coords) {
  if (coords.size() != spec.dim()) {
    fail(ErrorKind::InvalidInput, "coordinate vector has wrong length");
  }
  std::vector<ComplexMatrix> blocks;
  for (int s = 0; s < spec.num_blocks(); ++s) {
    const int n = spec.block_dim(s);
    ComplexMatrix b(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) b(r, c) = coords(spec.coord_offset(s) + r * n + c);
    blocks.push_back(std::move(b));
  }
  return {spec, std::move(blocks)};
}

AlgebraElement AlgebraElement::from_rep(const AlgebraSpec& spec, const ComplexMatrix& m) {
  return conditional_expectation(m, spec);
}

ComplexVector AlgebraElement::coordinates() const {
  ComplexVector out(spec_.dim());
  for (int s = 0; s < spec_.num_blocks(); ++s) {
    const int n = spec_.block_dim(s);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) out(spec_.coord_offset(s) + r * n + c) = blocks_[s](r, c);
  }
  return out;
}

ComplexMatrix AlgebraElement::rep() const {
  ComplexMatrix out = ComplexMatrix::Zero(spec_.rep_dim(), spec_.rep_dim());
  for (int s = 0; s < spec_.num_blocks(); ++s) {
    const int n = spec_.block_dim(s);
    out.block(spec_.rep_offset(s), spec_.rep_offset(s), n, n) = blocks_[s];
  }
  return out;
}

AlgebraElement AlgebraElement::adjoint() const {
  AlgebraElement out = *this;
  for (auto& b : out.blocks_) b.adjointInPlace();
  return out;
}

double AlgebraElement::max_abs() const {
  double m = 0.0;
  for (const auto& b : blocks_) m = std::max(m, modfactor::max_abs(b));
  return m;
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& other) {
  require_same_spec(spec_, other.spec_, "add");
  for (std::size_t s = 0; s < blocks_.size(); ++s) blocks_[s] += other.blocks_[s];
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& other) {
  require_same_spec(spec_, other.spec_, "subtract");
  for (std::size_t s = 0; s < blocks_.size(); ++s) blocks_[s] -= other.blocks_[s];
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(Complex scale) {
  for (auto& b : blocks_) b *= scale;
  return *this;
}

AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
AlgebraElement operator*(Complex scale, AlgebraElement a) { return a *= scale; }

AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
  require_same_spec(a.spec(), b.spec(), "multiply");
  AlgebraElement out = a;
  for (int s = 0; s < a.spec().num_blocks(); ++s) out.block(s) = a.block(s) * b.block(s);
  return out;
}

std::vector<AlgebraElement> canonical_basis(const AlgebraSpec& spec) {
  std::vector<AlgebraElement> out;
  out.reserve(spec.dim());
  for (int i = 0; i < spec.dim(); ++i) out.push_back(AlgebraElement::basis(spec, i));
  return out;
}

bool is_positive(const AlgebraElement& a, const NumericConfig& cfg) {
  for (const auto& b : a.blocks()) {
    if (max_abs(b - b.adjoint()) > cfg.verify_tol) return false;
    if (!psd_check(b, cfg)) return false;
  }
  return true;
}

Complex trace(const AlgebraElement& a) {
  Complex t = 0.0;
  for (const auto& b : a.blocks()) t += b.trace();
  return t;
}

ComplexMatrix structure_constants(const AlgebraElement& b) {
  // b * E_{pq} = sum_r b[r,p] E_{rq} within the same block.
  const AlgebraSpec& spec = b.spec();
  ComplexMatrix l = ComplexMatrix::Zero(spec.dim(), spec.dim());
  for (int s = 0; s < spec.num_blocks(); ++s) {
    const int n = spec.block_dim(s);
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        for (int r = 0; r < n; ++r)
          l(basis_position(spec, {s, r, q}), basis_position(spec, {s, p, q})) = b.block(s)(r, p);
  }
  return l;
}

ComplexMatrix right_structure_constants(const AlgebraElement& c) {
  // E_{pq} * c = sum_t c[q,t] E_{pt}.
  const AlgebraSpec& spec = c.spec();
  ComplexMatrix r = ComplexMatrix::Zero(spec.dim(), spec.dim());
  for (int s = 0; s < spec.num_blocks(); ++s) {
    const int n = spec.block_dim(s);
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        for (int t = 0; t < n; ++t)
          r(basis_position(spec, {s, p, t}), basis_position(spec, {s, p, q})) = c.block(s)(q, t);
  }
  return r;
}

AlgebraElement conditional_expectation(const ComplexMatrix& m, const AlgebraSpec& spec) {
  if (m.rows() != spec.rep_dim() || m.cols() != spec.rep_dim()) {
    fail(ErrorKind::InvalidInput, "conditional expectation expects a " +
                                      std::to_string(spec.rep_dim()) + "x" +
                                      std::to_string(spec.rep_dim()) + " matrix");
  }
  std::vector<ComplexMatrix> blocks;
  for (int s = 0; s < spec.num_blocks(); ++s) {
    const int n = spec.block_dim(s);
    blocks.push_back(m.block(spec.rep_offset(s), spec.rep_offset(s), n, n));
  }
  return {spec, std::move(blocks)};
}

}  // namespace modfactor
