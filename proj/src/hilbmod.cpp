#include "modfactor/hilbmod.hpp"

#include <algorithm>
#include <string>

#include "modfactor/error.hpp"

namespace modfactor {

// ---------------------------------------------------------------------------
// ElementMatrix

ElementMatrix::ElementMatrix(int rows, int cols, const AlgebraSpec& spec)
    : spec_(spec), rows_(rows), cols_(cols),
      data_(static_cast<std::size_t>(rows) * cols, AlgebraElement::zero(spec)) {}

ElementMatrix::ElementMatrix(int rows, int cols, const AlgebraSpec& spec,
                             std::vector<AlgebraElement> data)
    : spec_(spec), rows_(rows), cols_(cols), data_(std::move(data)) {
  if (rows < 0 || cols < 0 ||
      data_.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
    fail(ErrorKind::InvalidInput, "element matrix data does not match its shape");
  }
  for (const auto& e : data_) require_same_spec(e.spec(), spec_, "element matrix");
}

ElementMatrix ElementMatrix::identity(int n, const AlgebraSpec& spec) {
  ElementMatrix out(n, n, spec);
  for (int i = 0; i < n; ++i) out(i, i) = AlgebraElement::unit(spec);
  return out;
}

ElementMatrix ElementMatrix::adjoint() const {
  ElementMatrix out(cols_, rows_, spec_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j).adjoint();
  return out;
}

double ElementMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& e : data_) m = std::max(m, e.max_abs());
  return m;
}

ElementMatrix operator*(const ElementMatrix& a, const ElementMatrix& b) {
  require_same_spec(a.spec(), b.spec(), "element matrix product");
  if (a.cols() != b.rows()) fail(ErrorKind::InvalidInput, "element matrix shape mismatch");
  ElementMatrix out(a.rows(), b.cols(), a.spec());
  const int nb = a.spec().num_blocks();
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < b.cols(); ++j) {
      AlgebraElement& acc = out(i, j);
      for (int m = 0; m < a.cols(); ++m) {
        for (int s = 0; s < nb; ++s) acc.block(s).noalias() += a(i, m).block(s) * b(m, j).block(s);
      }
    }
  }
  return out;
}

ElementMatrix operator+(const ElementMatrix& a, const ElementMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    fail(ErrorKind::InvalidInput, "element matrix shape mismatch");
  }
  ElementMatrix out = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out(i, j) += b(i, j);
  return out;
}

ElementMatrix operator-(const ElementMatrix& a, const ElementMatrix& b) {
  return a + Complex(-1.0) * b;
}

ElementMatrix operator*(Complex scale, const ElementMatrix& a) {
  ElementMatrix out = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out(i, j) *= scale;
  return out;
}

ComplexMatrix rearranged_block(const ElementMatrix& m, int s) {
  const int n = m.spec().block_dim(s);
  ComplexMatrix out(m.rows() * n, m.cols() * n);
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out.block(i * n, j * n, n, n) = m(i, j).block(s);
  return out;
}

ElementMatrix from_rearranged(const std::vector<ComplexMatrix>& blocks, int k,
                              const AlgebraSpec& spec) {
  if (static_cast<int>(blocks.size()) != spec.num_blocks()) {
    fail(ErrorKind::InvalidInput, "rearranged blocks do not match algebra");
  }
  ElementMatrix out(k, k, spec);
  for (int s = 0; s < spec.num_blocks(); ++s) {
    const int n = spec.block_dim(s);
    if (blocks[s].rows() != k * n || blocks[s].cols() != k * n) {
      fail(ErrorKind::InvalidInput, "rearranged block has wrong size");
    }
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) out(i, j).block(s) = blocks[s].block(i * n, j * n, n, n);
  }
  return out;
}

// ---------------------------------------------------------------------------
// PresentedModule

PresentedModule PresentedModule::unchecked(AlgebraSpec algebra, ElementMatrix gram) {
  if (gram.rows() != gram.cols()) fail(ErrorKind::InvalidInput, "Gram matrix must be square");
  require_same_spec(gram.spec(), algebra, "module Gram");
  PresentedModule m;
  m.algebra_ = std::move(algebra);
  m.gram_ = std::move(gram);
  return m;
}

PresentedModule::PresentedModule(AlgebraSpec algebra, ElementMatrix gram,
                                 const NumericConfig& cfg) {
  *this = unchecked(std::move(algebra), std::move(gram));
  const double skew = (gram_ - gram_.adjoint()).max_abs();
  if (skew > cfg.verify_tol * (1.0 + gram_.max_abs())) {
    fail(ErrorKind::InvalidInput,
         "Gram matrix is not Hermitian (defect " + std::to_string(skew) + ")");
  }
  if (!gram_is_positive(cfg)) {
    fail(ErrorKind::NotPositive, "Gram matrix is not positive in M_k(C)");
  }
}

bool PresentedModule::gram_is_positive(const NumericConfig& cfg) const {
  for (int s = 0; s < algebra_.num_blocks(); ++s) {
    if (!psd_check(rearranged_block(gram_, s), cfg)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// ModuleElement

ModuleElement ModuleElement::zero(const PresentedModule& m) {
  return {std::vector<AlgebraElement>(m.generators(), AlgebraElement::zero(m.algebra()))};
}

ModuleElement ModuleElement::generator(const PresentedModule& m, int i) {
  if (i < 0 || i >= m.generators()) fail(ErrorKind::InvalidInput, "generator index out of range");
  ModuleElement u = zero(m);
  u.coeffs[i] = AlgebraElement::unit(m.algebra());
  return u;
}

ModuleElement ModuleElement::free_basis(const PresentedModule& m, int index) {
  if (index < 0 || index >= m.free_dim()) {
    fail(ErrorKind::InvalidInput, "free basis index out of range");
  }
  const int n = m.algebra().dim();
  ModuleElement u = zero(m);
  u.coeffs[index / n] = AlgebraElement::basis(m.algebra(), index % n);
  return u;
}

ModuleElement ModuleElement::from_coordinates(const PresentedModule& m,
                                              const ComplexVector& coords) {
  const int n = m.algebra().dim();
  if (coords.size() != m.free_dim()) {
    fail(ErrorKind::InvalidInput, "coordinate vector has length " +
                                      std::to_string(coords.size()) + ", expected " +
                                      std::to_string(m.free_dim()));
  }
  ModuleElement u;
  for (int i = 0; i < m.generators(); ++i) {
    u.coeffs.push_back(AlgebraElement::from_coordinates(m.algebra(), coords.segment(i * n, n)));
  }
  return u;
}

ComplexVector ModuleElement::coordinates() const {
  if (coeffs.empty()) return ComplexVector(0);
  const int n = coeffs.front().spec().dim();
  ComplexVector out(static_cast<Eigen::Index>(coeffs.size()) * n);
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    out.segment(static_cast<Eigen::Index>(i) * n, n) = coeffs[i].coordinates();
  }
  return out;
}

void require_element_of(const PresentedModule& m, const ModuleElement& u, const char* where) {
  if (static_cast<int>(u.coeffs.size()) != m.generators()) {
    fail(ErrorKind::InvalidInput, std::string(where) + ": element has " +
                                      std::to_string(u.coeffs.size()) +
                                      " coefficients, module has " +
                                      std::to_string(m.generators()) + " generators");
  }
  for (const auto& c : u.coeffs) require_same_spec(c.spec(), m.algebra(), where);
}

ModuleElement operator+(const ModuleElement& u, const ModuleElement& v) {
  if (u.coeffs.size() != v.coeffs.size()) fail(ErrorKind::InvalidInput, "element size mismatch");
  ModuleElement out = u;
  for (std::size_t i = 0; i < u.coeffs.size(); ++i) out.coeffs[i] += v.coeffs[i];
  return out;
}

ModuleElement operator-(const ModuleElement& u, const ModuleElement& v) {
  return u + Complex(-1.0) * v;
}

ModuleElement operator*(Complex scale, const ModuleElement& u) {
  ModuleElement out = u;
  for (auto& c : out.coeffs) c *= scale;
  return out;
}

AlgebraElement inner_product(const PresentedModule& m, const ModuleElement& u,
                             const ModuleElement& v) {
  require_element_of(m, u, "inner_product");
  require_element_of(m, v, "inner_product");
  const int k = m.generators();
  AlgebraElement out = AlgebraElement::zero(m.algebra());
  for (int j = 0; j < k; ++j) {
    AlgebraElement gd = AlgebraElement::zero(m.algebra());
    for (int i = 0; i < k; ++i) {
      const AlgebraElement lhs = u.coeffs[i].adjoint();
      for (int s = 0; s < m.algebra().num_blocks(); ++s) {
        gd.block(s).noalias() += lhs.block(s) * m.gram(i, j).block(s);
      }
    }
    for (int s = 0; s < m.algebra().num_blocks(); ++s) {
      out.block(s).noalias() += gd.block(s) * v.coeffs[j].block(s);
    }
  }
  return out;
}

double null_defect(const PresentedModule& m, const ModuleElement& u) {
  return std::max(0.0, trace(inner_product(m, u, u)).real());
}

bool equivalent(const PresentedModule& m, const ModuleElement& u, const ModuleElement& v,
                const NumericConfig& cfg) {
  return null_defect(m, u - v) <= cfg.verify_tol;
}

ComplexMatrix scalar_gram(const PresentedModule& m) {
  // trace(E_{qp} G E_{rt}) = G[p,r] delta_{qt} within one block.
  const AlgebraSpec& spec = m.algebra();
  const int n = spec.dim();
  const int k = m.generators();
  ComplexMatrix out = ComplexMatrix::Zero(k * n, k * n);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      for (int s = 0; s < spec.num_blocks(); ++s) {
        const int d = spec.block_dim(s);
        const ComplexMatrix& g = m.gram(i, j).block(s);
        for (int p = 0; p < d; ++p)
          for (int r = 0; r < d; ++r)
            for (int q = 0; q < d; ++q)
              out(i * n + basis_position(spec, {s, p, q}), j * n + basis_position(spec, {s, r, q})) =
                  g(p, r);
      }
    }
  }
  return out;
}

int module_dim(const PresentedModule& m, const NumericConfig& cfg) {
  if (m.free_dim() == 0) return 0;
  return rank_kernel(scalar_gram(m), cfg).rank;
}

ModuleElement right_act(const PresentedModule& m, const ModuleElement& u, const AlgebraElement& c) {
  require_element_of(m, u, "right_act");
  require_same_spec(c.spec(), m.algebra(), "right_act");
  ModuleElement out = u;
  for (auto& coeff : out.coeffs) coeff = coeff * c;
  return out;
}

// ---------------------------------------------------------------------------
// Correspondence

Correspondence::Correspondence(PresentedModule module, AlgebraSpec left_algebra,
                               std::vector<ElementMatrix> action)
    : module_(std::move(module)), left_(std::move(left_algebra)), action_(std::move(action)) {
  if (static_cast<int>(action_.size()) != left_.dim()) {
    fail(ErrorKind::InvalidInput, "left action needs one matrix per basis element (" +
                                      std::to_string(left_.dim()) + "), got " +
                                      std::to_string(action_.size()));
  }
  const int k = module_.generators();
  for (const auto& a : action_) {
    if (a.rows() != k || a.cols() != k) {
      fail(ErrorKind::InvalidInput, "left action matrices must be k x k");
    }
    require_same_spec(a.spec(), module_.algebra(), "left action");
  }
}

ElementMatrix Correspondence::action_matrix(const AlgebraElement& b) const {
  require_same_spec(b.spec(), left_, "left action");
  const ComplexVector coords = b.coordinates();
  const int k = generators();
  ElementMatrix out(k, k, right_algebra());
  for (int alpha = 0; alpha < left_.dim(); ++alpha) {
    if (coords(alpha) == Complex(0.0)) continue;
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        for (int s = 0; s < right_algebra().num_blocks(); ++s) {
          out(i, j).block(s) += coords(alpha) * action_[alpha](i, j).block(s);
        }
      }
  }
  return out;
}

namespace {

ModuleElement apply_element_matrix(const ElementMatrix& a, const ModuleElement& u) {
  ModuleElement out;
  for (int m = 0; m < a.rows(); ++m) {
    AlgebraElement acc = AlgebraElement::zero(a.spec());
    for (int j = 0; j < a.cols(); ++j) {
      for (int s = 0; s < a.spec().num_blocks(); ++s) {
        acc.block(s).noalias() += a(m, j).block(s) * u.coeffs[j].block(s);
      }
    }
    out.coeffs.push_back(std::move(acc));
  }
  return out;
}

}  // namespace

ModuleElement left_act(const Correspondence& corr, const AlgebraElement& b, const ModuleElement& u) {
  require_element_of(corr.module(), u, "left_act");
  return apply_element_matrix(corr.action_matrix(b), u);
}

ComplexMatrix left_action_coordinates(const Correspondence& corr, const AlgebraElement& b) {
  const PresentedModule& m = corr.module();
  const ElementMatrix a = corr.action_matrix(b);
  ComplexMatrix out(m.free_dim(), m.free_dim());
  for (int idx = 0; idx < m.free_dim(); ++idx) {
    out.col(idx) = apply_element_matrix(a, ModuleElement::free_basis(m, idx)).coordinates();
  }
  return out;
}

LeftActionReport check_left_action(const Correspondence& corr, const NumericConfig& cfg) {
  const ElementMatrix& g = corr.module().gram();
  const AlgebraSpec& left = corr.left_algebra();
  const auto basis = canonical_basis(left);

  LeftActionReport report;
  report.unital_defect = (g * corr.action_matrix(AlgebraElement::unit(left)) - g).max_abs();

  std::vector<ElementMatrix> g_a;
  for (const auto& a : corr.action()) g_a.push_back(g * a);

  for (int alpha = 0; alpha < left.dim(); ++alpha) {
    for (int beta = 0; beta < left.dim(); ++beta) {
      const ElementMatrix lhs = g * corr.action_matrix(basis[alpha] * basis[beta]);
      const ElementMatrix rhs = g_a[alpha] * corr.action()[beta];
      report.mult_defect = std::max(report.mult_defect, (lhs - rhs).max_abs());
    }
    const ElementMatrix adj = corr.action_matrix(basis[alpha].adjoint()).adjoint() * g;
    report.adjoint_defect = std::max(report.adjoint_defect, (adj - g_a[alpha]).max_abs());
  }
  report.pass = report.unital_defect <= cfg.verify_tol && report.mult_defect <= cfg.verify_tol &&
                report.adjoint_defect <= cfg.verify_tol;
  return report;
}

// ---------------------------------------------------------------------------
// Interior tensor products

PresentedModule interior_tensor(const PresentedModule& e, const Correspondence& f,
                                const NumericConfig& cfg) {
  require_same_spec(e.algebra(), f.left_algebra(), "interior_tensor");
  const int ke = e.generators();
  const int kf = f.generators();
  const AlgebraSpec& c = f.right_algebra();
  const ElementMatrix& gf = f.module().gram();

  ElementMatrix h(ke * kf, ke * kf, c);
  for (int i = 0; i < ke; ++i) {
    for (int k = 0; k < ke; ++k) {
      const ElementMatrix block = gf * f.action_matrix(e.gram(i, k));
      for (int j = 0; j < kf; ++j)
        for (int l = 0; l < kf; ++l) h(i * kf + j, k * kf + l) = block(j, l);
    }
  }
  PresentedModule out = PresentedModule::unchecked(c, std::move(h));
  if (!out.gram_is_positive(cfg)) {
    fail(ErrorKind::InternalError,
         "interior tensor Gram is not positive; the correspondence is invalid");
  }
  return out;
}

Correspondence interior_tensor(const Correspondence& e, const Correspondence& f,
                               const NumericConfig& cfg) {
  PresentedModule module = interior_tensor(e.module(), f, cfg);
  const int ke = e.generators();
  const int kf = f.generators();
  std::vector<ElementMatrix> action;
  action.reserve(e.action().size());
  for (const auto& ae : e.action()) {
    ElementMatrix a(ke * kf, ke * kf, f.right_algebra());
    for (int m = 0; m < ke; ++m) {
      for (int j = 0; j < ke; ++j) {
        const ElementMatrix af = f.action_matrix(ae(m, j));
        for (int lp = 0; lp < kf; ++lp)
          for (int l = 0; l < kf; ++l) a(m * kf + lp, j * kf + l) = af(lp, l);
      }
    }
    action.push_back(std::move(a));
  }
  return {std::move(module), e.left_algebra(), std::move(action)};
}

ModuleElement tensor_element(const PresentedModule& e, const Correspondence& f,
                             const ModuleElement& x, const ModuleElement& y) {
  require_element_of(e, x, "tensor_element");
  require_element_of(f.module(), y, "tensor_element");
  require_same_spec(e.algebra(), f.left_algebra(), "tensor_element");
  ModuleElement out;
  out.coeffs.reserve(static_cast<std::size_t>(e.generators()) * f.generators());
  for (int i = 0; i < e.generators(); ++i) {
    const ModuleElement by = left_act(f, x.coeffs[i], y);
    for (auto& c : by.coeffs) out.coeffs.push_back(c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Standard modules

PresentedModule free_module(const AlgebraSpec& algebra, int k) {
  return PresentedModule::unchecked(algebra, ElementMatrix::identity(k, algebra));
}

Correspondence identity_correspondence(const AlgebraSpec& algebra) {
  PresentedModule module = free_module(algebra, 1);
  std::vector<ElementMatrix> action;
  for (const auto& b : canonical_basis(algebra)) action.emplace_back(1, 1, algebra, std::vector{b});
  return {std::move(module), algebra, std::move(action)};
}

PresentedModule matrix_module(int m, int n) {
  if (m < 1 || n < 1) fail(ErrorKind::InvalidInput, "matrix_module needs m, n >= 1");
  const AlgebraSpec spec({n});
  ElementMatrix g(m, m, spec);
  for (int a = 0; a < m; ++a) g(a, a).block(0)(0, 0) = 1.0;
  return PresentedModule::unchecked(spec, std::move(g));
}

std::optional<std::pair<int, int>> as_matrix_module(const PresentedModule& module,
                                                    const NumericConfig& cfg) {
  if (module.algebra().num_blocks() != 1 || module.generators() < 1) return std::nullopt;
  const int m = module.generators();
  const int n = module.algebra().block_dim(0);
  if ((module.gram() - matrix_module(m, n).gram()).max_abs() > cfg.verify_tol) return std::nullopt;
  return std::make_pair(m, n);
}

ComplexMatrix to_operator(const PresentedModule& module, const ModuleElement& u) {
  const auto shape = as_matrix_module(module);
  if (!shape) fail(ErrorKind::WrongShape, "module is not a matrix module");
  require_element_of(module, u, "to_operator");
  ComplexMatrix x(shape->first, shape->second);
  for (int a = 0; a < shape->first; ++a) x.row(a) = u.coeffs[a].block(0).row(0);
  return x;
}

ModuleElement from_operator(const PresentedModule& module, const ComplexMatrix& x) {
  const auto shape = as_matrix_module(module);
  if (!shape) fail(ErrorKind::WrongShape, "module is not a matrix module");
  if (x.rows() != shape->first || x.cols() != shape->second) {
    fail(ErrorKind::InvalidInput, "operator has the wrong shape for this matrix module");
  }
  ModuleElement u = ModuleElement::zero(module);
  for (int a = 0; a < shape->first; ++a) u.coeffs[a].block(0).row(0) = x.row(a);
  return u;
}

// ---------------------------------------------------------------------------
// Free embedding

ModuleElement FreeEmbedding::apply(const ModuleElement& u) const {
  if (static_cast<int>(u.coeffs.size()) != root.cols()) {
    fail(ErrorKind::InvalidInput, "embedding applied to an element of the wrong module");
  }
  return apply_element_matrix(root, u);
}

ComplexMatrix FreeEmbedding::coordinate_matrix() const {
  const int n = target.algebra().dim();
  const int dom = root.cols() * n;
  ComplexMatrix out(target.free_dim(), dom);
  const PresentedModule shape = PresentedModule::unchecked(target.algebra(),
                                                           ElementMatrix(root.cols(), root.cols(),
                                                                         target.algebra()));
  for (int idx = 0; idx < dom; ++idx) {
    out.col(idx) = apply(ModuleElement::free_basis(shape, idx)).coordinates();
  }
  return out;
}

FreeEmbedding embed_free(const PresentedModule& module, const NumericConfig& cfg) {
  const AlgebraSpec& spec = module.algebra();
  std::vector<ComplexMatrix> roots;
  for (int s = 0; s < spec.num_blocks(); ++s) {
    roots.push_back(psd_sqrt(rearranged_block(module.gram(), s), cfg));
  }
  return {free_module(spec, module.generators()),
          from_rearranged(roots, module.generators(), spec)};
}

}  // namespace modfactor
