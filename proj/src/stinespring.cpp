#include "modfactor/stinespring.hpp"

#include <algorithm>
#include <string>

#include "modfactor/error.hpp"

namespace modfactor {

double StinespringDefects::max() const {
  return std::max({reconstruction, coisometry, v_gram, rho_unital, rho_mult, rho_adjoint,
                   psi_inner});
}

Correspondence column_space(int d) {
  const AlgebraSpec scalars({1});
  const AlgebraSpec md({d});
  std::vector<ElementMatrix> action;
  // E_pq e_j = delta_qj e_p
  for (int idx = 0; idx < md.dim(); ++idx) {
    const BasisIndex bi = basis_index(md, idx);
    ElementMatrix a(d, d, scalars);
    a(bi.row, bi.col) = AlgebraElement::unit(scalars);
    action.push_back(std::move(a));
  }
  return {free_module(scalars, d), md, std::move(action)};
}

namespace {

ComplexMatrix combine(const std::vector<ComplexMatrix>& ops, const AlgebraElement& b) {
  const ComplexVector coords = b.coordinates();
  ComplexMatrix out = ComplexMatrix::Zero(ops.front().rows(), ops.front().cols());
  for (Eigen::Index a = 0; a < coords.size(); ++a) {
    if (coords(a) != Complex(0.0)) out += coords(a) * ops[a];
  }
  return out;
}

int span_rank(const ComplexMatrix& cols, const NumericConfig& cfg) {
  if (cols.rows() == 0) return 0;
  return rank_kernel(cols * cols.adjoint(), cfg).rank;
}

}  // namespace

StinespringData stinespring(const ModuleMap& t, const LinearMap& phi, const NumericConfig& cfg) {
  const AlgebraSpec& c_spec = phi.codomain();
  if (c_spec.num_blocks() != 1) {
    fail(ErrorKind::WrongShape, "codomain algebra must be a single block B(H1)");
  }
  const int d1 = c_spec.block_dim(0);
  const auto shape = as_matrix_module(t.codomain(), cfg);
  if (!shape || shape->second != d1) {
    fail(ErrorKind::WrongShape, "codomain module must be matrix_module(d2, " +
                                    std::to_string(d1) + ")");
  }
  const int d2 = shape->first;

  const Factorization fac = factorize(t, phi, cfg);
  if (!fac.pass) {
    fail(ErrorKind::NotIsometry, "factorization did not verify; cannot build dilation");
  }
  const PresentedModule& e = t.domain();
  const PresentedModule& f = t.codomain();
  const AlgebraSpec& b_spec = phi.domain();
  const auto b_basis = canonical_basis(b_spec);

  StinespringData s;
  s.h1_dim = d1;
  s.h2_dim = d2;

  const Correspondence h1 = column_space(d1);
  s.k1 = interior_tensor(fac.gns.corr, h1, cfg);
  const PsdFactor f1 = psd_factor(scalar_gram(s.k1.module()), cfg);

  for (const auto& b : b_basis) s.rho.push_back(f1.r * left_action_coordinates(s.k1, b) * f1.r_pinv);

  ComplexMatrix zeta_cols(s.k1.module().free_dim(), d1);
  for (int j = 0; j < d1; ++j) {
    zeta_cols.col(j) = tensor_element(fac.gns.corr.module(), h1, fac.gns.zeta,
                                      ModuleElement::generator(h1.module(), j))
                           .coordinates();
  }
  s.v = f1.r * zeta_cols;

  s.k2 = interior_tensor(e, s.k1, cfg);
  const PsdFactor f2 = psd_factor(scalar_gram(s.k2), cfg);
  const int k1_gens = s.k1.generators();
  for (int p = 0; p < e.free_dim(); ++p) {
    const ModuleElement x = ModuleElement::free_basis(e, p);
    ComplexMatrix cols(s.k2.free_dim(), k1_gens);
    for (int g = 0; g < k1_gens; ++g) {
      cols.col(g) = tensor_element(e, s.k1, x, ModuleElement::generator(s.k1.module(), g)).coordinates();
    }
    s.psi.push_back(f2.r * cols * f1.r_pinv);
  }

  // K2 generator (i, (alpha, j)) is ((e_i (.) b_alpha zeta) (.) h_j).
  ComplexMatrix wg(d2, s.k2.free_dim());
  for (int g = 0; g < fac.tensor.generators(); ++g) {
    const ComplexMatrix op = to_operator(f, fac.v(ModuleElement::generator(fac.tensor, g)));
    for (int j = 0; j < d1; ++j) wg.col(g * d1 + j) = op.col(j);
  }
  s.wstar = wg * f2.r_pinv;

  // Verification of the dilation identities.
  StinespringDefects& d = s.defects;
  for (int p = 0; p < e.free_dim(); ++p) {
    const ComplexMatrix tx = to_operator(f, t.value(p));
    d.reconstruction = std::max(d.reconstruction, max_abs(tx - s.wstar * s.psi[p] * s.v));
  }
  d.coisometry = max_abs(s.wstar.adjoint() * s.wstar -
                         ComplexMatrix::Identity(s.k2_dim(), s.k2_dim()));
  d.v_gram = max_abs(s.v.adjoint() * s.v - apply(phi, AlgebraElement::unit(b_spec)).rep());

  const ComplexMatrix id1 = ComplexMatrix::Identity(s.k1_dim(), s.k1_dim());
  d.rho_unital = max_abs(combine(s.rho, AlgebraElement::unit(b_spec)) - id1);
  for (std::size_t a = 0; a < b_basis.size(); ++a) {
    for (std::size_t b = 0; b < b_basis.size(); ++b) {
      d.rho_mult = std::max(d.rho_mult, max_abs(combine(s.rho, b_basis[a] * b_basis[b]) -
                                                s.rho[a] * s.rho[b]));
    }
    d.rho_adjoint = std::max(d.rho_adjoint,
                             max_abs(combine(s.rho, b_basis[a].adjoint()) - s.rho[a].adjoint()));
  }
  for (int p = 0; p < e.free_dim(); ++p) {
    const ModuleElement xp = ModuleElement::free_basis(e, p);
    for (int q = 0; q < e.free_dim(); ++q) {
      const AlgebraElement ip = inner_product(e, xp, ModuleElement::free_basis(e, q));
      d.psi_inner = std::max(d.psi_inner,
                             max_abs(s.psi[p].adjoint() * s.psi[q] - combine(s.rho, ip)));
    }
  }
  s.pass = d.max() <= cfg.verify_tol;
  return s;
}

CyclicityReport cyclicity_check(const StinespringData& s, const NumericConfig& cfg) {
  CyclicityReport r;
  const Eigen::Index k1 = s.v.rows();
  ComplexMatrix orbit(k1, static_cast<Eigen::Index>(s.rho.size()) * s.v.cols());
  for (std::size_t a = 0; a < s.rho.size(); ++a) {
    orbit.middleCols(static_cast<Eigen::Index>(a) * s.v.cols(), s.v.cols()) = s.rho[a] * s.v;
  }
  r.rho_v_span = span_rank(orbit, cfg);
  r.stinespring_cyclic = r.rho_v_span == k1;

  const Eigen::Index k2 = s.psi.empty() ? s.wstar.cols() : s.psi.front().rows();
  const Eigen::Index k1_cols = s.psi.empty() ? 0 : s.psi.front().cols();
  ComplexMatrix range(k2, static_cast<Eigen::Index>(s.psi.size()) * k1_cols);
  for (std::size_t p = 0; p < s.psi.size(); ++p) {
    range.middleCols(static_cast<Eigen::Index>(p) * k1_cols, k1_cols) = s.psi[p];
  }
  r.psi_span = span_rank(range, cfg);
  r.nondegenerate = r.psi_span == k2;
  return r;
}

}  // namespace modfactor
