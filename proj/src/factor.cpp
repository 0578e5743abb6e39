#include "modfactor/factor.hpp"

#include <algorithm>
#include <string>

#include "modfactor/error.hpp"

namespace modfactor {

ModuleMap::ModuleMap(PresentedModule domain, PresentedModule codomain, ComplexMatrix values)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), values_(std::move(values)) {
  if (values_.rows() != codomain_.free_dim() || values_.cols() != domain_.free_dim()) {
    fail(ErrorKind::InvalidInput,
         "module map matrix is " + std::to_string(values_.rows()) + "x" +
             std::to_string(values_.cols()) + ", expected " +
             std::to_string(codomain_.free_dim()) + "x" + std::to_string(domain_.free_dim()));
  }
  if (!is_finite(values_)) fail(ErrorKind::InvalidInput, "module map has non-finite entries");
}

ModuleMap::ModuleMap(PresentedModule domain, PresentedModule codomain,
                     const std::vector<ModuleElement>& values)
    : domain_(std::move(domain)), codomain_(std::move(codomain)) {
  if (static_cast<int>(values.size()) != domain_.free_dim()) {
    fail(ErrorKind::InvalidInput, "module map needs " + std::to_string(domain_.free_dim()) +
                                      " values, got " + std::to_string(values.size()));
  }
  values_.resize(codomain_.free_dim(), domain_.free_dim());
  for (int p = 0; p < domain_.free_dim(); ++p) {
    require_element_of(codomain_, values[p], "module map value");
    values_.col(p) = values[p].coordinates();
  }
}

ModuleElement ModuleMap::value(int free_index) const {
  if (free_index < 0 || free_index >= domain_.free_dim()) {
    fail(ErrorKind::InvalidInput, "free index out of range");
  }
  return ModuleElement::from_coordinates(codomain_, values_.col(free_index));
}

ModuleElement ModuleMap::operator()(const ModuleElement& x) const {
  require_element_of(domain_, x, "module map");
  return ModuleElement::from_coordinates(codomain_, values_ * x.coordinates());
}

ModuleMap operator*(Complex scale, const ModuleMap& t) {
  return {t.domain(), t.codomain(), ComplexMatrix(scale * t.matrix())};
}

double well_definedness_defect(const ModuleMap& t, const NumericConfig& cfg) {
  if (t.domain().free_dim() == 0) return 0.0;
  const RankKernel rk = rank_kernel(scalar_gram(t.domain()), cfg);
  if (rk.kernel.cols() == 0) return 0.0;
  const ComplexMatrix image = t.matrix() * rk.kernel;
  const ComplexMatrix form = image.adjoint() * scalar_gram(t.codomain()) * image;
  return std::max(0.0, form.diagonal().real().maxCoeff());
}

namespace {

/// G d for an element d: (G d)_i = sum_j G_ij d_j.
std::vector<AlgebraElement> gram_apply(const PresentedModule& m, const ModuleElement& d) {
  const int k = m.generators();
  const int nb = m.algebra().num_blocks();
  std::vector<AlgebraElement> out(k, AlgebraElement::zero(m.algebra()));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      for (int s = 0; s < nb; ++s) out[i].block(s).noalias() += m.gram(i, j).block(s) * d.coeffs[j].block(s);
  return out;
}

AlgebraElement pair_with(const ModuleElement& u, const std::vector<AlgebraElement>& gd) {
  AlgebraElement out = AlgebraElement::zero(gd.front().spec());
  for (std::size_t i = 0; i < gd.size(); ++i)
    for (int s = 0; s < out.spec().num_blocks(); ++s)
      out.block(s).noalias() += u.coeffs[i].block(s).adjoint() * gd[i].block(s);
  return out;
}

/// All inner products <u_p, u_q> of a list of elements.
std::vector<std::vector<AlgebraElement>> pairwise_inner(const PresentedModule& m,
                                                        const std::vector<ModuleElement>& us) {
  std::vector<std::vector<AlgebraElement>> out(us.size());
  if (m.generators() == 0) {
    for (auto& row : out) row.assign(us.size(), AlgebraElement::zero(m.algebra()));
    return out;
  }
  std::vector<std::vector<AlgebraElement>> gd;
  for (const auto& u : us) gd.push_back(gram_apply(m, u));
  for (std::size_t p = 0; p < us.size(); ++p)
    for (std::size_t q = 0; q < us.size(); ++q) out[p].push_back(pair_with(us[p], gd[q]));
  return out;
}

std::vector<ModuleElement> free_basis_of(const PresentedModule& m) {
  std::vector<ModuleElement> out;
  for (int p = 0; p < m.free_dim(); ++p) out.push_back(ModuleElement::free_basis(m, p));
  return out;
}

std::vector<ModuleElement> images(const ModuleMap& t) {
  std::vector<ModuleElement> out;
  for (int p = 0; p < t.domain().free_dim(); ++p) out.push_back(t.value(p));
  return out;
}

void require_compatible(const ModuleMap& t, const LinearMap& phi, const char* where) {
  require_same_spec(t.domain().algebra(), phi.domain(), where);
  require_same_spec(t.codomain().algebra(), phi.codomain(), where);
}

}  // namespace

PhiMapReport is_phi_map(const ModuleMap& t, const LinearMap& phi, const NumericConfig& cfg) {
  require_compatible(t, phi, "is_phi_map");
  const auto lhs = pairwise_inner(t.codomain(), images(t));
  const auto rhs = pairwise_inner(t.domain(), free_basis_of(t.domain()));
  PhiMapReport report;
  for (std::size_t p = 0; p < lhs.size(); ++p)
    for (std::size_t q = 0; q < lhs.size(); ++q) {
      report.max_defect = std::max(report.max_defect, (lhs[p][q] - apply(phi, rhs[p][q])).max_abs());
    }
  report.pass = report.max_defect <= cfg.verify_tol;
  return report;
}

LinearMap infer_phi(const ModuleMap& t, const NumericConfig& cfg) {
  if (well_definedness_defect(t, cfg) > cfg.verify_tol) {
    fail(ErrorKind::InvalidInput, "T does not vanish on null vectors of its domain");
  }
  const AlgebraSpec& b = t.domain().algebra();
  const AlgebraSpec& c = t.codomain().algebra();
  const auto lhs = pairwise_inner(t.codomain(), images(t));
  const auto rhs = pairwise_inner(t.domain(), free_basis_of(t.domain()));
  const Eigen::Index pairs = static_cast<Eigen::Index>(lhs.size() * lhs.size());

  ComplexMatrix a(pairs, b.dim());
  ComplexMatrix y(pairs, c.dim());
  Eigen::Index row = 0;
  for (std::size_t p = 0; p < lhs.size(); ++p)
    for (std::size_t q = 0; q < lhs.size(); ++q, ++row) {
      a.row(row) = rhs[p][q].coordinates().transpose();
      y.row(row) = lhs[p][q].coordinates().transpose();
    }

  const int span = pairs == 0 ? 0 : rank_kernel(a.adjoint() * a, cfg).rank;
  if (span < b.dim()) {
    fail(ErrorKind::NotFull, "inner products of the domain span " + std::to_string(span) +
                                 " of " + std::to_string(b.dim()) + " dimensions");
  }
  const LstsqResult sol = lstsq(a, y, cfg);
  if (sol.residual > cfg.verify_tol) {
    fail(ErrorKind::Inconsistent, "T is not a phi-map for any phi (residual " +
                                      std::to_string(sol.residual) + ")");
  }
  std::vector<AlgebraElement> values;
  for (int alpha = 0; alpha < b.dim(); ++alpha) {
    values.push_back(AlgebraElement::from_coordinates(c, sol.solution.row(alpha).transpose()));
  }
  return {b, c, std::move(values)};
}

IsometryDefect isometry_defect(const ModuleMap& v) {
  IsometryDefect d;
  const ComplexMatrix& m = v.matrix();
  d.scalar = max_abs(m.adjoint() * scalar_gram(v.codomain()) * m - scalar_gram(v.domain()));

  const PresentedModule& dom = v.domain();
  std::vector<ModuleElement> gens;
  for (int a = 0; a < dom.generators(); ++a) gens.push_back(v(ModuleElement::generator(dom, a)));
  const auto inner = pairwise_inner(v.codomain(), gens);
  for (int a = 0; a < dom.generators(); ++a)
    for (int b = 0; b < dom.generators(); ++b) {
      d.algebra = std::max(d.algebra, (inner[a][b] - dom.gram(a, b)).max_abs());
    }
  return d;
}

Factorization factorize(const ModuleMap& t, const LinearMap& phi, const NumericConfig& cfg) {
  require_compatible(t, phi, "factorize");
  if (!is_cp(phi, cfg)) fail(ErrorKind::NotCP, "phi is not completely positive");
  const PhiMapReport pm = is_phi_map(t, phi, cfg);
  if (!pm.pass) {
    fail(ErrorKind::NotPhiMap, "T is not a phi-map (defect " + std::to_string(pm.max_defect) + ")");
  }

  const PresentedModule& e = t.domain();
  const PresentedModule& f = t.codomain();
  const AlgebraSpec& b_spec = phi.domain();
  const AlgebraSpec& c_spec = phi.codomain();
  const int nb = b_spec.dim();
  const int nc = c_spec.dim();

  Factorization out;
  out.gns = gns(phi, cfg);
  out.tensor = interior_tensor(e, out.gns.corr, cfg);

  // Tensor generator (i, alpha) is e_i (.) b_alpha zeta; its free basis
  // vector with coefficient c_beta maps to T(e_i b_alpha) c_beta.
  std::vector<ComplexMatrix> right;
  for (const auto& c : canonical_basis(c_spec)) right.push_back(right_structure_constants(c));
  ComplexMatrix v(f.free_dim(), out.tensor.free_dim());
  for (int i = 0; i < e.generators(); ++i) {
    for (int alpha = 0; alpha < nb; ++alpha) {
      const ComplexVector tx = t.matrix().col(i * nb + alpha);
      for (int beta = 0; beta < nc; ++beta) {
        ComplexVector col(f.free_dim());
        for (int g = 0; g < f.generators(); ++g) col.segment(g * nc, nc) = right[beta] * tx.segment(g * nc, nc);
        v.col((i * nb + alpha) * nc + beta) = col;
      }
    }
  }
  out.v = ModuleMap(out.tensor, f, std::move(v));

  out.defects.well_definedness = well_definedness_defect(out.v, cfg);
  if (out.defects.well_definedness > cfg.verify_tol) {
    fail(ErrorKind::WellDefinednessFailure,
         "v does not vanish on null vectors of E (.) F (defect " +
             std::to_string(out.defects.well_definedness) + ")");
  }
  out.defects.isometry = isometry_defect(out.v).max();

  for (int p = 0; p < e.free_dim(); ++p) {
    const ModuleElement x = ModuleElement::free_basis(e, p);
    const ModuleElement xz = tensor_element(e, out.gns.corr, x, out.gns.zeta);
    out.defects.reconstruction =
        std::max(out.defects.reconstruction, null_defect(f, out.v(xz) - t.value(p)));
  }
  out.pass = out.defects.isometry <= cfg.verify_tol &&
             out.defects.reconstruction <= cfg.verify_tol &&
             out.defects.well_definedness <= cfg.verify_tol;
  return out;
}

PhiMapPair from_factorization(const Correspondence& corr, const ModuleElement& zeta,
                              const ModuleMap& v, const PresentedModule& e,
                              const NumericConfig& cfg) {
  require_element_of(corr.module(), zeta, "from_factorization");
  const PresentedModule tensor = interior_tensor(e, corr, cfg);
  require_same_spec(v.domain().algebra(), tensor.algebra(), "from_factorization");
  if (v.domain().generators() != tensor.generators() ||
      (v.domain().gram() - tensor.gram()).max_abs() > cfg.verify_tol) {
    fail(ErrorKind::InvalidInput, "domain of v is not E (.) F");
  }
  const ModuleMap v_on_tensor(tensor, v.codomain(), v.matrix());
  const double defect = isometry_defect(v_on_tensor).max();
  if (defect > cfg.verify_tol) {
    fail(ErrorKind::NotIsometry, "v is not an isometry (defect " + std::to_string(defect) + ")");
  }

  ComplexMatrix t(v.codomain().free_dim(), e.free_dim());
  for (int p = 0; p < e.free_dim(); ++p) {
    const ModuleElement xz = tensor_element(e, corr, ModuleElement::free_basis(e, p), zeta);
    t.col(p) = v.matrix() * xz.coordinates();
  }
  return {ModuleMap(e, v.codomain(), std::move(t)), induced_map(corr, zeta)};
}

}  // namespace modfactor
