#include "modfactor/cpgns.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "modfactor/error.hpp"

namespace modfactor {

LinearMap::LinearMap(AlgebraSpec domain, AlgebraSpec codomain, std::vector<AlgebraElement> values)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != domain_.dim()) {
    fail(ErrorKind::InvalidInput, "linear map needs " + std::to_string(domain_.dim()) +
                                      " values, got " + std::to_string(values_.size()));
  }
  for (const auto& v : values_) require_same_spec(v.spec(), codomain_, "linear map value");
}

ComplexMatrix LinearMap::coordinate_matrix() const {
  ComplexMatrix m(codomain_.dim(), domain_.dim());
  for (int a = 0; a < domain_.dim(); ++a) m.col(a) = values_[a].coordinates();
  return m;
}

AlgebraElement apply(const LinearMap& phi, const AlgebraElement& b) {
  require_same_spec(b.spec(), phi.domain(), "apply");
  const ComplexVector coords = b.coordinates();
  AlgebraElement out = AlgebraElement::zero(phi.codomain());
  for (int a = 0; a < phi.domain().dim(); ++a) {
    if (coords(a) != Complex(0.0)) out += coords(a) * phi.values()[a];
  }
  return out;
}

LinearMap identity_map(const AlgebraSpec& spec) {
  return {spec, spec, canonical_basis(spec)};
}

LinearMap trace_map(const AlgebraSpec& domain, const AlgebraSpec& codomain) {
  std::vector<AlgebraElement> values;
  for (const auto& b : canonical_basis(domain)) {
    values.push_back(trace(b) * AlgebraElement::unit(codomain));
  }
  return {domain, codomain, std::move(values)};
}

LinearMap transpose_map(const AlgebraSpec& spec) {
  std::vector<AlgebraElement> values;
  for (const auto& b : canonical_basis(spec)) {
    AlgebraElement t = b;
    for (int s = 0; s < spec.num_blocks(); ++s) t.block(s).transposeInPlace();
    values.push_back(std::move(t));
  }
  return {spec, spec, std::move(values)};
}

LinearMap operator*(Complex scale, const LinearMap& phi) {
  std::vector<AlgebraElement> values;
  for (const auto& v : phi.values()) values.push_back(scale * v);
  return {phi.domain(), phi.codomain(), std::move(values)};
}

LinearMap operator+(const LinearMap& a, const LinearMap& b) {
  require_same_spec(a.domain(), b.domain(), "map sum");
  require_same_spec(a.codomain(), b.codomain(), "map sum");
  std::vector<AlgebraElement> values;
  for (std::size_t i = 0; i < a.values().size(); ++i) values.push_back(a.values()[i] + b.values()[i]);
  return {a.domain(), a.codomain(), std::move(values)};
}

double max_difference(const LinearMap& a, const LinearMap& b) {
  require_same_spec(a.domain(), b.domain(), "map difference");
  require_same_spec(a.codomain(), b.codomain(), "map difference");
  double d = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    d = std::max(d, (a.values()[i] - b.values()[i]).max_abs());
  }
  return d;
}

// ---------------------------------------------------------------------------
// Choi and Kraus

std::vector<ComplexMatrix> choi(const LinearMap& phi) {
  const AlgebraSpec& dom = phi.domain();
  const int d = phi.codomain().rep_dim();
  std::vector<ComplexMatrix> out;
  for (int i = 0; i < dom.num_blocks(); ++i) {
    const int n = dom.block_dim(i);
    ComplexMatrix c(n * d, n * d);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        c.block(j * d, k * d, d, d) = phi.values()[basis_position(dom, {i, j, k})].rep();
      }
    out.push_back(std::move(c));
  }
  return out;
}

namespace {

bool hermitian_within(const ComplexMatrix& m, const NumericConfig& cfg) {
  return max_abs(m - m.adjoint()) <= cfg.verify_tol * (1.0 + max_abs(m));
}

HermEig hermitian_part_eig(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver((m + m.adjoint()) * 0.5);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

}  // namespace

ChoiSpectrum choi_spectrum(const LinearMap& phi, const NumericConfig& cfg) {
  ChoiSpectrum out;
  bool first = true;
  bool hermitian = true;
  for (const auto& c : choi(phi)) {
    hermitian = hermitian && hermitian_within(c, cfg);
    const HermEig eig = hermitian_part_eig(c);
    const double lo = eig.values(0);
    const double hi = eig.values(eig.values.size() - 1);
    out.lambda_min = first ? lo : std::min(out.lambda_min, lo);
    out.lambda_max = first ? hi : std::max(out.lambda_max, hi);
    first = false;
  }
  out.cp = hermitian && out.lambda_min >= -cfg.psd_tol * std::max(1.0, out.lambda_max);
  return out;
}

bool is_cp(const LinearMap& phi, const NumericConfig& cfg) {
  for (const auto& c : choi(phi)) {
    if (!hermitian_within(c, cfg)) return false;
    if (!psd_check(c, cfg)) return false;
  }
  return true;
}

KrausDecomposition kraus_reconstruction(const LinearMap& phi, const NumericConfig& /*cfg*/) {
  const AlgebraSpec& dom = phi.domain();
  const AlgebraSpec& cod = phi.codomain();
  const int d = cod.rep_dim();
  const auto blocks = choi(phi);

  KrausDecomposition out;
  for (int i = 0; i < dom.num_blocks(); ++i) {
    const int n = dom.block_dim(i);
    const HermEig eig = hermitian_part_eig(blocks[i]);
    std::vector<ComplexMatrix> ops;
    for (Eigen::Index r = 0; r < eig.values.size(); ++r) {
      if (eig.values(r) <= 0.0) continue;
      const double scale = std::sqrt(eig.values(r));
      ComplexMatrix a(d, n);
      for (int j = 0; j < n; ++j)
        for (int p = 0; p < d; ++p) a(p, j) = scale * eig.vectors(j * d + p, r);
      ops.push_back(std::move(a));
    }
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        ComplexMatrix rebuilt = ComplexMatrix::Zero(d, d);
        for (const auto& a : ops) rebuilt.noalias() += a.col(j) * a.col(k).adjoint();
        const ComplexMatrix target = phi.values()[basis_position(dom, {i, j, k})].rep();
        out.reconstruction_defect = std::max(out.reconstruction_defect, max_abs(rebuilt - target));
        const ComplexMatrix off = rebuilt - AlgebraElement::from_rep(cod, rebuilt).rep();
        out.subalgebra_defect = std::max(out.subalgebra_defect, max_abs(off));
      }
    }
    out.operators.push_back(std::move(ops));
  }
  return out;
}

KrausDecomposition kraus_oracle(const LinearMap& phi, const NumericConfig& cfg) {
  KrausDecomposition k = kraus_reconstruction(phi, cfg);
  if (k.reconstruction_defect > cfg.verify_tol) {
    fail(ErrorKind::NotCP, "Kraus reconstruction defect " +
                               std::to_string(k.reconstruction_defect) + " exceeds tolerance");
  }
  return k;
}

// ---------------------------------------------------------------------------
// GNS

ElementMatrix gns_gram(const LinearMap& phi) {
  const auto basis = canonical_basis(phi.domain());
  const int n = phi.domain().dim();
  ElementMatrix g(n, n, phi.codomain());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) g(a, b) = apply(phi, basis[a].adjoint() * basis[b]);
  return g;
}

bool gns_gram_is_positive(const LinearMap& phi, const NumericConfig& cfg) {
  const ElementMatrix g = gns_gram(phi);
  for (int s = 0; s < phi.codomain().num_blocks(); ++s) {
    const ComplexMatrix block = rearranged_block(g, s);
    if (!hermitian_within(block, cfg)) return false;
    if (!psd_check(block, cfg)) return false;
  }
  return true;
}

GnsData gns(const LinearMap& phi, const NumericConfig& cfg) {
  const AlgebraSpec& b = phi.domain();
  const AlgebraSpec& c = phi.codomain();
  if (!gns_gram_is_positive(phi, cfg)) {
    fail(ErrorKind::NotCP, "GNS Gram phi(b_a^* b_b) is not positive; the map is not CP");
  }
  PresentedModule module = PresentedModule::unchecked(c, gns_gram(phi));

  const AlgebraElement unit_c = AlgebraElement::unit(c);
  std::vector<ElementMatrix> action;
  for (const auto& basis_el : canonical_basis(b)) {
    const ComplexMatrix l = structure_constants(basis_el);
    ElementMatrix a(b.dim(), b.dim(), c);
    for (int m = 0; m < b.dim(); ++m)
      for (int alpha = 0; alpha < b.dim(); ++alpha) {
        if (l(m, alpha) != Complex(0.0)) a(m, alpha) = l(m, alpha) * unit_c;
      }
    action.push_back(std::move(a));
  }

  ModuleElement zeta;
  const ComplexVector one = AlgebraElement::unit(b).coordinates();
  for (int alpha = 0; alpha < b.dim(); ++alpha) zeta.coeffs.push_back(one(alpha) * unit_c);

  return {Correspondence(std::move(module), b, std::move(action)), std::move(zeta)};
}

double gns_defect(const GnsData& g, const LinearMap& phi) {
  return max_difference(induced_map(g.corr, g.zeta), phi);
}

LinearMap induced_map(const Correspondence& corr, const ModuleElement& zeta) {
  require_element_of(corr.module(), zeta, "induced_map");
  std::vector<AlgebraElement> values;
  for (const auto& b : canonical_basis(corr.left_algebra())) {
    values.push_back(inner_product(corr.module(), zeta, left_act(corr, b, zeta)));
  }
  return {corr.left_algebra(), corr.right_algebra(), std::move(values)};
}

MinimalityReport gns_minimality(const GnsData& g, const NumericConfig& cfg) {
  const PresentedModule& m = g.corr.module();
  const auto left_basis = canonical_basis(g.corr.left_algebra());
  const auto right_basis = canonical_basis(m.algebra());

  ComplexMatrix z(m.free_dim(), static_cast<Eigen::Index>(left_basis.size() * right_basis.size()));
  Eigen::Index col = 0;
  for (const auto& b : left_basis) {
    const ModuleElement bz = left_act(g.corr, b, g.zeta);
    for (const auto& c : right_basis) z.col(col++) = right_act(m, bz, c).coordinates();
  }
  const ComplexMatrix s = scalar_gram(m);
  MinimalityReport report;
  report.module_rank = m.free_dim() == 0 ? 0 : rank_kernel(s, cfg).rank;
  report.span_rank = z.cols() == 0 ? 0 : rank_kernel(z.adjoint() * s * z, cfg).rank;
  report.pass = report.span_rank == report.module_rank;
  return report;
}

}  // namespace modfactor
