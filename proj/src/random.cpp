#include "modfactor/random.hpp"

#include <cmath>
#include <numbers>

#include "modfactor/error.hpp"

namespace modfactor {

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  // Box-Muller; 1 - u keeps the logarithm finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Complex Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

int Rng::uniform_int(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(engine_() % span);
}

ComplexMatrix Rng::gaussian(int rows, int cols, double scale) {
  ComplexMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = scale * complex_normal();
  return m;
}

AlgebraElement Rng::gaussian_element(const AlgebraSpec& spec, double scale) {
  std::vector<ComplexMatrix> blocks;
  for (int n : spec.block_dims()) blocks.push_back(gaussian(n, n, scale));
  return {spec, std::move(blocks)};
}

ComplexMatrix Rng::isometry(int rows, int cols) {
  if (cols > rows) fail(ErrorKind::InvalidInput, "isometry needs rows >= cols");
  const ComplexMatrix g = gaussian(rows, cols);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  return qr.householderQ() * ComplexMatrix::Identity(rows, cols);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

LinearMap random_cp(const AlgebraSpec& b, const AlgebraSpec& c, int rank, std::uint64_t seed) {
  if (rank < 1) fail(ErrorKind::InvalidInput, "random_cp needs rank >= 1");
  Rng rng(seed);
  const int db = b.rep_dim();
  const ComplexMatrix v = rng.gaussian(db * rank, c.rep_dim(), 1.0 / std::sqrt(double(db * rank)));
  std::vector<AlgebraElement> values;
  for (const auto& basis_el : canonical_basis(b)) {
    const ComplexMatrix rb = basis_el.rep();
    ComplexMatrix amplified = ComplexMatrix::Zero(db * rank, db * rank);
    for (int x = 0; x < db; ++x)
      for (int y = 0; y < db; ++y) {
        if (rb(x, y) == Complex(0.0)) continue;
        for (int r = 0; r < rank; ++r) amplified(x * rank + r, y * rank + r) = rb(x, y);
      }
    values.push_back(conditional_expectation(v.adjoint() * amplified * v, c));
  }
  return {b, c, std::move(values)};
}

PresentedModule random_module(const AlgebraSpec& b, int k, std::uint64_t seed) {
  if (k < 1) fail(ErrorKind::InvalidInput, "random_module needs k >= 1");
  Rng rng(seed);
  ElementMatrix x(k, k, b);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) x(i, j) = rng.gaussian_element(b, 1.0 / std::sqrt(double(k)));
  const ElementMatrix g = x.adjoint() * x;
  // Exact Hermitian symmetry of the stored Gram.
  ElementMatrix sym = Complex(0.5) * (g + g.adjoint());
  return PresentedModule(b, std::move(sym));
}

namespace {

ModuleMap assemble_t(const PresentedModule& e, const GnsData& g, const ModuleMap& v) {
  ComplexMatrix t(v.codomain().free_dim(), e.free_dim());
  for (int p = 0; p < e.free_dim(); ++p) {
    t.col(p) = v.matrix() *
               tensor_element(e, g.corr, ModuleElement::free_basis(e, p), g.zeta).coordinates();
  }
  return {e, v.codomain(), std::move(t)};
}

ModuleMap padded_free_embedding(const PresentedModule& tensor, int pad) {
  const FreeEmbedding emb = embed_free(tensor);
  const PresentedModule f = free_module(tensor.algebra(), tensor.generators() + pad);
  ComplexMatrix v = ComplexMatrix::Zero(f.free_dim(), tensor.free_dim());
  v.topRows(emb.target.free_dim()) = emb.coordinate_matrix();
  return {tensor, f, std::move(v)};
}

}  // namespace

PhiMapInstance random_phi_map(const PresentedModule& e, const AlgebraSpec& c, int rank, int pad,
                              std::uint64_t seed) {
  if (pad < 0) fail(ErrorKind::InvalidInput, "pad must be >= 0");
  LinearMap phi = random_cp(e.algebra(), c, rank, seed);
  const GnsData g = gns(phi);
  const PresentedModule tensor = interior_tensor(e, g.corr);
  ModuleMap v = padded_free_embedding(tensor, pad);
  ModuleMap t = assemble_t(e, g, v);
  return {std::move(t), std::move(phi), std::move(v)};
}

PhiMapInstance random_operator_phi_map(const PresentedModule& e, int d1, int rank, int pad,
                                       std::uint64_t seed) {
  if (pad < 0) fail(ErrorKind::InvalidInput, "pad must be >= 0");
  const AlgebraSpec c({d1});
  LinearMap phi = random_cp(e.algebra(), c, rank, seed);
  const GnsData g = gns(phi);
  const PresentedModule tensor = interior_tensor(e, g.corr);

  // G = R^* R on the rearranged Gram; u -> J R c-hat realizes E (.) F inside
  // M_{d2 x d1} for a random isometry J.
  const PsdFactor factor = psd_factor(rearranged_block(tensor.gram(), 0));
  const int p = static_cast<int>(factor.r.rows());
  const int d2 = std::max(1, p + pad);
  Rng rng(derive_seed(seed, 1));
  const ComplexMatrix j = rng.isometry(d2, p);
  const ComplexMatrix jr = j * factor.r;

  const PresentedModule f = matrix_module(d2, d1);
  ComplexMatrix v(f.free_dim(), tensor.free_dim());
  for (int gen = 0; gen < tensor.generators(); ++gen) {
    for (int q = 0; q < d1; ++q)
      for (int t = 0; t < d1; ++t) {
        ComplexMatrix x = ComplexMatrix::Zero(d2, d1);
        x.col(t) = jr.col(gen * d1 + q);
        v.col(gen * c.dim() + basis_position(c, {0, q, t})) = from_operator(f, x).coordinates();
      }
  }
  ModuleMap vmap(tensor, f, std::move(v));
  ModuleMap tmap = assemble_t(e, g, vmap);
  return {std::move(tmap), std::move(phi), std::move(vmap)};
}

FactorizationTriple random_factorization_triple(const AlgebraSpec& b, const AlgebraSpec& c, int k,
                                                int rank, int pad, std::uint64_t seed) {
  const LinearMap phi = random_cp(b, c, rank, derive_seed(seed, 0));
  Correspondence corr = gns(phi).corr;
  PresentedModule e = random_module(b, k, derive_seed(seed, 1));
  Rng rng(derive_seed(seed, 2));
  ModuleElement zeta;
  for (int i = 0; i < corr.generators(); ++i) {
    zeta.coeffs.push_back(rng.gaussian_element(c, 1.0 / std::sqrt(double(corr.generators()))));
  }
  const PresentedModule tensor = interior_tensor(e, corr);
  ModuleMap v = padded_free_embedding(tensor, pad);
  return {std::move(e), std::move(corr), std::move(zeta), std::move(v)};
}

LinearMap perturb_to_non_cp(const LinearMap& phi, double eps, std::uint64_t seed) {
  Rng rng(seed);
  const AlgebraSpec& dom = phi.domain();
  const AlgebraSpec& cod = phi.codomain();
  const int i = rng.uniform_int(0, dom.num_blocks() - 1);
  const int s = rng.uniform_int(0, cod.num_blocks() - 1);
  const int n = dom.block_dim(i);
  const int m = cod.block_dim(s);

  // Choi block of domain block i compressed to codomain block s.
  ComplexMatrix sub(n * m, n * m);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      sub.block(j * m, k * m, m, m) = phi.values()[basis_position(dom, {i, j, k})].block(s);
    }
  const HermEig eig = herm_eig(sub);
  double lambda_max = 0.0;
  for (const auto& c : choi(phi)) lambda_max = std::max(lambda_max, max_abs(c));
  const double mu = eig.values(0) + eps * std::max(1.0, lambda_max);
  const ComplexVector w = eig.vectors.col(0);

  std::vector<AlgebraElement> values = phi.values();
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      values[basis_position(dom, {i, j, k})].block(s) -=
          mu * w.segment(j * m, m) * w.segment(k * m, m).adjoint();
    }
  return {dom, cod, std::move(values)};
}

}  // namespace modfactor
