#pragma once

#include <complex>

#include <Eigen/Dense>

namespace modfactor {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Tolerances shared by every check in the library.
///
/// psd_tol and rank_tol are relative to max(1, largest eigenvalue);
/// verify_tol is an absolute bound on identity defects.
struct NumericConfig {
  double psd_tol = 1e-9;
  double rank_tol = 1e-9;
  double verify_tol = 1e-8;

  /// Throws InvalidInput unless every tolerance is finite and positive.
  void validate() const;
};

struct HermEig {
  RealVector values;     // ascending
  ComplexMatrix vectors; // columns are eigenvectors, unitary
};

struct RankKernel {
  int rank = 0;
  ComplexMatrix kernel;  // orthonormal columns spanning the numerical kernel
};

struct LstsqResult {
  ComplexMatrix solution;
  double residual = 0.0;  // Frobenius norm of A*X - B
};

/// Largest entry modulus; 0 for empty matrices.
double max_abs(const ComplexMatrix& m);

bool is_finite(const ComplexMatrix& m);

/// Eigendecomposition of a Hermitian matrix. Inputs within
/// verify_tol * (1 + |M|_max) of Hermitian are symmetrized first.
HermEig herm_eig(const ComplexMatrix& m, const NumericConfig& cfg = {});

/// lambda_min >= -psd_tol * max(1, lambda_max).
bool psd_check(const ComplexMatrix& m, const NumericConfig& cfg = {});

/// Same test on an already computed spectrum.
bool psd_check_spectrum(const RealVector& ascending, const NumericConfig& cfg);

/// Hermitian PSD square root; slightly negative eigenvalues are clamped.
ComplexMatrix psd_sqrt(const ComplexMatrix& m, const NumericConfig& cfg = {});

/// Rank counts eigenvalues above rank_tol * max(1, lambda_max).
RankKernel rank_kernel(const ComplexMatrix& g, const NumericConfig& cfg = {});

/// Factor a PSD matrix as G = R^* R with R of full row rank. Also returns a
/// right inverse R^+ (R R^+ = I) acting on the range of G.
struct PsdFactor {
  ComplexMatrix r;
  ComplexMatrix r_pinv;
};
PsdFactor psd_factor(const ComplexMatrix& g, const NumericConfig& cfg = {});

/// Minimum-norm least-squares solution of A X = B.
LstsqResult lstsq(const ComplexMatrix& a, const ComplexMatrix& b,
                  const NumericConfig& cfg = {});

}  // namespace modfactor
