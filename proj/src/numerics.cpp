#include "modfactor/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "modfactor/error.hpp"

namespace modfactor {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::NotCP: return "NotCP";
    case ErrorKind::NotPhiMap: return "NotPhiMap";
    case ErrorKind::NotIsometry: return "NotIsometry";
    case ErrorKind::NotFull: return "NotFull";
    case ErrorKind::Inconsistent: return "Inconsistent";
    case ErrorKind::WellDefinednessFailure: return "WellDefinednessFailure";
    case ErrorKind::WrongShape: return "WrongShape";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InternalError: return "InternalError";
  }
  return "Unknown";
}

void NumericConfig::validate() const {
  for (double t : {psd_tol, rank_tol, verify_tol}) {
    if (!std::isfinite(t) || t <= 0.0) {
      fail(ErrorKind::InvalidInput, "tolerances must be finite and positive");
    }
  }
}

double max_abs(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

bool is_finite(const ComplexMatrix& m) {
  return m.allFinite();
}

namespace {

ComplexMatrix symmetrized(const ComplexMatrix& m, const NumericConfig& cfg) {
  if (m.rows() != m.cols()) {
    fail(ErrorKind::InvalidInput, "matrix is not square (" +
                                      std::to_string(m.rows()) + "x" +
                                      std::to_string(m.cols()) + ")");
  }
  if (!is_finite(m)) fail(ErrorKind::InvalidInput, "matrix has non-finite entries");
  const double skew = max_abs(m - m.adjoint());
  if (skew > cfg.verify_tol * (1.0 + max_abs(m))) {
    fail(ErrorKind::InvalidInput,
         "matrix is not Hermitian (defect " + std::to_string(skew) + ")");
  }
  return (m + m.adjoint()) * 0.5;
}

double anchor(const RealVector& ascending) {
  return ascending.size() == 0 ? 1.0 : std::max(1.0, ascending(ascending.size() - 1));
}

}  // namespace

HermEig herm_eig(const ComplexMatrix& m, const NumericConfig& cfg) {
  const ComplexMatrix h = symmetrized(m, cfg);
  if (h.rows() == 0) return {RealVector(0), ComplexMatrix(0, 0)};
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success) {
    fail(ErrorKind::InternalError, "Hermitian eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

bool psd_check_spectrum(const RealVector& ascending, const NumericConfig& cfg) {
  if (ascending.size() == 0) return true;
  return ascending(0) >= -cfg.psd_tol * anchor(ascending);
}

bool psd_check(const ComplexMatrix& m, const NumericConfig& cfg) {
  return psd_check_spectrum(herm_eig(m, cfg).values, cfg);
}

ComplexMatrix psd_sqrt(const ComplexMatrix& m, const NumericConfig& cfg) {
  const HermEig eig = herm_eig(m, cfg);
  if (!psd_check_spectrum(eig.values, cfg)) {
    fail(ErrorKind::NotPositive, "matrix is not positive semidefinite (lambda_min = " +
                                     std::to_string(eig.values(0)) + ")");
  }
  const RealVector roots = eig.values.cwiseMax(0.0).cwiseSqrt();
  return eig.vectors * roots.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
}

RankKernel rank_kernel(const ComplexMatrix& g, const NumericConfig& cfg) {
  const HermEig eig = herm_eig(g, cfg);
  const Eigen::Index n = eig.values.size();
  const double cut = cfg.rank_tol * anchor(eig.values);
  Eigen::Index null = 0;
  while (null < n && eig.values(null) <= cut) ++null;
  return {static_cast<int>(n - null), eig.vectors.leftCols(null)};
}

PsdFactor psd_factor(const ComplexMatrix& g, const NumericConfig& cfg) {
  const HermEig eig = herm_eig(g, cfg);
  if (!psd_check_spectrum(eig.values, cfg)) {
    fail(ErrorKind::NotPositive, "matrix is not positive semidefinite");
  }
  const Eigen::Index n = eig.values.size();
  const double cut = cfg.rank_tol * anchor(eig.values);
  Eigen::Index null = 0;
  while (null < n && eig.values(null) <= cut) ++null;
  const Eigen::Index rank = n - null;
  const ComplexMatrix u = eig.vectors.rightCols(rank);
  const RealVector lambda = eig.values.tail(rank);
  PsdFactor f;
  f.r = lambda.cwiseSqrt().cast<Complex>().asDiagonal() * u.adjoint();
  f.r_pinv = u * lambda.cwiseSqrt().cwiseInverse().cast<Complex>().asDiagonal();
  return f;
}

LstsqResult lstsq(const ComplexMatrix& a, const ComplexMatrix& b,
                  const NumericConfig& cfg) {
  if (a.rows() != b.rows()) {
    fail(ErrorKind::InvalidInput, "lstsq: A has " + std::to_string(a.rows()) +
                                      " rows but B has " + std::to_string(b.rows()));
  }
  if (a.cols() == 0) {
    return {ComplexMatrix::Zero(0, b.cols()), b.norm()};
  }
  Eigen::BDCSVD<ComplexMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(cfg.rank_tol);
  LstsqResult out;
  out.solution = svd.solve(b);
  out.residual = (a * out.solution - b).norm();
  return out;
}

}  // namespace modfactor
