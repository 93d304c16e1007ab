#include "asymptotica/linalg.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <string>

namespace asymptotica {

namespace {

void require_square_finite(const Matrix& m, const char* who) {
  if (m.rows() != m.cols()) {
    throw PreconditionError(std::string(who) + ": matrix must be square, got " +
                            std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  if (!m.allFinite()) {
    throw PreconditionError(std::string(who) + ": matrix has non-finite entries");
  }
}

Eigen::JacobiSVD<Matrix> full_svd(const Matrix& m) {
  return Eigen::JacobiSVD<Matrix>(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
}

}  // namespace

HermitianMatrix::HermitianMatrix(const Matrix& raw) {
  require_square_finite(raw, "HermitianMatrix");
  m_ = 0.5 * (raw + raw.adjoint());
}

EigenDecomposition hermitian_eig(const HermitianMatrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h.matrix());
  if (solver.info() != Eigen::Success) {
    throw NoConvergenceError("hermitian_eig: eigensolver did not converge at dim " +
                             std::to_string(h.dim()));
  }
  return EigenDecomposition{solver.eigenvalues(), solver.eigenvectors()};
}

double hermitian_norm(const HermitianMatrix& h) {
  if (h.dim() == 0) return 0.0;
  EigenDecomposition ed = hermitian_eig(h);
  return std::max(std::abs(ed.eigenvalues(0)),
                  std::abs(ed.eigenvalues(ed.eigenvalues.size() - 1)));
}

PsdMatrix PsdMatrix::from(const HermitianMatrix& h) {
  EigenDecomposition ed = hermitian_eig(h);
  const double norm = h.dim() == 0
                          ? 0.0
                          : std::max(std::abs(ed.eigenvalues(0)),
                                     std::abs(ed.eigenvalues(ed.eigenvalues.size() - 1)));
  const double psd_tol = 1e-10 * norm;
  const double min_eig = h.dim() == 0 ? 0.0 : ed.eigenvalues(0);
  if (min_eig < -psd_tol) {
    throw NotPsdError("PsdMatrix: smallest eigenvalue " + std::to_string(min_eig) +
                          " is below -" + std::to_string(psd_tol),
                      min_eig);
  }
  if (min_eig >= 0.0) {
    return PsdMatrix(h, min_eig);
  }
  RealVector clamped = ed.eigenvalues.cwiseMax(0.0);
  Matrix rebuilt = ed.eigenvectors * clamped.asDiagonal() * ed.eigenvectors.adjoint();
  return PsdMatrix(HermitianMatrix(rebuilt), min_eig);
}

PsdMatrix psd_sqrt(const HermitianMatrix& a) { return psd_sqrt(PsdMatrix::from(a)); }

PsdMatrix psd_sqrt(const PsdMatrix& a) {
  EigenDecomposition ed = hermitian_eig(a.hermitian());
  RealVector roots = ed.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  Matrix s = ed.eigenvectors * roots.asDiagonal() * ed.eigenvectors.adjoint();
  return PsdMatrix::from(HermitianMatrix(s));
}

double operator_norm(const Matrix& m) {
  require_square_finite(m, "operator_norm");
  if (m.rows() == 0) return 0.0;
  HermitianMatrix gram(m.adjoint() * m);
  EigenDecomposition ed = hermitian_eig(gram);
  return std::sqrt(std::max(0.0, ed.eigenvalues(ed.eigenvalues.size() - 1)));
}

double min_singular_value(const Matrix& m) {
  require_square_finite(m, "min_singular_value");
  if (m.rows() == 0) return 0.0;
  HermitianMatrix gram(m.adjoint() * m);
  EigenDecomposition ed = hermitian_eig(gram);
  return std::sqrt(std::max(0.0, ed.eigenvalues(0)));
}

Matrix invert(const Matrix& m, double cond_limit) {
  require_square_finite(m, "invert");
  auto svd = full_svd(m);
  const auto& sigma = svd.singularValues();
  const double sigma_max = sigma.size() ? sigma(0) : 0.0;
  const double sigma_min = sigma.size() ? sigma(sigma.size() - 1) : 0.0;
  if (sigma_min <= 1e-12 * sigma_max || sigma_max == 0.0) {
    throw SingularError("invert: singular to working precision (sigma_min " +
                        std::to_string(sigma_min) + ", sigma_max " +
                        std::to_string(sigma_max) + ")");
  }
  const double cond = sigma_max / sigma_min;
  if (cond > cond_limit) {
    throw IllConditionedError("invert: condition number " + std::to_string(cond) +
                              " exceeds limit " + std::to_string(cond_limit));
  }
  return svd.matrixV() * sigma.cwiseInverse().asDiagonal() *
         svd.matrixU().adjoint();
}

PolarDecomposition polar_decompose(const Matrix& w) {
  require_square_finite(w, "polar_decompose");
  auto svd = full_svd(w);
  const auto& sigma = svd.singularValues();
  const double sigma_max = sigma.size() ? sigma(0) : 0.0;
  const double sigma_min = sigma.size() ? sigma(sigma.size() - 1) : 0.0;
  if (sigma_min <= 1e-12 * sigma_max || sigma_max == 0.0) {
    throw SingularError("polar_decompose: matrix is singular to working precision");
  }
  Matrix unitary = svd.matrixU() * svd.matrixV().adjoint();
  Matrix modulus = svd.matrixV() * sigma.asDiagonal() * svd.matrixV().adjoint();
  return PolarDecomposition{std::move(unitary), PsdMatrix::from(modulus)};
}

}  // namespace asymptotica
