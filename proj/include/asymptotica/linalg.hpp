#pragma once

#include <Eigen/Dense>
#include <complex>

#include "asymptotica/errors.hpp"

namespace asymptotica {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline Matrix adjoint(const Matrix& m) { return m.adjoint(); }

// Hermitian by construction: stores (raw + raw*)/2 so every consumer sees an
// exactly self-adjoint matrix regardless of roundoff in the input.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(const Matrix& raw);
  const Matrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

 private:
  Matrix m_;
};

struct EigenDecomposition {
  RealVector eigenvalues;  // ascending
  Matrix eigenvectors;     // unitary, column k pairs with eigenvalues[k]
};

EigenDecomposition hermitian_eig(const HermitianMatrix& h);

// Positive semidefinite with eigenvalues in [-psd_tol, 0] clamped to 0, where
// psd_tol = 1e-10 * operator norm. Construction rejects anything below that.
class PsdMatrix {
 public:
  static PsdMatrix from(const HermitianMatrix& h);
  static PsdMatrix from(const Matrix& raw) { return from(HermitianMatrix(raw)); }

  const Matrix& matrix() const { return base_.matrix(); }
  const HermitianMatrix& hermitian() const { return base_; }
  Eigen::Index dim() const { return base_.dim(); }
  // Smallest eigenvalue seen before clamping (diagnostic).
  double min_eigenvalue() const { return min_eigenvalue_; }

 private:
  PsdMatrix(HermitianMatrix base, double min_eig)
      : base_(std::move(base)), min_eigenvalue_(min_eig) {}
  HermitianMatrix base_;
  double min_eigenvalue_;
};

PsdMatrix psd_sqrt(const HermitianMatrix& a);
PsdMatrix psd_sqrt(const PsdMatrix& a);

// Largest singular value, computed as sqrt of the top eigenvalue of m* m.
double operator_norm(const Matrix& m);

double min_singular_value(const Matrix& m);

// Norm of a Hermitian matrix is its extreme eigenvalue magnitude.
double hermitian_norm(const HermitianMatrix& h);

Matrix invert(const Matrix& m, double cond_limit = 1e12);

struct PolarDecomposition {
  Matrix unitary;
  PsdMatrix modulus;  // (w* w)^(1/2)
};

PolarDecomposition polar_decompose(const Matrix& w);

}  // namespace asymptotica
