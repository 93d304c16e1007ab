#pragma once

#include <cstdint>
#include <random>

#include "asymptotica/linalg.hpp"

namespace test_support {

using asymptotica::Complex;
using asymptotica::Matrix;
using asymptotica::Vector;

inline Matrix random_matrix(std::uint64_t seed, int dim) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = Complex(normal(rng), normal(rng));
  return m;
}

inline Vector random_vector(std::uint64_t seed, int dim) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = Complex(normal(rng), normal(rng));
  return v;
}

inline Matrix random_hermitian(std::uint64_t seed, int dim) {
  Matrix m = random_matrix(seed, dim);
  return 0.5 * (m + m.adjoint());
}

inline Matrix random_psd(std::uint64_t seed, int dim) {
  Matrix m = random_matrix(seed, dim);
  return m.adjoint() * m;
}

inline Matrix random_unitary(std::uint64_t seed, int dim) {
  Matrix m = random_matrix(seed, dim);
  Eigen::HouseholderQR<Matrix> qr(m);
  Matrix q = qr.householderQ();
  // Fix the phase so the factor is unique given the seed.
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    Complex d = r(j, j);
    if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

// Random matrix rescaled to the requested operator norm.
inline Matrix random_contraction(std::uint64_t seed, int dim, double norm) {
  Matrix m = random_matrix(seed, dim);
  return m * (norm / asymptotica::operator_norm(m));
}

// Mixed contraction with a unitary part: V (U (+) c C) V*, whose power-gram
// limit is exactly V (I (+) O) V*.
struct MixedContraction {
  Matrix t;
  Matrix expected_limit;
};

inline MixedContraction mixed_contraction(std::uint64_t seed, int unitary_dim,
                                          int rest_dim) {
  const int d = unitary_dim + rest_dim;
  Matrix block = Matrix::Zero(d, d);
  block.topLeftCorner(unitary_dim, unitary_dim) =
      random_unitary(seed, unitary_dim);
  block.bottomRightCorner(rest_dim, rest_dim) =
      random_contraction(seed + 1, rest_dim, 0.5);
  const Matrix v = random_unitary(seed + 2, d);
  Matrix proj = Matrix::Zero(d, d);
  proj.topLeftCorner(unitary_dim, unitary_dim) =
      Matrix::Identity(unitary_dim, unitary_dim);
  return {v * block * v.adjoint(), v * proj * v.adjoint()};
}

}  // namespace test_support
