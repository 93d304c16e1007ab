#include "asymptotica/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "asymptotica/errors.hpp"
#include "asymptotica/power_asymptotics.hpp"

namespace asymptotica {

namespace {

constexpr int kProbeCount = 200;
constexpr std::uint64_t kProbeSeed = 0x5157ae2fd152b6c1ull;
constexpr double kWitnessTol = 1e-6;
constexpr double kDegradedCeiling = 1e-3;
constexpr double kSlowMeanCeiling = 1e-5;

Matrix dense_of(const OperatorModel& t) { return t.to_dense(); }

void require_dims(const Matrix& m, const PsdMatrix& a) {
  if (m.rows() != a.matrix().rows()) {
    throw PreconditionError("operator and gram dimensions differ");
  }
}

double max_probe_residual(const Matrix& c) {
  std::mt19937_64 rng(kProbeSeed);
  std::normal_distribution<double> gauss;
  double worst = 0.0;
  for (int p = 0; p < kProbeCount; ++p) {
    Vector x(c.rows());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      x(i) = Complex(gauss(rng), gauss(rng));
    }
    const double nx = x.norm();
    worst = std::max(worst, std::abs((c * x).norm() - nx) / nx);
  }
  return worst;
}

double strict_floor(const PsdMatrix& a) {
  return kStrictPositivityTol * operator_norm(a.matrix());
}

}  // namespace

Complex new_inner_product(const PsdMatrix& a, const SupportedVector& x,
                          const SupportedVector& y) {
  const std::int64_t dim = a.matrix().rows();
  if (x.max_index() > dim || y.max_index() > dim) {
    throw PreconditionError("vector support exceeds the gram dimension");
  }
  const Vector xd = x.to_dense(dim);
  const Vector yd = y.to_dense(dim);
  return (yd.adjoint() * (a.matrix() * xd))(0);
}

std::pair<double, double> norm_equivalence_constants(const PsdMatrix& a) {
  const double upper = operator_norm(a.matrix());
  const double lower = a.min_eigenvalue();
  if (lower <= kStrictPositivityTol * upper) {
    throw NotStrictlyPositiveError(
        "gram is not strictly positive: the norms are not equivalent", lower);
  }
  return {lower, upper};
}

InnerProductWitness inner_product_witness(const PsdMatrix& a) {
  InnerProductWitness w{a, Verdict::inconclusive, 0.0, 0.0};
  w.upper = operator_norm(a.matrix());
  w.lower = std::max(a.min_eigenvalue(), 0.0);
  w.strictly_positive =
      verdict_of(a.min_eigenvalue() > kStrictPositivityTol * w.upper);
  return w;
}

double a_isometry_residual(const OperatorModel& t, const PsdMatrix& a) {
  const Matrix m = dense_of(t);
  require_dims(m, a);
  const Matrix conjugated = m.adjoint() * a.matrix() * m;
  return hermitian_norm(HermitianMatrix(conjugated - a.matrix())) /
         std::max(operator_norm(a.matrix()), 1.0);
}

SimilarityWitness isometry_witness(const OperatorModel& t, const PsdMatrix& a) {
  const Matrix m = dense_of(t);
  require_dims(m, a);
  if (a.min_eigenvalue() <= strict_floor(a)) {
    throw NotStrictlyPositiveError(
        "gram kernel blocks the isometry witness", a.min_eigenvalue());
  }
  const double fixed_point = a_isometry_residual(t, a);
  if (fixed_point > kWitnessTol) {
    throw NotAnIsometryCandidateError(
        "the gram is not a fixed point of conjugation by the operator");
  }
  SimilarityWitness w;
  w.s = psd_sqrt(a).matrix();
  w.s_inverse = invert(w.s);
  w.conjugated = w.s * m * w.s_inverse;
  const double closed =
      operator_norm(w.conjugated.adjoint() * w.conjugated -
                    Matrix::Identity(m.rows(), m.cols()));
  if (closed > kWitnessTol) {
    throw WitnessDegradedError(
        "conjugated operator strays from an isometry", closed);
  }
  w.isometry_residual = std::max(max_probe_residual(w.conjugated), closed);
  return w;
}

SimilarityWitness nagy_unitarization(const OperatorModel& t,
                                     std::int64_t n_max, double tol) {
  const Matrix m = dense_of(t);
  const Matrix m_inverse = invert(m);
  if (classify(t, n_max, tol).power_bounded != Verdict::yes) {
    throw NotPowerBoundedError("operator powers are not uniformly bounded",
                               "t");
  }
  if (classify(OperatorModel::dense(m_inverse), n_max, tol).power_bounded !=
      Verdict::yes) {
    throw NotPowerBoundedError(
        "inverse powers are not uniformly bounded", "t_inverse");
  }
  const AsymptoticReport mean = cesaro_asymptotic_limit(m, tol);
  if (mean.status == LimitStatus::divergent) {
    throw DivergentError("mean gram sequence diverged");
  }
  // A roundoff-limited mean whose best delta is still tight is usable; the
  // strictness and unitary-residual gates below arbitrate its quality.
  if (!mean.converged() && !(mean.limit && mean.delta <= kSlowMeanCeiling)) {
    throw NoConvergenceError("mean gram sequence did not stabilize");
  }
  const PsdMatrix q = *mean.limit;
  if (q.min_eigenvalue() <= strict_floor(q)) {
    throw NotStrictlyPositiveError(
        "mean limit is not strictly positive", q.min_eigenvalue());
  }
  SimilarityWitness w;
  w.s = psd_sqrt(q).matrix();
  w.s_inverse = invert(w.s);
  w.conjugated = w.s * m * w.s_inverse;
  const Matrix identity = Matrix::Identity(m.rows(), m.cols());
  const double residual = std::max(
      operator_norm(w.conjugated.adjoint() * w.conjugated - identity),
      operator_norm(w.conjugated * w.conjugated.adjoint() - identity));
  if (residual > kDegradedCeiling) {
    throw WitnessDegradedError(
        "conjugated operator strays too far from a unitary", residual);
  }
  w.unitary_residual = residual;
  w.degraded = residual > kWitnessTol;
  w.isometry_residual = max_probe_residual(w.conjugated);
  return w;
}

}  // namespace asymptotica
