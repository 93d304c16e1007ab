#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "asymptotica/linalg.hpp"
#include "asymptotica/operator_model.hpp"
#include "asymptotica/verdict.hpp"

namespace asymptotica {

// Relative min-eigenvalue ratio separating "positive" from "strictly
// positive": below it the inverse square root is too ill-conditioned for a
// trustworthy witness.
inline constexpr double kStrictPositivityTol = 1e-8;

// A PSD gram matrix viewed as an inner product <x;y>_A = <Ax;y>, together
// with the equivalence constants lower*||x||^2 <= <Ax;x> <= upper*||x||^2.
struct InnerProductWitness {
  PsdMatrix gram;
  Verdict strictly_positive = Verdict::inconclusive;
  double lower = 0.0;
  double upper = 0.0;
};

// Conjugation witness S T S^-1 with S = A^{1/2}.
struct SimilarityWitness {
  Matrix s;
  Matrix s_inverse;
  Matrix conjugated;
  double isometry_residual = 0.0;  // max over probes of | ||Cx|| - ||x|| | / ||x||
  std::optional<double> unitary_residual;  // max(||U*U - I||, ||UU* - I||)
  bool degraded = false;  // unitary_residual in (1e-6, 1e-3]: usable, warned
};

// <Ax; y>, conjugate-symmetric, linear in x.
Complex new_inner_product(const PsdMatrix& a, const SupportedVector& x,
                          const SupportedVector& y);

// Tight constants (min eigenvalue, ||a||) of the norm equivalence
// lower*||x||^2 <= <Ax;x> <= upper*||x||^2. NotStrictlyPositive when the
// smallest eigenvalue falls below kStrictPositivityTol * ||a||.
std::pair<double, double> norm_equivalence_constants(const PsdMatrix& a);

InnerProductWitness inner_product_witness(const PsdMatrix& a);

// ||T* A T - A|| / max(||A||, 1): zero exactly when T preserves <.;.>_A.
double a_isometry_residual(const OperatorModel& t, const PsdMatrix& a);

// For strictly positive A with T* A T = A (residual <= 1e-6): S = A^{1/2}
// conjugates T to an isometry. Verifies ||C* C - I|| <= 1e-6 on the result
// and over 200 seeded probe vectors before returning.
// Errors: NotStrictlyPositive, NotAnIsometryCandidate, WitnessDegraded.
SimilarityWitness isometry_witness(const OperatorModel& t, const PsdMatrix& a);

// Invertible t with t and t^-1 power bounded at horizon n_max: the mean
// limit Q of (T^k)* T^k is strictly positive and S = Q^{1/2} conjugates T to
// a unitary. unitary_residual <= 1e-6 clean, in (1e-6, 1e-3] returned with
// the degraded flag, beyond that WitnessDegraded is thrown.
// Errors: Singular/IllConditioned, NotPowerBounded (names "t"/"t_inverse"),
// NoConvergence, WitnessDegraded.
SimilarityWitness nagy_unitarization(const OperatorModel& t,
                                     std::int64_t n_max = 512,
                                     double tol = 1e-7);

}  // namespace asymptotica
