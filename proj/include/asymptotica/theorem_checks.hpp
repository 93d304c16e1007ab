#pragma once

#include <string>
#include <vector>

#include "asymptotica/linalg.hpp"

namespace asymptotica {

struct CheckItem {
  std::string name;
  bool pass = false;
  double residual = 0.0;   // measured size of the violation witness
  double tolerance = 0.0;  // threshold the residual was held to
};

struct CheckSuite {
  std::string subject;
  std::vector<CheckItem> items;
  bool all_pass() const;
  const CheckItem* find(const std::string& name) const;  // nullptr if absent
};

// Structural properties of the strong limit of (T^n)* T^n for a contraction:
// order bounds, the fixed-point equation, norm rigidity when nonzero, the
// annihilation and commutation equivalences, defect orbit decay, the kernel
// geometry, and the uniform orbit floor of a strictly positive limit.
CheckSuite contraction_limit_checks(const Matrix& t, const PsdMatrix& limit,
                                    double tol = 1e-8);

// Structural properties of the limit of the means (1/n) sum_{k<n} (T^k)* T^k
// of a power bounded operator; beta_hat is the measured sup of the power
// norms (must dominate ||T||).
CheckSuite cesaro_limit_checks(const Matrix& t, const PsdMatrix& limit,
                               double beta_hat, double tol = 1e-8);

// Structural properties shared by every limit reconstructed from a
// shift-invariant positive orbit functional on a power bounded operator.
CheckSuite phi_limit_checks(const Matrix& t, const PsdMatrix& limit,
                            double beta_hat, double tol = 1e-8);

}  // namespace asymptotica
