#pragma once

#include <optional>
#include <vector>

#include "asymptotica/linalg.hpp"
#include "asymptotica/operator_model.hpp"
#include "asymptotica/verdict.hpp"

namespace asymptotica {

// M_n = (T^n)* T^n through the stable recurrence M_{n+1} = T* M_n T, with
// Hermitian re-symmetrization every step.
class PowerGramSequence {
 public:
  explicit PowerGramSequence(const Matrix& t);
  std::int64_t index() const { return n_; }
  const Matrix& current() const { return m_; }  // exactly self-adjoint
  void advance();  // OverflowError once ||M_n|| exceeds 1e12

 private:
  Matrix t_;
  Matrix m_;
  std::int64_t n_ = 0;
};

enum class LimitStatus { converged, slow_convergence, divergent };

std::string to_string(LimitStatus s);

struct TraceRow {
  std::int64_t n;
  double value;     // norm of the current iterate
  double residual;  // stop-criterion delta at this row
};

struct AsymptoticReport {
  LimitStatus status = LimitStatus::slow_convergence;
  std::optional<PsdMatrix> limit;  // absent when divergent
  std::int64_t steps = 0;          // final index n reached
  double delta = 0.0;              // last stop delta
  double fixed_point_residual = 0.0;  // ||T* L T - L|| at the returned limit
  std::vector<TraceRow> trace;

  bool converged() const { return status == LimitStatus::converged; }
};

// Strong limit of (T^n)* T^n for a contraction (NotAContraction otherwise).
// Stops when ||M_{n+1} - M_n|| <= tol.
AsymptoticReport contraction_asymptotic_limit(const Matrix& t, double tol = 1e-10,
                                              std::int64_t n_max = 4096);

// Weak limit of Q_n = (1/n) sum_{k<n} (T^k)* T^k. Partial sums are evaluated
// at doubled indices through S_{2n} = S_n + (T^n)* S_n T^n, so the Cauchy stop
// (delta between doubled indices below tol, twice in a row) can reach 1/n-type
// limits cheaply. Divergent once ||Q_n|| passes 1e12; slow_convergence when
// the stop is not met by n_max.
AsymptoticReport cesaro_asymptotic_limit(const Matrix& t, double tol = 1e-8,
                                         std::int64_t n_max = std::int64_t(1) << 36);

// Sequential running mean with the exact update
// Q_{n+1} = Q_n + (M_n - Q_n)/(n+1), compensated entrywise.
class CesaroState {
 public:
  explicit CesaroState(const Matrix& t);
  std::int64_t index() const { return n_; }  // Q_n averages M_0 .. M_{n-1}
  const Matrix& mean() const { return q_; }
  const Matrix& gram() const { return m_; }  // M_n, the next term folded in
  void advance();

 private:
  Matrix t_;
  Matrix q_;
  Matrix m_;
  Matrix comp_;  // Kahan-style compensation for the mean updates
  std::int64_t n_ = 1;
};

// (1/n) sum_{k<n} ||T^(k+j) x||^2 with compensated accumulation.
double cesaro_quadratic_form(const OperatorModel& t, const SupportedVector& x,
                             std::int64_t n, std::int64_t j = 0);

// ||T* a T - a||
double intertwining_residual(const Matrix& t, const HermitianMatrix& a);

struct KernelCheck {
  Matrix kernel_basis;  // eigenvectors of the limit with eigenvalue <= tol * ||limit||
  bool orbits_vanish = true;        // kernel orbits decay under T
  bool complement_persists = true;  // the other eigenvector orbits do not die
  double worst_kernel_orbit = 0.0;  // largest ||T^N v||^2 over kernel vectors
  double worst_complement_ratio = 1.0;  // smallest achieved orbit mass / eigenvalue
};

// Cross-checks that the kernel of an asymptotic limit matches the vectors
// whose orbits vanish.
KernelCheck kernel_of_limit(const PsdMatrix& limit, const Matrix& t, double tol = 1e-8);

struct ClassificationReport {
  double norm = 0.0;
  double beta_hat = 0.0;   // max_{1<=n<=horizon} ||T^n|| over the sample grid
  double alpha_hat = 0.0;  // min_{1<=n<=horizon} of the power floor
  Verdict power_bounded = Verdict::inconclusive;
  Verdict power_bounded_below = Verdict::inconclusive;
  Verdict isometry = Verdict::inconclusive;
  Verdict c0_dot = Verdict::inconclusive;  // every probe orbit dies
  Verdict c1_dot = Verdict::inconclusive;  // no probe orbit dies
  Verdict similar_to_isometry = Verdict::inconclusive;  // power bounded above and below
  bool normaloid = false;
  bool quasinormal = false;
  std::int64_t horizon = 0;
};

ClassificationReport classify(const OperatorModel& t, std::int64_t n_max = 512,
                              double tol = 1e-8, std::uint64_t seed = 0);

struct CesaroPowerBounds {
  double alpha_c = 0.0;  // min over n <= n_max of the smallest eigenvalue of Q_n^R
  double beta_c = 0.0;   // max over n <= n_max of ||Q_n^R||
  std::int64_t n_max = 0;
};

// Q_n^R = (1/n) sum_{k<n} (T^k)* R* R T^k
CesaroPowerBounds cesaro_power_bounds(const Matrix& t, const Matrix& r,
                                      std::int64_t n_max = 256);

}  // namespace asymptotica
