#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "asymptotica/linalg.hpp"

namespace asymptotica {

// Weight stream of a unilateral weighted shift: an explicit prefix followed by
// an analytic tail. Indices are 1-based, matching the canonical basis e_1, e_2, ...
struct WeightRule {
  struct Constant {
    double value = 1.0;
    bool operator==(const Constant&) const = default;
  };
  struct Periodic {
    std::vector<double> values;
    bool operator==(const Periodic&) const = default;
  };
  // Alternating high / low blocks; block j (0-based) has length
  // round(initial_len * growth_factor^j). The first weight of a high block is
  // value_hi, the first weight of a low block is value_lo, interior weights
  // are 1, so running products stay on two levels while block lengths grow.
  struct Blocks {
    double value_hi = 1.0;
    double value_lo = 1.0;
    double growth_factor = 1.0;  // >= 1
    std::int64_t initial_len = 1;
    bool operator==(const Blocks&) const = default;
  };
  using Tail = std::variant<Constant, Periodic, Blocks>;

  std::vector<double> prefix;
  Tail tail = Constant{1.0};

  void validate() const;  // every weight produced is > 0
  double weight(std::int64_t k) const;
  // First `count` weights, in order.
  std::vector<double> materialize(std::int64_t count) const;
  // Largest / smallest weight value the stream ever attains.
  double sup_weight() const;
  double inf_weight() const;

  bool operator==(const WeightRule&) const = default;
};

// Finitely supported vector over the 1-based canonical basis.
class SupportedVector {
 public:
  SupportedVector() = default;
  SupportedVector(std::vector<std::int64_t> support, std::vector<Complex> amplitudes);

  static SupportedVector basis(std::int64_t k);
  static SupportedVector from_dense(const Vector& v);

  const std::vector<std::int64_t>& support() const { return support_; }
  const std::vector<Complex>& amplitudes() const { return amplitudes_; }
  bool empty() const { return support_.empty(); }
  std::int64_t max_index() const;  // 0 when empty
  double squared_norm() const;
  double norm() const;
  Complex amplitude_at(std::int64_t k) const;
  Vector to_dense(std::int64_t dim) const;  // OutOfRange if support exceeds dim

  friend SupportedVector operator+(const SupportedVector& a, const SupportedVector& b);
  friend SupportedVector operator-(const SupportedVector& a, const SupportedVector& b);
  friend SupportedVector operator*(Complex c, const SupportedVector& v);

  bool operator==(const SupportedVector&) const = default;

 private:
  std::vector<std::int64_t> support_;   // sorted ascending, unique
  std::vector<Complex> amplitudes_;     // parallel to support_, no exact zeros
};

// <x; y>, linear in the first argument, conjugate-linear in the second.
Complex inner(const SupportedVector& x, const SupportedVector& y);

class OperatorModel;

struct DenseOp {
  Matrix matrix;
  bool operator==(const DenseOp& o) const {
    return matrix.rows() == o.matrix.rows() && matrix.cols() == o.matrix.cols() &&
           matrix == o.matrix;
  }
};

struct WeightedShiftOp {
  WeightRule weights;
  bool operator==(const WeightedShiftOp&) const = default;
};

// diag(d_1, ..., d_p, tail, tail, ...) acting entrywise.
struct DiagonalOp {
  std::vector<Complex> prefix;
  Complex tail = 0.0;
  Complex entry(std::int64_t k) const {
    return k <= std::int64_t(prefix.size()) ? prefix[size_t(k - 1)] : tail;
  }
  bool operator==(const DiagonalOp&) const = default;
};

struct DirectSumOp {
  std::vector<OperatorModel> components;
  bool operator==(const DirectSumOp&) const;
};

class OperatorModel {
 public:
  using Variant = std::variant<DenseOp, WeightedShiftOp, DiagonalOp, DirectSumOp>;

  explicit OperatorModel(DenseOp op);
  explicit OperatorModel(WeightedShiftOp op);
  explicit OperatorModel(DiagonalOp op);
  explicit OperatorModel(DirectSumOp op);

  static OperatorModel dense(const Matrix& m) { return OperatorModel(DenseOp{m}); }
  static OperatorModel weighted_shift(WeightRule w) {
    return OperatorModel(WeightedShiftOp{std::move(w)});
  }
  static OperatorModel diagonal(std::vector<Complex> prefix, Complex tail) {
    return OperatorModel(DiagonalOp{std::move(prefix), tail});
  }
  static OperatorModel direct_sum(std::vector<OperatorModel> components) {
    return OperatorModel(DirectSumOp{std::move(components)});
  }

  const Variant& variant() const { return v_; }
  // nullopt means the model acts on an infinite-dimensional space.
  std::optional<std::int64_t> dim() const;
  bool is_finite() const { return dim().has_value(); }
  Matrix to_dense() const;  // UnsupportedVariant unless dim() is finite

  bool operator==(const OperatorModel&) const = default;

 private:
  Variant v_;
};

SupportedVector apply(const OperatorModel& t, const SupportedVector& x);
SupportedVector adjoint_apply(const OperatorModel& t, const SupportedVector& x);

// ||T^n x||^2 for n = 0..n_max. Structured variants accumulate weight products
// in scaled (significand, exponent) form, so entries are correctly rounded and
// never overflow during accumulation.
std::vector<double> orbit_norms(const OperatorModel& t, const SupportedVector& x,
                                std::int64_t n_max);

// ||T||, exact for structured variants.
double model_norm(const OperatorModel& t);

// ||T^n||, exact for structured variants (sliding products over one structural
// cycle), numeric for dense.
double power_norm_estimate(const OperatorModel& t, std::int64_t n);

// inf {||T^n x|| : ||x|| = 1} lower-bound companion of power_norm_estimate:
// sigma_min of the n-th power for dense, infimum over basis orbits otherwise.
double power_floor_estimate(const OperatorModel& t, std::int64_t n);

struct SpectralRadiusEstimate {
  double value = 0.0;
  double spread = 0.0;  // stabilization of the last extrapolants
};

// Gelfand limit along doubling powers (dense), exact for diagonal models.
// UnsupportedVariant for shifts and direct sums containing them.
SpectralRadiusEstimate spectral_radius(const OperatorModel& t);

struct QuasinormalCheck {
  bool verdict = false;
  double residual = 0.0;  // ||T(T*T) - (T*T)T|| against tol * ||T||^3
};

QuasinormalCheck is_quasinormal(const OperatorModel& t, double tol = 1e-10);

struct NormaloidCheck {
  bool verdict = false;
  double min_power_ratio = 0.0;  // min over sampled n of ||T^n|| / ||T||^n
};

NormaloidCheck is_normaloid(const OperatorModel& t, double tol = 1e-8,
                            std::int64_t n_max = 1024);

// Probe convention: the first dim basis vectors for finite models; the first
// 16 basis vectors plus 8 seeded random supported vectors otherwise.
std::vector<SupportedVector> default_probes(const OperatorModel& t,
                                            std::uint64_t seed = 0);

}  // namespace asymptotica
