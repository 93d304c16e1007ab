#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "asymptotica/linalg.hpp"
#include "asymptotica/operator_model.hpp"
#include "asymptotica/theorem_checks.hpp"
#include "asymptotica/verdict.hpp"

namespace asymptotica {

// Real bounded sequence: explicit samples plus a declared tail. Analytic
// tails (periodic or convergent) extend the sequence exactly beyond the
// sample; an unspecified tail confines consumers to the sampled range.
// Beyond the sample a convergent tail evaluates at its limit.
class BoundedSequence {
 public:
  struct Unspecified {
    bool operator==(const Unspecified&) const = default;
  };
  struct PeriodicTail {
    std::vector<double> values;
    bool operator==(const PeriodicTail&) const = default;
  };
  struct ConvergentTail {
    double limit = 0.0;
    bool operator==(const ConvergentTail&) const = default;
  };
  using Tail = std::variant<Unspecified, PeriodicTail, ConvergentTail>;

  static BoundedSequence from_samples(std::vector<double> sample);
  static BoundedSequence with_periodic_tail(std::vector<double> sample,
                                            std::vector<double> period);
  static BoundedSequence with_convergent_tail(std::vector<double> sample,
                                              double limit);

  const std::vector<double>& sample() const { return sample_; }
  const Tail& tail() const { return tail_; }
  bool analytic_tail() const;
  std::int64_t sample_size() const {
    return static_cast<std::int64_t>(sample_.size());
  }
  // Value at 0-based index k; OutOfRange past an unspecified sample.
  double value_at(std::int64_t k) const;
  double min_value() const;  // over sample and tail
  double max_value() const;
  double bound() const;  // sup |value|
  BoundedSequence shifted() const;  // drops the first entry

  bool operator==(const BoundedSequence&) const = default;

 private:
  BoundedSequence(std::vector<double> sample, Tail tail);
  std::vector<double> sample_;
  Tail tail_ = Unspecified{};
};

// Pointwise scaling and sum. Sums merge analytic tails exactly (periodic
// pairs through the lcm of their periods); any other combination degrades
// to an unspecified tail on the shared range.
BoundedSequence operator*(double c, const BoundedSequence& xs);
BoundedSequence operator+(const BoundedSequence& a, const BoundedSequence& b);

// (1/n) sum_{k<n} xs(j+k), compensated summation.
double shifted_cesaro(const BoundedSequence& xs, std::int64_t n,
                      std::int64_t j);

struct EnvelopeTrendRow {
  std::int64_t n = 0;
  double inf_j = 0.0;
  double sup_j = 0.0;
};

// Extremal window-mean envelope: every shift-invariant positive normalized
// functional assigns the sequence a value inside [phi_minus, phi_plus].
struct EnvelopeEstimate {
  double phi_minus = 0.0;
  double phi_plus = 0.0;
  std::int64_t n_used = 0;
  std::int64_t j_range = 0;
  Verdict uniform = Verdict::inconclusive;
  std::vector<EnvelopeTrendRow> trend;
  double gap() const { return phi_plus - phi_minus; }
};

// Dyadic window lengths 64, 128, ... capped at half the sample and at 4096.
std::vector<std::int64_t> default_n_grid(std::int64_t sample_size);

// Sweeps inf_j / sup_j of the shifted window means over the grid; sequences
// with an analytic tail bypass estimation with the exact functional value.
EnvelopeEstimate envelope(const BoundedSequence& xs,
                          const std::vector<std::int64_t>& n_grid,
                          std::int64_t j_max, double tol = 1e-9);
EnvelopeEstimate envelope(const BoundedSequence& xs, double tol = 1e-9);

struct AgreementReport {
  Verdict agree = Verdict::inconclusive;
  double value = 0.0;  // midpoint of the final envelope
  double gap = 0.0;
  EnvelopeEstimate estimate;
};

// Decides whether every shift-invariant positive normalized functional gives
// the same value: yes when the sup deviation from the midpoint collapses,
// no when it stagnates, inconclusive when the trend turns non-monotone.
AgreementReport all_banach_limits_agree(const BoundedSequence& xs,
                                        double tol = 1e-9);

// Orbit ||T^n x||^2 as a bounded sequence; structured models declare exact
// analytic tails where the weight or diagonal stream forces one. Throws
// NotPowerBoundedEvidence when the orbit grows monotonically over the final
// decade of the horizon (or the structure implies unbounded growth).
BoundedSequence orbit_sequence(const OperatorModel& t, const SupportedVector& x,
                               std::int64_t horizon);

EnvelopeEstimate vector_envelope(const OperatorModel& t,
                                 const SupportedVector& x,
                                 std::int64_t horizon, double tol = 1e-9);

struct PhiFormEntry {
  SupportedVector x;
  double lower = 0.0;
  double upper = 0.0;
  Verdict uniform = Verdict::inconclusive;
};

struct PhiFormBounds {
  std::vector<PhiFormEntry> entries;
  std::optional<HermitianMatrix> reconstructed;
  Verdict certified_equal_to_q = Verdict::inconclusive;
};

// Per-probe bounds on the limit form value. On finite models the canonical
// basis is polarized (all pairs x+y, x-y, x+iy, x-iy); when every combo's
// envelope is uniform the full matrix is reconstructed and certified equal
// to the mean limit.
PhiFormBounds phi_asymptotic_form(const OperatorModel& t,
                                  const std::vector<SupportedVector>& probes,
                                  std::int64_t horizon, double tol = 1e-6);

// Certifies sup_j |(1/n) sum_{k<n} ||T^{k+j}x||^2 - q_x| -> 0 on the probe
// set: the hypothesis under which the mean limit is the limit for every
// shift-invariant functional. Quasinormal contractions shortcut to yes.
Verdict q_equals_aphi_certificate(const OperatorModel& t,
                                  const std::vector<double>& q_form,
                                  const std::vector<SupportedVector>& probes,
                                  std::int64_t horizon, double tol = 1e-6);

// Fuzzes the envelope functionals against the checkable functional axioms:
// normalization of constants, limits of convergent sequences, shift
// invariance, order preservation, positivity, the liminf/limsup sandwich,
// positive homogeneity, and sub/superadditivity in place of linearity
// (envelopes are extremal, not linear).
CheckSuite banach_axiom_suite(std::uint64_t seed = 0, int trials = 50,
                              double tol = 1e-9);

}  // namespace asymptotica
