#include "asymptotica/banach_envelope.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <utility>

#include "kahan.hpp"

namespace asymptotica {

namespace {

constexpr std::int64_t kMinEstimationSamples = 64;
constexpr std::int64_t kGridFloor = 64;
constexpr std::int64_t kGridCap = 4096;
constexpr std::int64_t kLcmCap = 4096;

void require_finite(const std::vector<double>& values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw PreconditionError(std::string(what) + " must be finite");
    }
  }
}

// Running compensated prefix sums; pairwise differences of (sum, comp) give
// window sums with the accumulation error compensated.
struct PrefixSums {
  std::vector<double> sum;
  std::vector<double> comp;
};

PrefixSums prefix_sums(const std::vector<double>& values) {
  PrefixSums p;
  p.sum.reserve(values.size() + 1);
  p.comp.reserve(values.size() + 1);
  double s = 0.0;
  double c = 0.0;
  p.sum.push_back(0.0);
  p.comp.push_back(0.0);
  for (double v : values) {
    const double t = s + v;
    if (std::abs(s) >= std::abs(v)) {
      c += (s - t) + v;
    } else {
      c += (v - t) + s;
    }
    s = t;
    p.sum.push_back(s);
    p.comp.push_back(c);
  }
  return p;
}

double window_mean(const PrefixSums& p, std::int64_t j, std::int64_t n) {
  const auto a = static_cast<std::size_t>(j);
  const auto b = static_cast<std::size_t>(j + n);
  return ((p.sum[b] - p.sum[a]) + (p.comp[b] - p.comp[a])) /
         static_cast<double>(n);
}

// Shared trend rule: yes when the value collapsed below tol or keeps
// shrinking by >= 2x per grid doubling; no when it stagnates well above tol;
// inconclusive otherwise (including a non-monotone final step).
Verdict collapse_verdict(const std::vector<double>& vals, double tol) {
  if (vals.empty()) return Verdict::inconclusive;
  const double last = vals.back();
  if (last <= tol) return Verdict::yes;
  if (vals.size() < 3) return Verdict::inconclusive;
  const double two_back = vals[vals.size() - 3];
  const double prev = vals[vals.size() - 2];
  if (last <= 0.3 * two_back) return Verdict::yes;
  if (last > prev * (1.0 + 1e-9)) return Verdict::inconclusive;
  if (last > 100.0 * tol && last >= 0.8 * two_back) return Verdict::no;
  return Verdict::inconclusive;
}

double period_mean(const std::vector<double>& values) {
  detail::KahanSum acc;
  for (double v : values) acc.add(v);
  return acc.value() / static_cast<double>(values.size());
}

EnvelopeEstimate exact_estimate(double value) {
  EnvelopeEstimate est;
  est.phi_minus = value;
  est.phi_plus = value;
  est.uniform = Verdict::yes;
  return est;
}

}  // namespace

BoundedSequence::BoundedSequence(std::vector<double> sample, Tail tail)
    : sample_(std::move(sample)), tail_(std::move(tail)) {}

BoundedSequence BoundedSequence::from_samples(std::vector<double> sample) {
  if (sample.empty()) {
    throw PreconditionError("sequence needs at least one sample");
  }
  require_finite(sample, "sequence samples");
  return BoundedSequence(std::move(sample), Unspecified{});
}

BoundedSequence BoundedSequence::with_periodic_tail(
    std::vector<double> sample, std::vector<double> period) {
  if (period.empty()) {
    throw PreconditionError("periodic tail needs at least one value");
  }
  require_finite(sample, "sequence samples");
  require_finite(period, "periodic tail values");
  return BoundedSequence(std::move(sample), PeriodicTail{std::move(period)});
}

BoundedSequence BoundedSequence::with_convergent_tail(
    std::vector<double> sample, double limit) {
  if (!std::isfinite(limit)) {
    throw PreconditionError("convergent tail limit must be finite");
  }
  require_finite(sample, "sequence samples");
  return BoundedSequence(std::move(sample), ConvergentTail{limit});
}

bool BoundedSequence::analytic_tail() const {
  return !std::holds_alternative<Unspecified>(tail_);
}

double BoundedSequence::value_at(std::int64_t k) const {
  if (k < 0) throw OutOfRangeError("sequence index must be nonnegative");
  if (k < sample_size()) return sample_[static_cast<std::size_t>(k)];
  if (const auto* p = std::get_if<PeriodicTail>(&tail_)) {
    const auto len = static_cast<std::int64_t>(p->values.size());
    return p->values[static_cast<std::size_t>((k - sample_size()) % len)];
  }
  if (const auto* c = std::get_if<ConvergentTail>(&tail_)) return c->limit;
  throw OutOfRangeError("index past the sampled range of an unspecified tail");
}

double BoundedSequence::min_value() const {
  double lo = sample_.empty() ? std::numeric_limits<double>::infinity()
                              : *std::min_element(sample_.begin(), sample_.end());
  if (const auto* p = std::get_if<PeriodicTail>(&tail_)) {
    lo = std::min(lo, *std::min_element(p->values.begin(), p->values.end()));
  } else if (const auto* c = std::get_if<ConvergentTail>(&tail_)) {
    lo = std::min(lo, c->limit);
  }
  return lo;
}

double BoundedSequence::max_value() const {
  double hi = sample_.empty() ? -std::numeric_limits<double>::infinity()
                              : *std::max_element(sample_.begin(), sample_.end());
  if (const auto* p = std::get_if<PeriodicTail>(&tail_)) {
    hi = std::max(hi, *std::max_element(p->values.begin(), p->values.end()));
  } else if (const auto* c = std::get_if<ConvergentTail>(&tail_)) {
    hi = std::max(hi, c->limit);
  }
  return hi;
}

double BoundedSequence::bound() const {
  return std::max(std::abs(min_value()), std::abs(max_value()));
}

BoundedSequence BoundedSequence::shifted() const {
  if (!sample_.empty()) {
    return BoundedSequence(
        std::vector<double>(sample_.begin() + 1, sample_.end()), tail_);
  }
  if (const auto* p = std::get_if<PeriodicTail>(&tail_)) {
    std::vector<double> rotated(p->values.begin() + 1, p->values.end());
    rotated.push_back(p->values.front());
    return BoundedSequence({}, PeriodicTail{std::move(rotated)});
  }
  if (std::holds_alternative<ConvergentTail>(tail_)) return *this;
  throw PreconditionError("cannot shift an empty sequence");
}

BoundedSequence operator*(double c, const BoundedSequence& xs) {
  if (!std::isfinite(c)) throw PreconditionError("scale must be finite");
  std::vector<double> sample = xs.sample();
  for (double& v : sample) v *= c;
  if (const auto* p = std::get_if<BoundedSequence::PeriodicTail>(&xs.tail())) {
    std::vector<double> values = p->values;
    for (double& v : values) v *= c;
    return BoundedSequence::with_periodic_tail(std::move(sample),
                                               std::move(values));
  }
  if (const auto* t = std::get_if<BoundedSequence::ConvergentTail>(&xs.tail())) {
    return BoundedSequence::with_convergent_tail(std::move(sample),
                                                 c * t->limit);
  }
  return BoundedSequence::from_samples(std::move(sample));
}

BoundedSequence operator+(const BoundedSequence& a, const BoundedSequence& b) {
  const auto sum_range = [&](std::int64_t len) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(len));
    for (std::int64_t k = 0; k < len; ++k) {
      out.push_back(a.value_at(k) + b.value_at(k));
    }
    return out;
  };
  if (a.analytic_tail() && b.analytic_tail()) {
    const std::int64_t base = std::max(a.sample_size(), b.sample_size());
    const auto* pa = std::get_if<BoundedSequence::PeriodicTail>(&a.tail());
    const auto* pb = std::get_if<BoundedSequence::PeriodicTail>(&b.tail());
    const auto* ca = std::get_if<BoundedSequence::ConvergentTail>(&a.tail());
    const auto* cb = std::get_if<BoundedSequence::ConvergentTail>(&b.tail());
    if (ca != nullptr && cb != nullptr) {
      return BoundedSequence::with_convergent_tail(sum_range(base),
                                                   ca->limit + cb->limit);
    }
    std::int64_t period = 0;
    if (pa != nullptr && pb != nullptr) {
      const auto la = static_cast<std::int64_t>(pa->values.size());
      const auto lb = static_cast<std::int64_t>(pb->values.size());
      period = std::lcm(la, lb);
    } else {
      period = static_cast<std::int64_t>(
          pa != nullptr ? pa->values.size() : pb->values.size());
    }
    if (period <= kLcmCap) {
      std::vector<double> values;
      values.reserve(static_cast<std::size_t>(period));
      for (std::int64_t k = base; k < base + period; ++k) {
        values.push_back(a.value_at(k) + b.value_at(k));
      }
      return BoundedSequence::with_periodic_tail(sum_range(base),
                                                 std::move(values));
    }
    return BoundedSequence::from_samples(
        sum_range(std::max<std::int64_t>(base, 2 * kMinEstimationSamples)));
  }
  std::int64_t len = std::numeric_limits<std::int64_t>::max();
  if (!a.analytic_tail()) len = std::min(len, a.sample_size());
  if (!b.analytic_tail()) len = std::min(len, b.sample_size());
  return BoundedSequence::from_samples(sum_range(len));
}

double shifted_cesaro(const BoundedSequence& xs, std::int64_t n,
                      std::int64_t j) {
  if (n < 1) throw PreconditionError("window length must be positive");
  if (j < 0) throw PreconditionError("shift must be nonnegative");
  if (!xs.analytic_tail() && j + n > xs.sample_size()) {
    throw OutOfRangeError("window exceeds the sampled range");
  }
  detail::KahanSum acc;
  for (std::int64_t k = 0; k < n; ++k) acc.add(xs.value_at(j + k));
  return acc.value() / static_cast<double>(n);
}

std::vector<std::int64_t> default_n_grid(std::int64_t sample_size) {
  const std::int64_t cap = std::min(sample_size / 2, kGridCap);
  std::vector<std::int64_t> grid;
  for (std::int64_t n = kGridFloor; n <= cap; n *= 2) grid.push_back(n);
  if (grid.empty() && sample_size >= 2) grid.push_back(sample_size / 2);
  return grid;
}

EnvelopeEstimate envelope(const BoundedSequence& xs,
                          const std::vector<std::int64_t>& n_grid,
                          std::int64_t j_max, double tol) {
  if (!(tol > 0.0) || !std::isfinite(tol)) {
    throw PreconditionError("envelope tolerance must be positive");
  }
  if (const auto* p = std::get_if<BoundedSequence::PeriodicTail>(&xs.tail())) {
    return exact_estimate(period_mean(p->values));
  }
  if (const auto* c = std::get_if<BoundedSequence::ConvergentTail>(&xs.tail())) {
    return exact_estimate(c->limit);
  }
  const std::int64_t n_samples = xs.sample_size();
  if (n_samples < kMinEstimationSamples) {
    throw InsufficientDataError(
        "envelope estimation needs at least 64 samples");
  }
  if (n_grid.empty()) throw PreconditionError("window grid is empty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 1 || (i > 0 && n_grid[i] <= n_grid[i - 1])) {
      throw PreconditionError("window grid must be positive and increasing");
    }
  }
  if (n_grid.back() > n_samples / 2) {
    throw PreconditionError(
        "largest window must not exceed half the sample");
  }
  if (j_max < 0) throw PreconditionError("shift range must be nonnegative");

  const PrefixSums prefix = prefix_sums(xs.sample());
  EnvelopeEstimate est;
  std::vector<double> gaps;
  for (std::int64_t n : n_grid) {
    const std::int64_t jm = std::min(j_max, n_samples - n);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::int64_t j = 0; j <= jm; ++j) {
      const double m = window_mean(prefix, j, n);
      lo = std::min(lo, m);
      hi = std::max(hi, m);
    }
    est.trend.push_back({n, lo, hi});
    gaps.push_back(hi - lo);
    est.n_used = n;
    est.j_range = jm + 1;
    est.phi_minus = lo;
    est.phi_plus = hi;
  }
  est.uniform = collapse_verdict(gaps, tol);
  return est;
}

EnvelopeEstimate envelope(const BoundedSequence& xs, double tol) {
  if (xs.analytic_tail()) return envelope(xs, {}, 0, tol);
  return envelope(xs, default_n_grid(xs.sample_size()), xs.sample_size(), tol);
}

AgreementReport all_banach_limits_agree(const BoundedSequence& xs,
                                        double tol) {
  AgreementReport report;
  report.estimate = envelope(xs, tol);
  report.value = 0.5 * (report.estimate.phi_minus + report.estimate.phi_plus);
  report.gap = report.estimate.gap();
  if (xs.analytic_tail()) {
    report.agree = Verdict::yes;
    return report;
  }
  std::vector<double> devs;
  for (const EnvelopeTrendRow& row : report.estimate.trend) {
    devs.push_back(std::max(std::abs(row.sup_j - report.value),
                            std::abs(row.inf_j - report.value)));
  }
  const std::size_t k = devs.size();
  const bool rose_at_end =
      k >= 2 && devs[k - 1] > devs[k - 2] * (1.0 + 1e-9);
  if (devs.back() <= tol && !rose_at_end) {
    report.agree = Verdict::yes;
  } else if (rose_at_end) {
    report.agree = Verdict::inconclusive;
  } else {
    report.agree = Verdict::no;
  }
  return report;
}

namespace {

// Throws when the sampled orbit rises monotonically across its final decade.
void require_bounded_evidence(const std::vector<double>& s) {
  for (double v : s) {
    if (!std::isfinite(v)) {
      throw NotPowerBoundedEvidenceError("orbit overflowed the horizon");
    }
  }
  const auto n = static_cast<std::int64_t>(s.size());
  const std::int64_t start = (9 * n) / 10;
  if (start + 1 >= n) return;
  bool monotone = true;
  for (std::int64_t k = start; k + 1 < n; ++k) {
    if (s[static_cast<std::size_t>(k + 1)] <
        s[static_cast<std::size_t>(k)] * (1.0 - 1e-12)) {
      monotone = false;
      break;
    }
  }
  double earlier = 0.0;
  for (std::int64_t k = 0; k <= start; ++k) {
    earlier = std::max(earlier, s[static_cast<std::size_t>(k)]);
  }
  const double last = s.back();
  // A bounded orbit may step up late (block level changes); only a fresh
  // record at the end of a non-decreasing decade counts as growth evidence.
  if (monotone && last > earlier * (1.0 + 1e-9) && last > earlier + 1e-12) {
    throw NotPowerBoundedEvidenceError(
        "orbit grows monotonically over the final decade of the horizon");
  }
}

BoundedSequence classify_shift_orbit(const WeightedShiftOp& op,
                                     const SupportedVector& x,
                                     std::vector<double> samples) {
  const auto prefix_len = static_cast<std::int64_t>(op.weights.prefix.size());
  const std::int64_t horizon = static_cast<std::int64_t>(samples.size()) - 1;
  if (const auto* c = std::get_if<WeightRule::Constant>(&op.weights.tail)) {
    if (c->value > 1.0 + 1e-12) {
      throw NotPowerBoundedEvidenceError("weight tail exceeds one");
    }
    if (std::abs(c->value - 1.0) <= 1e-12) {
      // Flat tail: the orbit is exactly constant once every consumed weight
      // sits in the tail.
      if (horizon >= prefix_len + 1) {
        const double settled = samples.back();
        return BoundedSequence::with_convergent_tail(std::move(samples),
                                                     settled);
      }
      return BoundedSequence::from_samples(std::move(samples));
    }
    return BoundedSequence::with_convergent_tail(std::move(samples), 0.0);
  }
  if (const auto* p = std::get_if<WeightRule::Periodic>(&op.weights.tail)) {
    double product = 1.0;
    for (double w : p->values) product *= w;
    if (product > 1.0 + 1e-12) {
      throw NotPowerBoundedEvidenceError("periodic weight cycle grows");
    }
    const auto period = static_cast<std::int64_t>(p->values.size());
    if (std::abs(product - 1.0) <= 1e-12) {
      // Unit cycle: the orbit repeats with the weight period once past the
      // prefix; harvest the last full period of samples as the tail.
      if (horizon + 1 - period >= prefix_len + 1 + x.max_index()) {
        std::vector<double> tail(samples.end() - period, samples.end());
        return BoundedSequence::with_periodic_tail(std::move(samples),
                                                   std::move(tail));
      }
      return BoundedSequence::from_samples(std::move(samples));
    }
    return BoundedSequence::with_convergent_tail(std::move(samples), 0.0);
  }
  const auto& blocks = std::get<WeightRule::Blocks>(op.weights.tail);
  if (blocks.value_hi * blocks.value_lo > 1.0 + 1e-12) {
    throw NotPowerBoundedEvidenceError("block level products grow");
  }
  return BoundedSequence::from_samples(std::move(samples));
}

BoundedSequence classify_diagonal_orbit(const DiagonalOp& op,
                                        const SupportedVector& x,
                                        std::vector<double> samples) {
  double limit = 0.0;
  for (std::size_t i = 0; i < x.support().size(); ++i) {
    const double mod = std::abs(op.entry(x.support()[i]));
    if (mod > 1.0 + 1e-12) {
      throw NotPowerBoundedEvidenceError(
          "diagonal entry exceeds modulus one on the probe support");
    }
    if (mod >= 1.0 - 1e-12) limit += std::norm(x.amplitudes()[i]);
  }
  return BoundedSequence::with_convergent_tail(std::move(samples), limit);
}

}  // namespace

BoundedSequence orbit_sequence(const OperatorModel& t, const SupportedVector& x,
                               std::int64_t horizon) {
  if (x.empty()) throw PreconditionError("probe vector must be nonzero");
  if (horizon < 1) throw PreconditionError("horizon must be positive");
  std::vector<double> samples = orbit_norms(t, x, horizon);
  if (const auto* shift = std::get_if<WeightedShiftOp>(&t.variant())) {
    BoundedSequence xs = classify_shift_orbit(*shift, x, std::move(samples));
    if (!xs.analytic_tail()) require_bounded_evidence(xs.sample());
    return xs;
  }
  if (const auto* diag = std::get_if<DiagonalOp>(&t.variant())) {
    return classify_diagonal_orbit(*diag, x, std::move(samples));
  }
  require_bounded_evidence(samples);
  return BoundedSequence::from_samples(std::move(samples));
}

EnvelopeEstimate vector_envelope(const OperatorModel& t,
                                 const SupportedVector& x,
                                 std::int64_t horizon, double tol) {
  return envelope(orbit_sequence(t, x, horizon), tol);
}

namespace {

// Functional value of an orbit sequence: exact for analytic tails, the
// late-window mean (largest admissible shift at the top window) otherwise.
double functional_value(const BoundedSequence& xs, const EnvelopeEstimate& est) {
  if (xs.analytic_tail()) return est.phi_minus;
  const std::int64_t n = est.n_used;
  const std::int64_t j = xs.sample_size() - n;
  return shifted_cesaro(xs, n, j);
}

struct ComboEnvelope {
  double value = 0.0;
  Verdict uniform = Verdict::inconclusive;
};

ComboEnvelope combo_envelope(const OperatorModel& t, const SupportedVector& z,
                             std::int64_t horizon, double tol) {
  const BoundedSequence xs = orbit_sequence(t, z, horizon);
  const EnvelopeEstimate est = envelope(xs, tol);
  return {functional_value(xs, est), est.uniform};
}

}  // namespace

PhiFormBounds phi_asymptotic_form(const OperatorModel& t,
                                  const std::vector<SupportedVector>& probes,
                                  std::int64_t horizon, double tol) {
  if (probes.empty()) throw PreconditionError("probe list is empty");
  for (const SupportedVector& x : probes) {
    if (x.empty()) throw PreconditionError("probe vector must be nonzero");
  }
  if (horizon < 2 * kGridFloor) {
    throw PreconditionError("horizon too small for envelope estimation");
  }
  PhiFormBounds bounds;
  Verdict overall = Verdict::yes;
  for (const SupportedVector& x : probes) {
    const EnvelopeEstimate est = vector_envelope(t, x, horizon, tol);
    bounds.entries.push_back({x, est.phi_minus, est.phi_plus, est.uniform});
    overall = verdict_and(overall, est.uniform);
  }
  if (t.is_finite()) {
    const std::int64_t d = *t.dim();
    Matrix a = Matrix::Zero(d, d);
    Verdict combos = Verdict::yes;
    const Complex imag(0.0, 1.0);
    for (std::int64_t i = 1; i <= d && combos != Verdict::no; ++i) {
      const SupportedVector ei = SupportedVector::basis(i);
      const ComboEnvelope diag = combo_envelope(t, ei, horizon, tol);
      combos = verdict_and(combos, diag.uniform);
      a(i - 1, i - 1) = diag.value;
      for (std::int64_t j = i + 1; j <= d && combos != Verdict::no; ++j) {
        const SupportedVector ej = SupportedVector::basis(j);
        const ComboEnvelope sum = combo_envelope(t, ei + ej, horizon, tol);
        const ComboEnvelope diff = combo_envelope(t, ei - ej, horizon, tol);
        const ComboEnvelope isum =
            combo_envelope(t, ei + imag * ej, horizon, tol);
        const ComboEnvelope idiff =
            combo_envelope(t, ei - imag * ej, horizon, tol);
        for (const ComboEnvelope& c : {sum, diff, isum, idiff}) {
          combos = verdict_and(combos, c.uniform);
        }
        const Complex entry =
            0.25 * (sum.value - diff.value +
                    imag * isum.value - imag * idiff.value);
        a(j - 1, i - 1) = entry;
        a(i - 1, j - 1) = std::conj(entry);
      }
    }
    if (combos == Verdict::yes) bounds.reconstructed = HermitianMatrix(a);
    overall = verdict_and(overall, combos);
  }
  bounds.certified_equal_to_q = overall;
  return bounds;
}

Verdict q_equals_aphi_certificate(const OperatorModel& t,
                                  const std::vector<double>& q_form,
                                  const std::vector<SupportedVector>& probes,
                                  std::int64_t horizon, double tol) {
  if (q_form.size() != probes.size()) {
    throw PreconditionError("one mean-limit value per probe is required");
  }
  if (probes.empty()) throw PreconditionError("probe list is empty");
  require_finite(q_form, "mean limit values");
  for (const SupportedVector& x : probes) {
    if (x.empty()) throw PreconditionError("probe vector must be nonzero");
  }
  if (horizon < 2 * kGridFloor) {
    throw PreconditionError("horizon too small for envelope estimation");
  }
  if (!(tol > 0.0) || !std::isfinite(tol)) {
    throw PreconditionError("certificate tolerance must be positive");
  }
  // Quasinormal contraction: powers of the gram operator are the gram
  // operators of the powers, so the shifted means converge uniformly.
  if (is_quasinormal(t).verdict && model_norm(t) <= 1.0 + 1e-12) {
    return Verdict::yes;
  }
  Verdict overall = Verdict::yes;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const BoundedSequence xs = orbit_sequence(t, probes[i], horizon);
    if (xs.analytic_tail()) {
      const EnvelopeEstimate est = envelope(xs, tol);
      const bool match = std::abs(est.phi_minus - q_form[i]) <= 100.0 * tol &&
                         est.gap() <= 100.0 * tol;
      overall = verdict_and(overall, verdict_of(match));
      continue;
    }
    const PrefixSums prefix = prefix_sums(xs.sample());
    const std::int64_t n_samples = xs.sample_size();
    std::vector<double> devs;
    for (std::int64_t n : default_n_grid(n_samples)) {
      double dev = 0.0;
      for (std::int64_t j = 0; j + n <= n_samples; ++j) {
        dev = std::max(dev, std::abs(window_mean(prefix, j, n) - q_form[i]));
      }
      devs.push_back(dev);
    }
    overall = verdict_and(overall, collapse_verdict(devs, tol));
  }
  return overall;
}

namespace {

struct WorstResiduals {
  double constants = 0.0;
  double convergent = 0.0;
  double shift = 0.0;
  double order = 0.0;
  double positivity = 0.0;
  double sandwich = 0.0;
  double scaling = 0.0;
  double additivity = 0.0;
};

std::vector<double> periodic_sample(const std::vector<double>& base,
                                    std::int64_t len) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(len));
  for (std::int64_t k = 0; k < len; ++k) {
    out.push_back(base[static_cast<std::size_t>(k) % base.size()]);
  }
  return out;
}

}  // namespace

CheckSuite banach_axiom_suite(std::uint64_t seed, int trials, double tol) {
  if (trials < 1) throw PreconditionError("axiom suite needs trials >= 1");
  if (!(tol > 0.0) || !std::isfinite(tol)) {
    throw PreconditionError("axiom suite tolerance must be positive");
  }
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> period_of(2, 8);

  const std::int64_t n_samples = 2048;
  const std::vector<std::int64_t> grid = {64, 128, 256, 512};
  const std::int64_t j_max = n_samples - 512 - 8;

  WorstResiduals worst;
  for (int trial = 0; trial < trials; ++trial) {
    // Constant sequence: the functional must return the constant.
    const double c = -2.0 + 4.0 * unit(rng);
    const BoundedSequence constant = BoundedSequence::with_convergent_tail(
        std::vector<double>(64, c), c);
    const EnvelopeEstimate ec = envelope(constant, tol);
    worst.constants = std::max(
        worst.constants,
        std::max(std::abs(ec.phi_minus - c), std::abs(ec.phi_plus - c)));

    // Convergent sequence: the declared tail must collapse exactly, and the
    // estimation path must bracket the limit with a uniform verdict.
    const double limit = unit(rng);
    const double amp = unit(rng);
    const double rate = 0.5 + 0.45 * unit(rng);
    std::vector<double> conv_sample;
    double pow_r = 1.0;
    for (std::int64_t k = 0; k < n_samples; ++k) {
      conv_sample.push_back(limit + amp * pow_r);
      pow_r *= rate;
    }
    const BoundedSequence declared = BoundedSequence::with_convergent_tail(
        std::vector<double>(conv_sample.begin(), conv_sample.begin() + 128),
        limit);
    const EnvelopeEstimate ev = envelope(declared, tol);
    worst.convergent = std::max(
        worst.convergent,
        std::max(ev.gap(),
                 std::abs(0.5 * (ev.phi_minus + ev.phi_plus) - limit)));
    const EnvelopeEstimate evest =
        envelope(BoundedSequence::from_samples(std::move(conv_sample)), tol);
    worst.convergent = std::max(
        worst.convergent,
        std::max({evest.phi_minus - limit, limit - evest.phi_plus,
                  evest.uniform == Verdict::yes ? 0.0 : 1.0}));

    // Estimation-path sequences: strictly periodic samples so window-mean
    // extremes recur and finite-j sweeps are exact.
    const int p = period_of(rng);
    std::vector<double> base(static_cast<std::size_t>(p));
    for (double& v : base) v = unit(rng);
    const BoundedSequence xs =
        BoundedSequence::from_samples(periodic_sample(base, n_samples));
    const EnvelopeEstimate ex = envelope(xs, grid, j_max, tol);

    const EnvelopeEstimate eshift = envelope(xs.shifted(), grid, j_max, tol);
    worst.shift = std::max(
        worst.shift, std::max(std::abs(eshift.phi_minus - ex.phi_minus),
                              std::abs(eshift.phi_plus - ex.phi_plus)));

    std::vector<double> bump(static_cast<std::size_t>(period_of(rng)));
    for (double& v : bump) v = 0.5 * unit(rng);
    std::vector<double> upper_sample = periodic_sample(bump, n_samples);
    for (std::int64_t k = 0; k < n_samples; ++k) {
      upper_sample[static_cast<std::size_t>(k)] += xs.sample()[static_cast<std::size_t>(k)];
    }
    const BoundedSequence upper =
        BoundedSequence::from_samples(std::move(upper_sample));
    const EnvelopeEstimate eu = envelope(upper, grid, j_max, tol);
    worst.order = std::max(worst.order,
                           std::max(ex.phi_plus - eu.phi_plus,
                                    ex.phi_minus - eu.phi_minus));

    worst.positivity = std::max(worst.positivity, -ex.phi_minus);
    worst.sandwich = std::max(
        worst.sandwich, std::max(xs.min_value() - ex.phi_minus,
                                 ex.phi_plus - xs.max_value()));

    const double scale = 0.1 + 2.9 * unit(rng);
    const EnvelopeEstimate escaled = envelope(scale * xs, grid, j_max, tol);
    const double denom = std::max(1.0, scale * xs.bound());
    worst.scaling = std::max(
        worst.scaling,
        std::max(std::abs(escaled.phi_minus - scale * ex.phi_minus),
                 std::abs(escaled.phi_plus - scale * ex.phi_plus)) /
            denom);

    std::vector<double> other_base(static_cast<std::size_t>(period_of(rng)));
    for (double& v : other_base) v = unit(rng);
    const BoundedSequence ys =
        BoundedSequence::from_samples(periodic_sample(other_base, n_samples));
    const EnvelopeEstimate ey = envelope(ys, grid, j_max, tol);
    const EnvelopeEstimate esum = envelope(xs + ys, grid, j_max, tol);
    worst.additivity = std::max(
        worst.additivity,
        std::max(esum.phi_plus - (ex.phi_plus + ey.phi_plus),
                 (ex.phi_minus + ey.phi_minus) - esum.phi_minus));
  }

  CheckSuite suite;
  suite.subject = "envelope_functionals";
  const auto push = [&suite](const char* name, double residual,
                             double tolerance) {
    CheckItem item;
    item.name = name;
    item.residual = residual;
    item.tolerance = tolerance;
    item.pass = residual <= tolerance;
    suite.items.push_back(std::move(item));
  };
  push("normalizes_constants", worst.constants, 1e-12);
  push("assigns_limits_to_convergent_sequences", worst.convergent, tol);
  push("shift_invariant", worst.shift, tol);
  push("order_preserving", worst.order, tol / 10.0);
  push("positive_on_nonnegative", worst.positivity, 1e-12);
  push("within_liminf_limsup", worst.sandwich, tol);
  push("positively_homogeneous", worst.scaling, 1e-12);
  push("subadditive_envelopes_replace_linearity", worst.additivity, tol / 10.0);
  return suite;
}

}  // namespace asymptotica
