#include "asymptotica/operator_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "scaled_product.hpp"

namespace asymptotica {

namespace {

using detail::ScaledProduct;

constexpr std::int64_t kMaxHorizon = std::int64_t(1) << 24;
constexpr std::int64_t kMaxDenseDim = 256;

// Streams the weight sequence w_1, w_2, ... in order, O(1) per step.
class WeightStream {
 public:
  explicit WeightStream(const WeightRule& rule) : rule_(rule) {
    if (auto* blocks = std::get_if<WeightRule::Blocks>(&rule.tail)) {
      block_len_ = block_length(*blocks, 0);
    }
  }

  static std::int64_t block_length(const WeightRule::Blocks& b, std::int64_t j) {
    double len = double(b.initial_len) * std::pow(b.growth_factor, double(j));
    if (!(len < 9e18)) return std::numeric_limits<std::int64_t>::max() / 4;
    return std::max<std::int64_t>(1, std::llround(len));
  }

  double next() {
    ++k_;
    if (k_ <= std::int64_t(rule_.prefix.size())) return rule_.prefix[size_t(k_ - 1)];
    const std::int64_t t = k_ - std::int64_t(rule_.prefix.size());  // 1-based in tail
    if (auto* c = std::get_if<WeightRule::Constant>(&rule_.tail)) return c->value;
    if (auto* p = std::get_if<WeightRule::Periodic>(&rule_.tail))
      return p->values[size_t((t - 1) % std::int64_t(p->values.size()))];
    const auto& b = std::get<WeightRule::Blocks>(rule_.tail);
    double w = pos_in_block_ == 0 ? (block_j_ % 2 == 0 ? b.value_hi : b.value_lo) : 1.0;
    if (++pos_in_block_ == block_len_) {
      pos_in_block_ = 0;
      block_len_ = block_length(b, ++block_j_);
    }
    return w;
  }

  // index of the next weight this stream will yield
  std::int64_t next_index() const { return k_ + 1; }
  std::int64_t current_block() const { return block_j_; }
  bool at_block_start() const { return pos_in_block_ == 0; }
  std::int64_t current_block_length() const { return block_len_; }

 private:
  const WeightRule& rule_;
  std::int64_t k_ = 0;
  std::int64_t block_j_ = 0;
  std::int64_t block_len_ = 0;
  std::int64_t pos_in_block_ = 0;
};

// Smallest weight count H such that every window product of length n over the
// full stream is already realized by a window inside [1, H].
std::int64_t window_horizon(const WeightRule& rule, std::int64_t n) {
  const auto prefix_len = std::int64_t(rule.prefix.size());
  if (auto* c = std::get_if<WeightRule::Constant>(&rule.tail)) {
    (void)c;
    return prefix_len + n + 1;
  }
  if (auto* p = std::get_if<WeightRule::Periodic>(&rule.tail))
    return prefix_len + std::int64_t(p->values.size()) + n;
  const auto& b = std::get<WeightRule::Blocks>(rule.tail);
  if (b.growth_factor == 1.0) {
    // constant block lengths: the tail is periodic with period 2 * initial_len
    return prefix_len + 2 * b.initial_len + n;
  }
  // Walk blocks until both phases have completed a block longer than the
  // window; beyond that point no new window pattern appears.
  std::int64_t pos = prefix_len;
  bool long_hi = false, long_lo = false;
  for (std::int64_t j = 0;; ++j) {
    std::int64_t len = WeightStream::block_length(b, j);
    pos += len;
    if (len >= n + 1) (j % 2 == 0 ? long_hi : long_lo) = true;
    if (long_hi && long_lo) break;
    if (pos > kMaxHorizon) {
      throw OutOfRangeError("weighted shift: window horizon for blocks tail exceeds " +
                            std::to_string(kMaxHorizon));
    }
  }
  return pos + 2 * n + 2;
}

struct WindowExtremes {
  double sup = 0.0;
  double inf = std::numeric_limits<double>::infinity();
};

// max / min over i >= 1 of prod_{m=i}^{i+n-1} w_m
WindowExtremes window_products(const WeightRule& rule, std::int64_t n) {
  const std::int64_t horizon = window_horizon(rule, n);
  if (horizon + n > kMaxHorizon) {
    throw OutOfRangeError("weighted shift: window enumeration horizon exceeds " +
                          std::to_string(kMaxHorizon));
  }
  WeightStream stream(rule);
  std::vector<ScaledProduct> prefix(size_t(horizon + 1));
  prefix[0] = ScaledProduct::one();
  for (std::int64_t i = 1; i <= horizon; ++i) {
    prefix[size_t(i)] = prefix[size_t(i - 1)];
    prefix[size_t(i)].multiply(stream.next());
  }
  WindowExtremes ext;
  for (std::int64_t i = 0; i + n <= horizon; ++i) {
    double v = prefix[size_t(i + n)].ratio(prefix[size_t(i)]);
    ext.sup = std::max(ext.sup, v);
    ext.inf = std::min(ext.inf, v);
  }
  return ext;
}

void require_probe_fits(const SupportedVector& x, std::int64_t dim, const char* who) {
  if (x.max_index() > dim) {
    throw OutOfRangeError(std::string(who) + ": vector supported at index " +
                          std::to_string(x.max_index()) + " but the operator acts on dimension " +
                          std::to_string(dim));
  }
}

// component index layout of a direct sum; offset is the number of coordinates
// occupied by earlier components
struct SumLayout {
  const OperatorModel* component;
  std::int64_t offset;
  std::optional<std::int64_t> dim;  // nullopt only for the final component
};

std::vector<SumLayout> layout(const DirectSumOp& sum) {
  std::vector<SumLayout> out;
  std::int64_t offset = 0;
  for (const auto& comp : sum.components) {
    auto d = comp.dim();
    out.push_back(SumLayout{&comp, offset, d});
    if (d) offset += *d;
  }
  return out;
}

template <typename ApplyFn>
SupportedVector apply_direct_sum(const DirectSumOp& sum, const SupportedVector& x,
                                 ApplyFn&& apply_component) {
  auto parts = layout(sum);
  std::vector<std::int64_t> support;
  std::vector<Complex> amplitudes;
  for (const auto& part : parts) {
    std::vector<std::int64_t> local_support;
    std::vector<Complex> local_amps;
    for (size_t i = 0; i < x.support().size(); ++i) {
      std::int64_t k = x.support()[i];
      if (k <= part.offset) continue;
      if (part.dim && k > part.offset + *part.dim) continue;
      local_support.push_back(k - part.offset);
      local_amps.push_back(x.amplitudes()[i]);
    }
    if (local_support.empty()) continue;
    SupportedVector image =
        apply_component(*part.component, SupportedVector(local_support, local_amps));
    for (size_t i = 0; i < image.support().size(); ++i) {
      support.push_back(image.support()[i] + part.offset);
      amplitudes.push_back(image.amplitudes()[i]);
    }
  }
  // coordinates beyond every component mean the vector does not fit
  if (!parts.empty() && parts.back().dim) {
    std::int64_t total = parts.back().offset + *parts.back().dim;
    require_probe_fits(x, total, "direct sum");
  }
  return SupportedVector(std::move(support), std::move(amplitudes));
}

double log_power_norm(const OperatorModel& t, std::int64_t n);

struct ScaledMatrixPower {
  Matrix m;          // Frobenius-normalized
  double log_scale;  // log of the factor taken out
};

ScaledMatrixPower scaled_matrix_power(const Matrix& t, std::int64_t n) {
  const auto dim = t.rows();
  auto normalize = [](Matrix& m, double& log_scale) {
    double f = m.norm();
    if (f > 0.0 && std::isfinite(f)) {
      m /= f;
      log_scale += std::log(f);
    }
  };
  Matrix acc = Matrix::Identity(dim, dim);
  double acc_log = 0.0;
  Matrix base = t;
  double base_log = 0.0;
  normalize(base, base_log);
  std::int64_t e = n;
  while (e > 0) {
    if (e & 1) {
      acc = acc * base;
      acc_log += base_log;
      normalize(acc, acc_log);
    }
    e >>= 1;
    if (e > 0) {
      base = base * base;
      base_log *= 2.0;
      normalize(base, base_log);
    }
  }
  return ScaledMatrixPower{std::move(acc), acc_log};
}

}  // namespace

// ---------------------------------------------------------------------------
// WeightRule

void WeightRule::validate() const {
  for (double w : prefix) {
    if (!(w > 0.0) || !std::isfinite(w))
      throw PreconditionError("weight rule: prefix weights must be positive and finite");
  }
  if (auto* c = std::get_if<Constant>(&tail)) {
    if (!(c->value > 0.0) || !std::isfinite(c->value))
      throw PreconditionError("weight rule: constant tail must be positive and finite");
  } else if (auto* p = std::get_if<Periodic>(&tail)) {
    if (p->values.empty())
      throw PreconditionError("weight rule: periodic tail needs at least one value");
    for (double w : p->values) {
      if (!(w > 0.0) || !std::isfinite(w))
        throw PreconditionError("weight rule: periodic weights must be positive and finite");
    }
  } else {
    const auto& b = std::get<Blocks>(tail);
    if (!(b.value_hi > 0.0) || !(b.value_lo > 0.0) || !std::isfinite(b.value_hi) ||
        !std::isfinite(b.value_lo))
      throw PreconditionError("weight rule: block values must be positive and finite");
    if (!(b.growth_factor >= 1.0) || !std::isfinite(b.growth_factor))
      throw PreconditionError("weight rule: growth factor must be >= 1");
    if (b.initial_len < 1)
      throw PreconditionError("weight rule: initial block length must be >= 1");
  }
}

double WeightRule::weight(std::int64_t k) const {
  if (k < 1) throw OutOfRangeError("weight rule: index must be >= 1");
  if (k <= std::int64_t(prefix.size())) return prefix[size_t(k - 1)];
  const std::int64_t t = k - std::int64_t(prefix.size());
  if (auto* c = std::get_if<Constant>(&tail)) return c->value;
  if (auto* p = std::get_if<Periodic>(&tail))
    return p->values[size_t((t - 1) % std::int64_t(p->values.size()))];
  const auto& b = std::get<Blocks>(tail);
  std::int64_t pos = 0;
  for (std::int64_t j = 0;; ++j) {
    std::int64_t len = WeightStream::block_length(b, j);
    if (t <= pos + len)
      return t == pos + 1 ? (j % 2 == 0 ? b.value_hi : b.value_lo) : 1.0;
    pos += len;
  }
}

std::vector<double> WeightRule::materialize(std::int64_t count) const {
  if (count < 0 || count > kMaxHorizon)
    throw OutOfRangeError("weight rule: materialization count out of range");
  WeightStream stream(*this);
  std::vector<double> out;
  out.reserve(size_t(count));
  for (std::int64_t i = 0; i < count; ++i) out.push_back(stream.next());
  return out;
}

double WeightRule::sup_weight() const {
  double sup = 0.0;
  for (double w : prefix) sup = std::max(sup, w);
  if (auto* c = std::get_if<Constant>(&tail)) return std::max(sup, c->value);
  if (auto* p = std::get_if<Periodic>(&tail)) {
    for (double w : p->values) sup = std::max(sup, w);
    return sup;
  }
  const auto& b = std::get<Blocks>(tail);
  sup = std::max({sup, b.value_hi, b.value_lo});
  const bool has_interior_ones = b.growth_factor > 1.0 || b.initial_len >= 2;
  if (has_interior_ones) sup = std::max(sup, 1.0);
  return sup;
}

double WeightRule::inf_weight() const {
  double inf = std::numeric_limits<double>::infinity();
  for (double w : prefix) inf = std::min(inf, w);
  if (auto* c = std::get_if<Constant>(&tail)) return std::min(inf, c->value);
  if (auto* p = std::get_if<Periodic>(&tail)) {
    for (double w : p->values) inf = std::min(inf, w);
    return inf;
  }
  const auto& b = std::get<Blocks>(tail);
  inf = std::min({inf, b.value_hi, b.value_lo});
  const bool has_interior_ones = b.growth_factor > 1.0 || b.initial_len >= 2;
  if (has_interior_ones) inf = std::min(inf, 1.0);
  return inf;
}

// ---------------------------------------------------------------------------
// SupportedVector

SupportedVector::SupportedVector(std::vector<std::int64_t> support,
                                 std::vector<Complex> amplitudes) {
  if (support.size() != amplitudes.size())
    throw PreconditionError("supported vector: support and amplitude counts differ");
  std::vector<size_t> order(support.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return support[a] < support[b]; });
  support_.reserve(support.size());
  amplitudes_.reserve(support.size());
  for (size_t i : order) {
    std::int64_t k = support[i];
    Complex a = amplitudes[i];
    if (k < 1) throw OutOfRangeError("supported vector: indices are 1-based");
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
      throw PreconditionError("supported vector: non-finite amplitude");
    if (a == Complex(0.0, 0.0)) continue;
    if (!support_.empty() && support_.back() == k) {
      amplitudes_.back() += a;  // merge duplicates
      if (amplitudes_.back() == Complex(0.0, 0.0)) {
        support_.pop_back();
        amplitudes_.pop_back();
      }
      continue;
    }
    support_.push_back(k);
    amplitudes_.push_back(a);
  }
}

SupportedVector SupportedVector::basis(std::int64_t k) {
  return SupportedVector({k}, {Complex(1.0, 0.0)});
}

SupportedVector SupportedVector::from_dense(const Vector& v) {
  std::vector<std::int64_t> support;
  std::vector<Complex> amps;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) != Complex(0.0, 0.0)) {
      support.push_back(i + 1);
      amps.push_back(v(i));
    }
  }
  return SupportedVector(std::move(support), std::move(amps));
}

std::int64_t SupportedVector::max_index() const {
  return support_.empty() ? 0 : support_.back();
}

double SupportedVector::squared_norm() const {
  double s = 0.0;
  for (const Complex& a : amplitudes_) s += std::norm(a);
  return s;
}

double SupportedVector::norm() const { return std::sqrt(squared_norm()); }

Complex SupportedVector::amplitude_at(std::int64_t k) const {
  auto it = std::lower_bound(support_.begin(), support_.end(), k);
  if (it == support_.end() || *it != k) return Complex(0.0, 0.0);
  return amplitudes_[size_t(it - support_.begin())];
}

Vector SupportedVector::to_dense(std::int64_t dim) const {
  if (max_index() > dim)
    throw OutOfRangeError("supported vector: support index " + std::to_string(max_index()) +
                          " exceeds dimension " + std::to_string(dim));
  Vector v = Vector::Zero(dim);
  for (size_t i = 0; i < support_.size(); ++i) v(support_[i] - 1) = amplitudes_[i];
  return v;
}

SupportedVector operator+(const SupportedVector& a, const SupportedVector& b) {
  std::vector<std::int64_t> support = a.support_;
  std::vector<Complex> amps = a.amplitudes_;
  support.insert(support.end(), b.support_.begin(), b.support_.end());
  amps.insert(amps.end(), b.amplitudes_.begin(), b.amplitudes_.end());
  return SupportedVector(std::move(support), std::move(amps));
}

SupportedVector operator-(const SupportedVector& a, const SupportedVector& b) {
  return a + (Complex(-1.0, 0.0) * b);
}

SupportedVector operator*(Complex c, const SupportedVector& v) {
  std::vector<Complex> amps = v.amplitudes_;
  for (Complex& a : amps) a *= c;
  return SupportedVector(v.support_, std::move(amps));
}

Complex inner(const SupportedVector& x, const SupportedVector& y) {
  Complex s(0.0, 0.0);
  size_t i = 0, j = 0;
  while (i < x.support().size() && j < y.support().size()) {
    if (x.support()[i] < y.support()[j]) ++i;
    else if (x.support()[i] > y.support()[j]) ++j;
    else s += x.amplitudes()[i++] * std::conj(y.amplitudes()[j++]);
  }
  return s;
}

// ---------------------------------------------------------------------------
// OperatorModel construction

OperatorModel::OperatorModel(DenseOp op) : v_(std::move(op)) {
  const Matrix& m = std::get<DenseOp>(v_).matrix;
  if (m.rows() != m.cols())
    throw PreconditionError("dense model: matrix must be square");
  if (m.rows() < 1) throw PreconditionError("dense model: dimension must be >= 1");
  if (m.rows() > kMaxDenseDim)
    throw PreconditionError("dense model: dimension " + std::to_string(m.rows()) +
                            " exceeds the supported maximum " + std::to_string(kMaxDenseDim));
  if (!m.allFinite()) throw PreconditionError("dense model: non-finite entries");
}

OperatorModel::OperatorModel(WeightedShiftOp op) : v_(std::move(op)) {
  std::get<WeightedShiftOp>(v_).weights.validate();
}

OperatorModel::OperatorModel(DiagonalOp op) : v_(std::move(op)) {
  const auto& d = std::get<DiagonalOp>(v_);
  for (const Complex& e : d.prefix) {
    if (!std::isfinite(e.real()) || !std::isfinite(e.imag()))
      throw PreconditionError("diagonal model: non-finite entry");
  }
  if (!std::isfinite(d.tail.real()) || !std::isfinite(d.tail.imag()))
    throw PreconditionError("diagonal model: non-finite tail");
}

OperatorModel::OperatorModel(DirectSumOp op) : v_(std::move(op)) {
  const auto& sum = std::get<DirectSumOp>(v_);
  if (sum.components.empty())
    throw PreconditionError("direct sum: needs at least one component");
  for (size_t i = 0; i + 1 < sum.components.size(); ++i) {
    if (!sum.components[i].dim()) {
      throw UnsupportedVariantError(
          "direct sum: only the final component may be infinite-dimensional");
    }
  }
}

bool DirectSumOp::operator==(const DirectSumOp& o) const {
  return components == o.components;
}

std::optional<std::int64_t> OperatorModel::dim() const {
  return std::visit(
      [](const auto& op) -> std::optional<std::int64_t> {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, DenseOp>) {
          return op.matrix.rows();
        } else if constexpr (std::is_same_v<T, DirectSumOp>) {
          std::int64_t total = 0;
          for (const auto& c : op.components) {
            auto d = c.dim();
            if (!d) return std::nullopt;
            total += *d;
          }
          return total;
        } else {
          return std::nullopt;
        }
      },
      v_);
}

Matrix OperatorModel::to_dense() const {
  auto d = dim();
  if (!d)
    throw UnsupportedVariantError("to_dense: model acts on an infinite-dimensional space");
  if (*d > kMaxDenseDim)
    throw PreconditionError("to_dense: total dimension exceeds " +
                            std::to_string(kMaxDenseDim));
  if (auto* dense = std::get_if<DenseOp>(&v_)) return dense->matrix;
  const auto& sum = std::get<DirectSumOp>(v_);
  Matrix m = Matrix::Zero(*d, *d);
  std::int64_t offset = 0;
  for (const auto& c : sum.components) {
    Matrix block = c.to_dense();
    m.block(offset, offset, block.rows(), block.cols()) = block;
    offset += block.rows();
  }
  return m;
}

// ---------------------------------------------------------------------------
// apply / adjoint_apply

SupportedVector apply(const OperatorModel& t, const SupportedVector& x) {
  return std::visit(
      [&](const auto& op) -> SupportedVector {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, DenseOp>) {
          const auto dim = op.matrix.rows();
          require_probe_fits(x, dim, "dense apply");
          return SupportedVector::from_dense(op.matrix * x.to_dense(dim));
        } else if constexpr (std::is_same_v<T, WeightedShiftOp>) {
          std::vector<std::int64_t> support;
          std::vector<Complex> amps;
          for (size_t i = 0; i < x.support().size(); ++i) {
            std::int64_t k = x.support()[i];
            support.push_back(k + 1);
            amps.push_back(x.amplitudes()[i] * op.weights.weight(k));
          }
          return SupportedVector(std::move(support), std::move(amps));
        } else if constexpr (std::is_same_v<T, DiagonalOp>) {
          std::vector<Complex> amps;
          for (size_t i = 0; i < x.support().size(); ++i)
            amps.push_back(x.amplitudes()[i] * op.entry(x.support()[i]));
          return SupportedVector(x.support(), std::move(amps));
        } else {
          return apply_direct_sum(op, x, [](const OperatorModel& c, const SupportedVector& v) {
            return apply(c, v);
          });
        }
      },
      t.variant());
}

SupportedVector adjoint_apply(const OperatorModel& t, const SupportedVector& x) {
  return std::visit(
      [&](const auto& op) -> SupportedVector {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, DenseOp>) {
          const auto dim = op.matrix.rows();
          require_probe_fits(x, dim, "dense adjoint apply");
          return SupportedVector::from_dense(op.matrix.adjoint() * x.to_dense(dim));
        } else if constexpr (std::is_same_v<T, WeightedShiftOp>) {
          std::vector<std::int64_t> support;
          std::vector<Complex> amps;
          for (size_t i = 0; i < x.support().size(); ++i) {
            std::int64_t k = x.support()[i];
            if (k == 1) continue;  // e_1 is annihilated
            support.push_back(k - 1);
            amps.push_back(x.amplitudes()[i] * op.weights.weight(k - 1));
          }
          return SupportedVector(std::move(support), std::move(amps));
        } else if constexpr (std::is_same_v<T, DiagonalOp>) {
          std::vector<Complex> amps;
          for (size_t i = 0; i < x.support().size(); ++i)
            amps.push_back(x.amplitudes()[i] * std::conj(op.entry(x.support()[i])));
          return SupportedVector(x.support(), std::move(amps));
        } else {
          return apply_direct_sum(op, x, [](const OperatorModel& c, const SupportedVector& v) {
            return adjoint_apply(c, v);
          });
        }
      },
      t.variant());
}

// ---------------------------------------------------------------------------
// orbit_norms

std::vector<double> orbit_norms(const OperatorModel& t, const SupportedVector& x,
                                std::int64_t n_max) {
  if (n_max < 0 || n_max > (std::int64_t(1) << 22))
    throw OutOfRangeError("orbit_norms: horizon out of range");
  return std::visit(
      [&](const auto& op) -> std::vector<double> {
        using T = std::decay_t<decltype(op)>;
        std::vector<double> out;
        out.reserve(size_t(n_max + 1));
        if constexpr (std::is_same_v<T, DenseOp>) {
          const auto dim = op.matrix.rows();
          require_probe_fits(x, dim, "orbit_norms");
          Vector v = x.to_dense(dim);
          out.push_back(v.squaredNorm());
          for (std::int64_t n = 1; n <= n_max; ++n) {
            v = op.matrix * v;
            out.push_back(v.squaredNorm());
          }
          return out;
        } else if constexpr (std::is_same_v<T, WeightedShiftOp>) {
          // T^n x = sum_k a_k (prod_{m=k}^{k+n-1} w_m) e_{k+n}: supports stay
          // disjoint, so the squared norm is a plain sum of squared products.
          std::vector<double> weights =
              op.weights.materialize(x.max_index() + n_max);
          std::vector<ScaledProduct> prods(x.support().size(), ScaledProduct::one());
          for (std::int64_t n = 0; n <= n_max; ++n) {
            double s = 0.0;
            for (size_t i = 0; i < x.support().size(); ++i)
              s += std::norm(x.amplitudes()[i]) * prods[i].squared_value();
            out.push_back(s);
            if (n == n_max) break;
            for (size_t i = 0; i < x.support().size(); ++i)
              prods[i].multiply(weights[size_t(x.support()[i] + n - 1)]);
          }
          return out;
        } else if constexpr (std::is_same_v<T, DiagonalOp>) {
          std::vector<ScaledProduct> prods(x.support().size(), ScaledProduct::one());
          for (std::int64_t n = 0; n <= n_max; ++n) {
            double s = 0.0;
            for (size_t i = 0; i < x.support().size(); ++i)
              s += std::norm(x.amplitudes()[i]) * prods[i].squared_value();
            out.push_back(s);
            if (n == n_max) break;
            for (size_t i = 0; i < x.support().size(); ++i)
              prods[i].multiply(std::abs(op.entry(x.support()[i])));
          }
          return out;
        } else {
          out.assign(size_t(n_max + 1), 0.0);
          auto parts = layout(op);
          if (!parts.empty() && parts.back().dim) {
            std::int64_t total = parts.back().offset + *parts.back().dim;
            require_probe_fits(x, total, "orbit_norms");
          }
          for (const auto& part : parts) {
            std::vector<std::int64_t> local_support;
            std::vector<Complex> local_amps;
            for (size_t i = 0; i < x.support().size(); ++i) {
              std::int64_t k = x.support()[i];
              if (k <= part.offset) continue;
              if (part.dim && k > part.offset + *part.dim) continue;
              local_support.push_back(k - part.offset);
              local_amps.push_back(x.amplitudes()[i]);
            }
            if (local_support.empty()) continue;
            auto sub = orbit_norms(*part.component,
                                   SupportedVector(local_support, local_amps), n_max);
            for (size_t n = 0; n < sub.size(); ++n) out[n] += sub[n];
          }
          return out;
        }
      },
      t.variant());
}

// ---------------------------------------------------------------------------
// norms and power norms

double model_norm(const OperatorModel& t) {
  return std::visit(
      [&](const auto& op) -> double {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, DenseOp>) {
          return operator_norm(op.matrix);
        } else if constexpr (std::is_same_v<T, WeightedShiftOp>) {
          return op.weights.sup_weight();
        } else if constexpr (std::is_same_v<T, DiagonalOp>) {
          double sup = std::abs(op.tail);
          for (const Complex& e : op.prefix) sup = std::max(sup, std::abs(e));
          return sup;
        } else {
          double sup = 0.0;
          for (const auto& c : op.components) sup = std::max(sup, model_norm(c));
          return sup;
        }
      },
      t.variant());
}

namespace {

double log_power_norm(const OperatorModel& t, std::int64_t n) {
  if (n == 0) return 0.0;
  return std::visit(
      [&](const auto& op) -> double {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, DenseOp>) {
          auto p = scaled_matrix_power(op.matrix, n);
          double norm = operator_norm(p.m);
          if (norm == 0.0) return -std::numeric_limits<double>::infinity();
          return p.log_scale + std::log(norm);
        } else if constexpr (std::is_same_v<T, WeightedShiftOp>) {
          const std::int64_t horizon = window_horizon(op.weights, n);
          WeightStream stream(op.weights);
          std::vector<ScaledProduct> prefix(size_t(horizon + 1));
          prefix[0] = ScaledProduct::one();
          for (std::int64_t i = 1; i <= horizon; ++i) {
            prefix[size_t(i)] = prefix[size_t(i - 1)];
            prefix[size_t(i)].multiply(stream.next());
          }
          double best_log = -std::numeric_limits<double>::infinity();
          for (std::int64_t i = 0; i + n <= horizon; ++i) {
            double lg = prefix[size_t(i + n)].log_value() - prefix[size_t(i)].log_value();
            best_log = std::max(best_log, lg);
          }
          return best_log;
        } else if constexpr (std::is_same_v<T, DiagonalOp>) {
          double sup = std::abs(op.tail);
          for (const Complex& e : op.prefix) sup = std::max(sup, std::abs(e));
          if (sup == 0.0) return -std::numeric_limits<double>::infinity();
          return double(n) * std::log(sup);
        } else {
          double sup = -std::numeric_limits<double>::infinity();
          for (const auto& c : op.components) sup = std::max(sup, log_power_norm(c, n));
          return sup;
        }
      },
      t.variant());
}

}  // namespace

double power_norm_estimate(const OperatorModel& t, std::int64_t n) {
  if (n < 0) throw OutOfRangeError("power_norm_estimate: n must be >= 0");
  if (n == 0) return 1.0;
  return std::visit(
      [&](const auto& op) -> double {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, DenseOp>) {
          auto p = scaled_matrix_power(op.matrix, n);
          double norm = operator_norm(p.m);
          if (norm == 0.0) return 0.0;
          double lg = p.log_scale + std::log(norm);
          return std::exp(lg);
        } else if constexpr (std::is_same_v<T, WeightedShiftOp>) {
          return window_products(op.weights, n).sup;
        } else if constexpr (std::is_same_v<T, DiagonalOp>) {
          double sup = std::abs(op.tail);
          for (const Complex& e : op.prefix) sup = std::max(sup, std::abs(e));
          ScaledProduct p = ScaledProduct::one();
          for (std::int64_t i = 0; i < n; ++i) p.multiply(sup);
          return p.value();
        } else {
          double sup = 0.0;
          for (const auto& c : op.components)
            sup = std::max(sup, power_norm_estimate(c, n));
          return sup;
        }
      },
      t.variant());
}

double power_floor_estimate(const OperatorModel& t, std::int64_t n) {
  if (n < 0) throw OutOfRangeError("power_floor_estimate: n must be >= 0");
  if (n == 0) return 1.0;
  return std::visit(
      [&](const auto& op) -> double {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, DenseOp>) {
          auto p = scaled_matrix_power(op.matrix, n);
          double sigma = min_singular_value(p.m);
          if (sigma == 0.0) return 0.0;
          return std::exp(p.log_scale + std::log(sigma));
        } else if constexpr (std::is_same_v<T, WeightedShiftOp>) {
          return window_products(op.weights, n).inf;
        } else if constexpr (std::is_same_v<T, DiagonalOp>) {
          double inf = std::abs(op.tail);
          for (const Complex& e : op.prefix) inf = std::min(inf, std::abs(e));
          if (inf == 0.0) return 0.0;
          ScaledProduct p = ScaledProduct::one();
          for (std::int64_t i = 0; i < n; ++i) p.multiply(inf);
          return p.value();
        } else {
          double inf = std::numeric_limits<double>::infinity();
          for (const auto& c : op.components)
            inf = std::min(inf, power_floor_estimate(c, n));
          return inf;
        }
      },
      t.variant());
}

// ---------------------------------------------------------------------------
// spectral radius (Gelfand along doubling powers)

SpectralRadiusEstimate spectral_radius(const OperatorModel& t) {
  return std::visit(
      [&](const auto& op) -> SpectralRadiusEstimate {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, DenseOp>) {
          constexpr int kLevels = 10;  // powers up to 2^10
          std::vector<double> g;       // g_k = log ||T^(2^k)|| / 2^k
          Matrix b = op.matrix;
          double log_norm = 0.0;  // log ||T^(2^k)|| accumulated
          {
            double norm = operator_norm(b);
            if (norm == 0.0) return SpectralRadiusEstimate{0.0, 0.0};
            log_norm = std::log(norm);
            b /= norm;
            g.push_back(log_norm);
          }
          std::vector<double> extrapolated;
          for (int k = 1; k <= kLevels; ++k) {
            b = b * b;
            double norm = operator_norm(b);
            if (norm == 0.0) return SpectralRadiusEstimate{0.0, 0.0};  // nilpotent
            log_norm = 2.0 * log_norm + std::log(norm);
            b /= norm;
            g.push_back(log_norm / double(std::int64_t(1) << k));
            if (k >= 2) {
              double L = 4.0 * g[size_t(k)] - 4.0 * g[size_t(k - 1)] + g[size_t(k - 2)];
              extrapolated.push_back(std::exp(L));
            }
          }
          double value = extrapolated.back();
          double prev = extrapolated[extrapolated.size() - 2];
          double raw = std::exp(g.back());
          double spread = std::abs(value - prev) + std::abs(value - raw) / 64.0;
          return SpectralRadiusEstimate{value, spread};
        } else if constexpr (std::is_same_v<T, DiagonalOp>) {
          double sup = std::abs(op.tail);
          for (const Complex& e : op.prefix) sup = std::max(sup, std::abs(e));
          return SpectralRadiusEstimate{sup, 0.0};
        } else if constexpr (std::is_same_v<T, DirectSumOp>) {
          SpectralRadiusEstimate est;
          for (const auto& c : op.components) {
            auto sub = spectral_radius(c);
            est.value = std::max(est.value, sub.value);
            est.spread = std::max(est.spread, sub.spread);
          }
          return est;
        } else {
          throw UnsupportedVariantError(
              "spectral_radius: weighted shifts need the power-norm route");
        }
      },
      t.variant());
}

// ---------------------------------------------------------------------------
// class predicates

QuasinormalCheck is_quasinormal(const OperatorModel& t, double tol) {
  const double scale = std::pow(model_norm(t), 3);
  double residual = std::visit(
      [&](const auto& op) -> double {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, DenseOp>) {
          Matrix gram = op.matrix.adjoint() * op.matrix;
          return operator_norm(op.matrix * gram - gram * op.matrix);
        } else if constexpr (std::is_same_v<T, WeightedShiftOp>) {
          // the commutator sends e_k to w_k (w_k^2 - w_{k+1}^2) e_{k+1}
          std::int64_t horizon = window_horizon(op.weights, 2) + 2;
          std::vector<double> w = op.weights.materialize(horizon + 1);
          double sup = 0.0;
          for (std::int64_t k = 0; k < horizon; ++k)
            sup = std::max(sup, w[size_t(k)] * std::abs(w[size_t(k)] * w[size_t(k)] -
                                                        w[size_t(k + 1)] * w[size_t(k + 1)]));
          return sup;
        } else if constexpr (std::is_same_v<T, DiagonalOp>) {
          return 0.0;  // normal, commutator vanishes identically
        } else {
          double sup = 0.0;
          for (const auto& c : op.components)
            sup = std::max(sup, is_quasinormal(c, tol).residual);
          return sup;
        }
      },
      t.variant());
  return QuasinormalCheck{residual <= tol * scale, residual};
}

NormaloidCheck is_normaloid(const OperatorModel& t, double tol, std::int64_t n_max) {
  const double norm = model_norm(t);
  if (norm == 0.0) return NormaloidCheck{true, 1.0};
  const double log_norm = std::log(norm);
  double min_ratio_log = 0.0;
  std::vector<std::int64_t> samples;
  for (std::int64_t n = 1; n <= std::min<std::int64_t>(n_max, 16); ++n)
    samples.push_back(n);
  for (std::int64_t n = 32; n <= n_max; n *= 2) samples.push_back(n);
  for (std::int64_t n : samples) {
    double lg = log_power_norm(t, n) - double(n) * log_norm;
    min_ratio_log = std::min(min_ratio_log, lg);
    if (min_ratio_log < std::log(1.0 - std::min(0.5, tol)) - 1.0) break;  // already failed
  }
  double min_ratio = std::exp(min_ratio_log);
  bool verdict = min_ratio >= 1.0 - tol;
  if (std::holds_alternative<DenseOp>(t.variant()) && verdict) {
    auto r = spectral_radius(t);
    verdict = std::abs(r.value - norm) <= std::max(tol * norm, 2.0 * r.spread);
  }
  return NormaloidCheck{verdict, min_ratio};
}

// ---------------------------------------------------------------------------
// probes

std::vector<SupportedVector> default_probes(const OperatorModel& t, std::uint64_t seed) {
  std::vector<SupportedVector> probes;
  if (auto d = t.dim()) {
    for (std::int64_t k = 1; k <= *d; ++k) probes.push_back(SupportedVector::basis(k));
    return probes;
  }
  for (std::int64_t k = 1; k <= 16; ++k) probes.push_back(SupportedVector::basis(k));
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int p = 0; p < 8; ++p) {
    size_t count = 1 + size_t(rng() % 6);
    std::vector<std::int64_t> support;
    std::vector<Complex> amps;
    while (support.size() < count) {
      std::int64_t k = 1 + std::int64_t(rng() % 24);
      if (std::find(support.begin(), support.end(), k) == support.end()) {
        support.push_back(k);
        amps.push_back(Complex(normal(rng), normal(rng)));
      }
    }
    probes.push_back(SupportedVector(std::move(support), std::move(amps)));
  }
  return probes;
}

}  // namespace asymptotica
