#include "asymptotica/theorem_checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "asymptotica/power_asymptotics.hpp"
#include "kahan.hpp"

namespace asymptotica {

bool CheckSuite::all_pass() const {
  return std::all_of(items.begin(), items.end(),
                     [](const CheckItem& it) { return it.pass; });
}

const CheckItem* CheckSuite::find(const std::string& name) const {
  for (const CheckItem& it : items) {
    if (it.name == name) return &it;
  }
  return nullptr;
}

namespace {

// Orbits are probed out to T^(2^16); window means use dyadic lengths up to
// 2^13. Composite items report the worst part ratio, where 1.0 is the edge.
constexpr int kLongSquarings = 16;
constexpr int kMeanLog2 = 13;

Matrix repeated_square(const Matrix& t, int squarings) {
  Matrix p = t;
  for (int i = 0; i < squarings; ++i) p = p * p;
  return p;
}

double herm_norm(const Matrix& m) { return hermitian_norm(HermitianMatrix(m)); }

CheckItem make_item(std::string name, double residual, double tolerance) {
  CheckItem it;
  it.name = std::move(name);
  it.residual = residual;
  it.tolerance = tolerance;
  it.pass = residual <= tolerance;
  return it;
}

CheckItem vacuous_item(std::string name, double tolerance) {
  return make_item(std::move(name), 0.0, tolerance);
}

double ratio_of(double measured, double allowed) {
  if (measured <= 0.0) return 0.0;
  return measured / std::max(allowed, 1e-300);
}

void require_suite_inputs(const Matrix& t, const PsdMatrix& limit, double tol) {
  if (t.rows() != t.cols()) {
    throw PreconditionError("check suite needs a square operator");
  }
  if (limit.dim() != t.rows()) {
    throw PreconditionError("limit dimension does not match the operator");
  }
  if (!(tol > 0.0) || !std::isfinite(tol)) {
    throw PreconditionError("check suite tolerance must be positive");
  }
}

// Shared precomputations for one (operator, limit candidate) pair.
struct SuiteContext {
  Matrix t;
  Matrix q;
  Matrix qsqrt;
  Matrix t_long;  // T^(2^16)
  RealVector eigs;
  Matrix vecs;
  double nq = 0.0;    // ||limit||
  double nt = 0.0;    // ||T||
  double beta = 1.0;  // measured sup of power norms
  double scale = 1.0; // max(1, beta^2)
  double tol = 0.0;
  Eigen::Index dim = 0;
};

SuiteContext make_context(const Matrix& t, const PsdMatrix& limit,
                          double beta_hat, double tol) {
  SuiteContext ctx;
  ctx.t = t;
  ctx.q = limit.matrix();
  ctx.qsqrt = psd_sqrt(limit).matrix();
  ctx.t_long = repeated_square(t, kLongSquarings);
  const EigenDecomposition eig = hermitian_eig(limit.hermitian());
  ctx.eigs = eig.eigenvalues;
  ctx.vecs = eig.eigenvectors;
  ctx.nq = hermitian_norm(limit.hermitian());
  ctx.nt = operator_norm(t);
  ctx.beta = beta_hat;
  ctx.scale = std::max(1.0, beta_hat * beta_hat);
  ctx.tol = tol;
  ctx.dim = t.rows();
  return ctx;
}

// ||T^k x||^2 for k = 0..len.
std::vector<double> orbit_squares(const Matrix& t, Vector x, std::int64_t len) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(len) + 1);
  out.push_back(x.squaredNorm());
  for (std::int64_t k = 0; k < len; ++k) {
    x = t * x;
    out.push_back(x.squaredNorm());
  }
  return out;
}

double window_mean(const std::vector<double>& s, std::int64_t j,
                   std::int64_t n) {
  detail::KahanSum acc;
  for (std::int64_t k = j; k < j + n; ++k) {
    acc.add(s[static_cast<std::size_t>(k)]);
  }
  return acc.value() / static_cast<double>(n);
}

CheckItem fixed_point_item(const SuiteContext& ctx, double allowed) {
  const double res = herm_norm(ctx.t.adjoint() * ctx.q * ctx.t - ctx.q);
  return make_item("fixed_point_under_conjugation", res, allowed);
}

CheckItem bounded_item(const SuiteContext& ctx) {
  const double top = ctx.eigs(ctx.eigs.size() - 1);
  const double over = std::max(0.0, top - ctx.beta * ctx.beta);
  return make_item("limit_bounded_by_power_norms", over,
                   100.0 * ctx.tol * ctx.scale);
}

CheckItem norm_floor_item(const SuiteContext& ctx) {
  const std::string name = "unit_norm_floor_when_nonzero";
  if (ctx.nq <= 100.0 * ctx.tol * ctx.scale) return vacuous_item(name, 100.0 * ctx.tol);
  const double res =
      std::max(std::max(0.0, 1.0 - ctx.nq), std::max(0.0, 1.0 - ctx.nt));
  return make_item(name, res, 100.0 * ctx.tol);
}

CheckItem annihilation_item(const SuiteContext& ctx) {
  const std::string name = "annihilation_collapses_limit";
  const double at = operator_norm(ctx.q * ctx.t);
  const double ta = operator_norm(ctx.t * ctx.q);
  const double trigger = ctx.tol * ctx.scale;
  const double allowed = 100.0 * ctx.tol * ctx.scale;
  if (std::min({at, ta, ctx.nq}) > trigger) return vacuous_item(name, allowed);
  return make_item(name, std::max({at, ta, ctx.nq}), allowed);
}

CheckItem commuting_forward_item(const SuiteContext& ctx) {
  const std::string name = "commuting_limit_is_idempotent";
  const double comm = operator_norm(ctx.q * ctx.t - ctx.t * ctx.q);
  const double allowed = 100.0 * ctx.tol * ctx.scale;
  if (comm > ctx.tol * ctx.scale) return vacuous_item(name, allowed);
  const double idem = herm_norm(ctx.q - ctx.q * ctx.q);
  return make_item(name, idem, allowed);
}

// When the limit is idempotent, powers of T nearly commute with it: the
// commutator is bounded by the power-norm excess, it dies along the orbit,
// and a nonzero limit has norm exactly one.
CheckItem idempotent_bounds_item(const SuiteContext& ctx,
                                 bool check_commutator_dies) {
  const std::string name = "idempotent_limit_commutator_bounds";
  const double idem = herm_norm(ctx.q - ctx.q * ctx.q);
  if (idem > ctx.tol * ctx.scale) return vacuous_item(name, 1.0);
  const double slack = 100.0 * ctx.tol * ctx.scale * ctx.scale;
  const double excess = std::max(0.0, ctx.beta * ctx.beta - 1.0);
  double worst = 0.0;
  Matrix p = ctx.t;
  for (int s = 0; s < 6; ++s) {
    const Matrix comm = ctx.q * p - p * ctx.q;
    for (Eigen::Index i = 0; i < ctx.dim; ++i) {
      const double lhs = comm.col(i).squaredNorm();
      const double rhs = excess * ctx.q.col(i).squaredNorm() + slack;
      worst = std::max(worst, ratio_of(lhs, rhs));
    }
    if (s < 5) p = p * p;
  }
  if (check_commutator_dies) {
    const double tail =
        operator_norm(ctx.q * ctx.t_long - ctx.t_long * ctx.q);
    worst = std::max(worst, ratio_of(tail, 1000.0 * ctx.tol * ctx.scale));
  }
  if (ctx.nq > 100.0 * ctx.tol * ctx.scale) {
    worst = std::max(
        worst, ratio_of(std::abs(ctx.nq - 1.0), 100.0 * ctx.tol * ctx.scale));
  }
  return make_item(name, worst, 1.0);
}

CheckItem isometry_iff_item(const SuiteContext& ctx) {
  const std::string name = "full_limit_iff_isometry";
  const Eigen::Index d = ctx.dim;
  const Matrix id = Matrix::Identity(d, d);
  const double allowed = 100.0 * ctx.tol * ctx.scale;
  const double iso_r = herm_norm(ctx.t.adjoint() * ctx.t - id);
  const double qi_r = herm_norm(ctx.q - id);
  const double qb_r = herm_norm(ctx.q - ctx.beta * ctx.beta * id);
  const bool iso = iso_r <= allowed;
  const bool qi = qi_r <= allowed;
  const bool qb = qb_r <= allowed;
  if (iso == qi && qi == qb) return vacuous_item(name, allowed);
  double res = 1e300;
  for (const auto& [flag, raw] :
       {std::pair{iso, iso_r}, std::pair{qi, qi_r}, std::pair{qb, qb_r}}) {
    if (!flag) res = std::min(res, raw);
  }
  return make_item(name, res, allowed);
}

CheckItem positive_commuting_item(const SuiteContext& ctx) {
  const std::string name = "positive_commuting_limit_is_identity";
  const double trigger = ctx.tol * ctx.scale;
  const double allowed = 100.0 * ctx.tol * ctx.scale;
  if (ctx.eigs(0) <= 100.0 * ctx.tol * ctx.scale) {
    return vacuous_item(name, allowed);
  }
  const Matrix id = Matrix::Identity(ctx.dim, ctx.dim);
  const double comm = operator_norm(ctx.q * ctx.t - ctx.t * ctx.q);
  const double idem = herm_norm(ctx.q - ctx.q * ctx.q);
  const double qi = herm_norm(ctx.q - id);
  const double iso = herm_norm(ctx.t.adjoint() * ctx.t - id);
  if (std::min({comm, idem, qi, iso}) > trigger) {
    return vacuous_item(name, allowed);
  }
  return make_item(name, std::max({comm, idem, qi, iso}), allowed);
}

// A strictly positive limit forces uniformly persistent orbits; a limit with
// kernel directions must let those orbits die in mean.
CheckItem bounded_below_item(const SuiteContext& ctx) {
  const std::string name = "positive_limit_iff_power_bounded_below";
  if (ctx.eigs(0) > 100.0 * ctx.tol * ctx.scale) {
    double fmin = min_singular_value(ctx.t_long);
    Matrix p = ctx.t;
    for (int s = 0; s < 7; ++s) {
      fmin = std::min(fmin, min_singular_value(p));
      if (s < 6) p = p * p;
    }
    const double floor =
        ctx.eigs(0) / std::max(ctx.nq, 1e-300) - 100.0 * ctx.tol * ctx.scale;
    return make_item(name, ratio_of(floor, fmin * fmin), 1.0);
  }
  const Vector v = ctx.vecs.col(0);
  const double death = (ctx.t_long * v).squaredNorm();
  return make_item(name, ratio_of(death, 1000.0 * ctx.tol * ctx.scale), 1.0);
}

// Kernel directions have vanishing orbits; every other eigendirection keeps
// ||T^n v||^2 >= eig / ||limit|| because the form is conserved along orbits.
// with_norm_means additionally demands the running mean of plain orbit norms
// of kernel directions to decay across dyadic windows.
CheckItem kernel_item(const SuiteContext& ctx, bool with_norm_means) {
  const std::string name = "kernel_is_vanishing_orbits";
  // An effectively zero limit has only kernel directions; otherwise split the
  // spectrum relative to the top of the limit.
  const bool all_kernel = ctx.nq <= 100.0 * ctx.tol * ctx.scale;
  const double cut = ctx.tol * ctx.nq;
  double worst = 0.0;
  for (Eigen::Index k = 0; k < ctx.dim; ++k) {
    const Vector v = ctx.vecs.col(k);
    if (all_kernel || ctx.eigs(k) <= cut) {
      const double death = (ctx.t_long * v).squaredNorm();
      worst = std::max(worst,
                       ratio_of(death, 1000.0 * ctx.tol * ctx.scale));
      if (with_norm_means) {
        const std::int64_t len = std::int64_t(1) << 12;
        std::vector<double> norms;
        norms.reserve(static_cast<std::size_t>(len));
        Vector x = v;
        for (std::int64_t i = 0; i < len; ++i) {
          norms.push_back(x.norm());
          x = ctx.t * x;
        }
        const double m10 = window_mean(norms, 0, std::int64_t(1) << 10);
        const double m11 = window_mean(norms, 0, std::int64_t(1) << 11);
        const double m12 = window_mean(norms, 0, len);
        const double allowed = std::max(0.6 * std::max(m10, m11),
                                        100.0 * ctx.tol * ctx.beta);
        worst = std::max(worst, ratio_of(m12, allowed));
      }
    } else {
      double fmin = (ctx.t_long * v).squaredNorm();
      Vector x = v;
      for (int n = 0; n < 64; ++n) {
        x = ctx.t * x;
        fmin = std::min(fmin, x.squaredNorm());
      }
      const double floor = ctx.eigs(k) / std::max(ctx.nq, 1e-300) -
                           100.0 * ctx.tol * ctx.scale;
      worst = std::max(worst, ratio_of(floor, fmin));
    }
  }
  return make_item(name, worst, 1.0);
}

}  // namespace

CheckSuite contraction_limit_checks(const Matrix& t, const PsdMatrix& limit,
                                    double tol) {
  require_suite_inputs(t, limit, tol);
  if (operator_norm(t) > 1.0 + 1e-12) {
    throw NotAContractionError("contraction check suite needs ||T|| <= 1");
  }
  SuiteContext ctx = make_context(t, limit, 1.0, tol);
  const Eigen::Index d = ctx.dim;
  const Matrix id = Matrix::Identity(d, d);
  CheckSuite suite;
  suite.subject = "power_gram_limit";

  suite.items.push_back(make_item(
      "power_grams_converge_to_limit",
      herm_norm(ctx.t_long.adjoint() * ctx.t_long - ctx.q), 100.0 * tol));

  const double below = std::max(0.0, -ctx.eigs(0));
  const double above = std::max(0.0, ctx.eigs(d - 1) - 1.0);
  suite.items.push_back(make_item("limit_between_zero_and_identity",
                                  std::max(below, above), tol));

  suite.items.push_back(fixed_point_item(ctx, 100.0 * tol));

  if (ctx.nq <= 100.0 * tol) {
    suite.items.push_back(vacuous_item("unit_norm_when_nonzero", 100.0 * tol));
  } else {
    suite.items.push_back(make_item(
        "unit_norm_when_nonzero",
        std::max(std::abs(ctx.nq - 1.0), std::abs(ctx.nt - 1.0)), 100.0 * tol));
  }

  suite.items.push_back(annihilation_item(ctx));

  {
    // Both directions: a commuting limit is a projection and conversely.
    const std::string name = "commuting_iff_idempotent";
    const double comm = operator_norm(ctx.q * ctx.t - ctx.t * ctx.q);
    const double idem = herm_norm(ctx.q - ctx.q * ctx.q);
    const double allowed = 100.0 * tol;
    if (std::min(comm, idem) > tol) {
      suite.items.push_back(vacuous_item(name, allowed));
    } else {
      suite.items.push_back(make_item(name, std::max(comm, idem), allowed));
    }
  }

  suite.items.push_back(make_item(
      "defect_orbits_vanish",
      std::max(operator_norm((id - ctx.q) * ctx.t_long),
               operator_norm((id - ctx.qsqrt) * ctx.t_long)),
      100.0 * tol));

  suite.items.push_back(make_item(
      "limit_weighted_orbit_norms_match_form",
      herm_norm(ctx.t_long.adjoint() * ctx.q * ctx.q * ctx.t_long - ctx.q),
      100.0 * tol));

  {
    const KernelCheck kc = kernel_of_limit(limit, t, tol);
    CheckItem it;
    it.name = "kernel_is_vanishing_orbits";
    it.pass = kc.orbits_vanish && kc.complement_persists;
    it.residual = std::max(kc.worst_kernel_orbit,
                           std::max(0.0, 1.0 - kc.worst_complement_ratio));
    it.tolerance = 1e-6;
    suite.items.push_back(std::move(it));
  }

  {
    // Orbit norms are conserved exactly on the unit eigenspace of the limit
    // and drop to the eigenvalue elsewhere.
    const std::string name = "norm_preserving_directions_match_unit_eigenspace";
    const double band = 1000.0 * tol;
    double worst = 0.0;
    for (Eigen::Index k = 0; k < d; ++k) {
      const Vector v = ctx.vecs.col(k);
      if (ctx.eigs(k) >= 1.0 - band) {
        double dev = std::abs((ctx.t_long * v).squaredNorm() - 1.0);
        Vector x = v;
        for (int n = 0; n < 32; ++n) {
          x = t * x;
          dev = std::max(dev, std::abs(x.squaredNorm() - 1.0));
        }
        worst = std::max(worst, ratio_of(dev, 2.0 * band));
      } else {
        const double tail = (ctx.t_long * v).squaredNorm();
        worst = std::max(
            worst, ratio_of(std::max(0.0, tail - ctx.eigs(k) - band),
                            2.0 * band));
      }
    }
    suite.items.push_back(make_item(name, worst, 1.0));
  }

  {
    // Positivity of the limit pins a uniform lower bound on every orbit;
    // a kernel direction kills it.
    const std::string name = "positive_limit_iff_uniform_orbit_floor";
    if (ctx.eigs(0) > 100.0 * tol) {
      double fmin = 1e300;
      Matrix p = t;
      for (int s = 0; s < 7; ++s) {
        fmin = std::min(fmin, min_singular_value(p));
        if (s < 6) p = p * p;
      }
      suite.items.push_back(make_item(
          name, std::max(0.0, ctx.eigs(0) - fmin * fmin), 100.0 * tol));
    } else {
      const Vector v = ctx.vecs.col(0);
      suite.items.push_back(
          make_item(name, (ctx.t_long * v).squaredNorm(), 1000.0 * tol));
    }
  }

  return suite;
}

CheckSuite cesaro_limit_checks(const Matrix& t, const PsdMatrix& limit,
                               double beta_hat, double tol) {
  require_suite_inputs(t, limit, tol);
  if (!(beta_hat > 0.0) || !std::isfinite(beta_hat)) {
    throw PreconditionError("beta_hat must be positive and finite");
  }
  if (beta_hat + 1e-9 < operator_norm(t)) {
    throw PreconditionError("beta_hat must dominate the operator norm");
  }
  SuiteContext ctx = make_context(t, limit, beta_hat, tol);
  const Eigen::Index d = ctx.dim;
  const Matrix id = Matrix::Identity(d, d);
  const double scale = ctx.scale;
  CheckSuite suite;
  suite.subject = "mean_limit";

  suite.items.push_back(bounded_item(ctx));
  suite.items.push_back(fixed_point_item(ctx, 100.0 * tol * scale));

  {
    // Shift-invariance of the mean: windows started at any offset j share
    // the limit form value, and dyadic window means approach it.
    const std::string name = "window_means_converge_to_form";
    const std::int64_t n_top = std::int64_t(1) << kMeanLog2;
    const std::int64_t offset = 7;
    double worst = 0.0;
    for (Eigen::Index i = 0; i < std::min<Eigen::Index>(d, 8); ++i) {
      const Vector e = id.col(i);
      const std::vector<double> sq = orbit_squares(t, e, n_top + offset);
      const double target = (e.adjoint() * ctx.q * e)(0, 0).real();
      for (std::int64_t j : {std::int64_t(0), offset}) {
        double r_prev = 0.0;
        for (int lg = kMeanLog2 - 3; lg < kMeanLog2; ++lg) {
          r_prev = std::max(
              r_prev,
              std::abs(window_mean(sq, j, std::int64_t(1) << lg) - target));
        }
        const double r_top = std::abs(window_mean(sq, j, n_top) - target);
        const double allowed =
            std::max(0.85 * r_prev, 100.0 * tol * scale);
        worst = std::max(worst, ratio_of(r_top, allowed));
      }
    }
    suite.items.push_back(make_item(name, worst, 1.0));
  }

  suite.items.push_back(norm_floor_item(ctx));
  suite.items.push_back(annihilation_item(ctx));
  suite.items.push_back(commuting_forward_item(ctx));
  suite.items.push_back(idempotent_bounds_item(ctx, true));

  {
    // In the norm-one regime the defect of the limit annihilates the tail of
    // every orbit in mean.
    const std::string name = "defect_vanishes_when_norm_one";
    const bool near_one = std::abs(ctx.nq - 1.0) <= 100.0 * tol * scale;
    if (!near_one || ctx.nq <= 100.0 * tol * scale) {
      suite.items.push_back(vacuous_item(name, 1.0));
    } else {
      const std::int64_t start = std::int64_t(1) << 12;
      const std::int64_t window = std::int64_t(1) << 10;
      double worst = 0.0;
      for (Eigen::Index i = 0; i < std::min<Eigen::Index>(d, 8); ++i) {
        Vector x = id.col(i);
        detail::KahanSum acc;
        for (std::int64_t k = 0; k < start + window; ++k) {
          if (k >= start) acc.add((x - ctx.q * x).squaredNorm());
          x = t * x;
        }
        const double mean = acc.value() / static_cast<double>(window);
        const double allowed =
            std::max(1e-6, 1000.0 * tol) * scale * scale;
        worst = std::max(worst, ratio_of(mean, allowed));
      }
      suite.items.push_back(make_item(name, worst, 1.0));
    }
  }

  {
    // ||Qy||^2 = <(2Q - I)y, y> + ||(I - Q)y||^2 for every y.
    const std::string name = "quadratic_form_identity";
    std::mt19937_64 rng(99);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Vector> probes;
    for (Eigen::Index i = 0; i < d; ++i) probes.push_back(id.col(i));
    for (int r = 0; r < 4; ++r) {
      Vector y(d);
      for (Eigen::Index i = 0; i < d; ++i) {
        y(i) = Complex(gauss(rng), gauss(rng));
      }
      probes.push_back(y.normalized());
    }
    double worst = 0.0;
    for (const Vector& y : probes) {
      const double lhs = (ctx.q * y).squaredNorm();
      const double mid =
          (y.adjoint() * ((2.0 * ctx.q - id) * y))(0, 0).real();
      const double defect = (y - ctx.q * y).squaredNorm();
      worst = std::max(worst, std::abs(lhs - mid - defect));
    }
    suite.items.push_back(
        make_item(name, worst, 1e-10 * std::max(1.0, ctx.nq * ctx.nq)));
  }

  suite.items.push_back(kernel_item(ctx, true));
  suite.items.push_back(isometry_iff_item(ctx));
  suite.items.push_back(positive_commuting_item(ctx));
  suite.items.push_back(bounded_below_item(ctx));

  return suite;
}

CheckSuite phi_limit_checks(const Matrix& t, const PsdMatrix& limit,
                            double beta_hat, double tol) {
  require_suite_inputs(t, limit, tol);
  if (!(beta_hat > 0.0) || !std::isfinite(beta_hat)) {
    throw PreconditionError("beta_hat must be positive and finite");
  }
  if (beta_hat + 1e-9 < operator_norm(t)) {
    throw PreconditionError("beta_hat must dominate the operator norm");
  }
  SuiteContext ctx = make_context(t, limit, beta_hat, tol);
  CheckSuite suite;
  suite.subject = "orbit_functional_limit";
  suite.items.push_back(bounded_item(ctx));
  suite.items.push_back(fixed_point_item(ctx, 100.0 * tol * ctx.scale));
  suite.items.push_back(norm_floor_item(ctx));
  suite.items.push_back(annihilation_item(ctx));
  suite.items.push_back(commuting_forward_item(ctx));
  suite.items.push_back(idempotent_bounds_item(ctx, false));
  suite.items.push_back(kernel_item(ctx, false));
  suite.items.push_back(isometry_iff_item(ctx));
  suite.items.push_back(positive_commuting_item(ctx));
  suite.items.push_back(bounded_below_item(ctx));
  return suite;
}

}  // namespace asymptotica
