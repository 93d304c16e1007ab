// Acceptance gate: every criterion prints one [PASS]/[FAIL] line with its
// pinned tolerances and runtime budget. Exit code 1 when anything fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "asymptotica/banach_envelope.hpp"
#include "asymptotica/errors.hpp"
#include "asymptotica/gallery.hpp"
#include "asymptotica/linalg.hpp"
#include "asymptotica/operator_model.hpp"
#include "asymptotica/power_asymptotics.hpp"
#include "asymptotica/similarity.hpp"
#include "asymptotica/theorem_checks.hpp"
#include "../test_support.hpp"

using namespace asymptotica;

namespace {

struct CriterionResult {
  bool pass = true;
  std::string detail;
};

struct Collector {
  bool pass = true;
  std::string failures;
  double worst = 0.0;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!failures.empty()) failures += "; ";
      failures += what;
    }
  }
  void track(double residual) { worst = std::max(worst, residual); }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2e", v);
  return buf;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

// --- 1: boosted shift -------------------------------------------------------

CriterionResult boosted_shift_envelope_and_means() {
  constexpr double kEnvelopeTol = 1e-6;
  constexpr double kMeanTol = 1e-3;
  constexpr std::int64_t kMeanHorizon = std::int64_t(1) << 12;
  Collector c;
  const OperatorModel t = gallery("beta_shift");  // boost 2, orbit level 4

  const EnvelopeEstimate e1 = vector_envelope(t, SupportedVector::basis(1), 4096);
  c.track(std::abs(e1.phi_minus - 4.0));
  c.track(std::abs(e1.phi_plus - 4.0));
  c.require(std::abs(e1.phi_minus - 4.0) <= kEnvelopeTol &&
                std::abs(e1.phi_plus - 4.0) <= kEnvelopeTol,
            "e1 envelope missed 4: [" + fmt(e1.phi_minus) + ", " +
                fmt(e1.phi_plus) + "]");

  const double mean1 =
      cesaro_quadratic_form(t, SupportedVector::basis(1), kMeanHorizon, 0);
  c.require(std::abs(mean1 - 4.0) <= kMeanTol,
            "e1 mean at 2^12 missed 4: " + fmt(mean1));

  for (std::int64_t i = 2; i <= 16; ++i) {
    const double mean =
        cesaro_quadratic_form(t, SupportedVector::basis(i), kMeanHorizon, 0);
    c.track(std::abs(mean - 1.0));
    c.require(std::abs(mean - 1.0) <= kEnvelopeTol,
              "e" + std::to_string(i) + " mean missed 1: " + fmt(mean));
  }
  return {c.pass, c.pass ? "worst envelope dev " + fmt(c.worst) + " <= 1e-6, e1 mean dev " +
                               fmt(std::abs(mean1 - 4.0)) + " <= 1e-3"
                         : c.failures};
}

// --- 2: jordan block plus identity ------------------------------------------

CriterionResult jordan_mean_limit_and_reconstruction() {
  constexpr double kLimitTol = 1e-8;
  Collector c;
  const OperatorModel t = gallery("jordan_plus_identity");  // boost 5
  const Matrix m = t.to_dense();
  Matrix expected = Matrix::Zero(3, 3);
  expected(2, 2) = 1.0;

  const AsymptoticReport rep = cesaro_asymptotic_limit(m, 1e-9);
  c.require(rep.converged(), "mean limit did not converge");
  const double q_dev = rep.limit ? max_abs_diff(rep.limit->matrix(), expected)
                                 : std::numeric_limits<double>::infinity();
  c.track(q_dev);
  c.require(q_dev <= kLimitTol, "mean limit missed diag(0,0,1) by " + fmt(q_dev));

  const std::vector<SupportedVector> probes = {SupportedVector::basis(1),
                                               SupportedVector::basis(2),
                                               SupportedVector::basis(3)};
  const PhiFormBounds form = phi_asymptotic_form(t, probes, 4096, 1e-6);
  c.require(form.reconstructed.has_value(), "no reconstruction");
  if (form.reconstructed) {
    const double f_dev = max_abs_diff(form.reconstructed->matrix(), expected);
    c.track(f_dev);
    c.require(f_dev <= kLimitTol, "reconstruction missed by " + fmt(f_dev));
  }
  c.require(form.certified_equal_to_q == Verdict::yes,
            "equality with the mean limit not certified");

  const double norm_dev = std::abs(model_norm(t) - 5.0);
  c.require(norm_dev <= kLimitTol, "operator norm missed 5 by " + fmt(norm_dev));
  const double q_norm_dev =
      rep.limit ? std::abs(hermitian_norm(rep.limit->hermitian()) - 1.0) : 1.0;
  c.require(q_norm_dev <= kLimitTol, "limit norm missed 1 by " + fmt(q_norm_dev));
  return {c.pass, c.pass ? "worst limit dev " + fmt(c.worst) + " <= 1e-8, certified yes"
                         : c.failures};
}

// --- 3 & 4: seeded contraction ensemble -------------------------------------

struct ContractionCase {
  Matrix t;
  std::optional<Matrix> expected_limit;
};

std::vector<ContractionCase> contraction_ensemble() {
  std::vector<ContractionCase> out;
  for (int k = 0; k < 10; ++k) {
    const int dim = 4 + (k * 5) % 13;
    out.push_back({test_support::random_contraction(1000 + k, dim, 0.99), {}});
  }
  for (int k = 0; k < 10; ++k) {
    const int dim = 4 + (k * 7) % 13;
    const int unitary_dim = 1 + k % 3;
    const auto mixed =
        test_support::mixed_contraction(2000 + k, unitary_dim, dim - unitary_dim);
    out.push_back({mixed.t, mixed.expected_limit});
  }
  return out;
}

CriterionResult contraction_limits_converge_and_check() {
  constexpr double kIntertwineTol = 1e-6;
  constexpr double kOrderTol = 1e-8;
  Collector c;
  int idx = 0;
  for (const ContractionCase& cs : contraction_ensemble()) {
    const std::string label = "case " + std::to_string(idx++);
    const AsymptoticReport rep = contraction_asymptotic_limit(cs.t, 1e-10, 8192);
    c.require(rep.converged(), label + " did not converge");
    if (!rep.limit) continue;
    const PsdMatrix& a = *rep.limit;

    const double fp = intertwining_residual(cs.t, a.hermitian());
    c.track(fp);
    c.require(fp <= kIntertwineTol, label + " fixed point residual " + fmt(fp));

    const EigenDecomposition eig = hermitian_eig(a.hermitian());
    c.require(eig.eigenvalues.minCoeff() >= -kOrderTol &&
                  eig.eigenvalues.maxCoeff() <= 1.0 + kOrderTol,
              label + " limit not between O and I");

    const KernelCheck kernel = kernel_of_limit(a, cs.t, 1e-8);
    c.require(kernel.orbits_vanish, label + " kernel orbit persists");
    c.require(kernel.complement_persists, label + " complement orbit dies");

    const CheckSuite suite = contraction_limit_checks(cs.t, a, 1e-8);
    for (const CheckItem& item : suite.items) {
      c.require(item.pass, label + " item '" + item.name + "' residual " +
                               fmt(item.residual));
    }
    if (cs.expected_limit) {
      const double dev = max_abs_diff(a.matrix(), *cs.expected_limit);
      c.track(dev);
      c.require(dev <= 1e-8, label + " missed the exact limit by " + fmt(dev));
    }
  }
  return {c.pass, c.pass ? "20 contractions, worst residual " + fmt(c.worst) +
                               " (intertwine <= 1e-6, order/items <= 1e-8)"
                         : c.failures};
}

CriterionResult mean_limit_matches_contraction_limit() {
  constexpr double kAgreeTol = 1e-5;
  constexpr double kStopTol = 1e-7;
  Collector c;
  int idx = 0;
  for (const ContractionCase& cs : contraction_ensemble()) {
    const std::string label = "case " + std::to_string(idx++);
    const AsymptoticReport a_rep = contraction_asymptotic_limit(cs.t, 1e-10, 8192);
    const AsymptoticReport q_rep = cesaro_asymptotic_limit(cs.t, kStopTol);
    c.require(a_rep.converged() && q_rep.converged(), label + " no convergence");
    if (!a_rep.limit || !q_rep.limit) continue;
    const double dev = hermitian_norm(
        HermitianMatrix(q_rep.limit->matrix() - a_rep.limit->matrix()));
    c.track(dev);
    c.require(dev <= kAgreeTol, label + " |Q - A| = " + fmt(dev));
  }
  return {c.pass, c.pass ? "worst |mean - power-gram| " + fmt(c.worst) +
                               " <= 1e-5 at stop 1e-7"
                         : c.failures};
}

// --- 5: unitarization ensemble ----------------------------------------------

CriterionResult unitarization_witnesses() {
  constexpr double kResidualTol = 1e-6;
  Collector c;
  for (int k = 0; k < 10; ++k) {
    const int dim = 4 + (k * 3) % 13;
    const Matrix v = test_support::random_unitary(3000 + k, dim);
    std::mt19937_64 rng(4000 + k);
    std::uniform_real_distribution<double> logc(-0.5, 0.5);  // cond <= 10
    Matrix d = Matrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) d(i, i) = std::pow(10.0, logc(rng));
    const Matrix t = d * v * d.inverse();

    const std::string label = "case " + std::to_string(k);
    try {
      const SimilarityWitness w = nagy_unitarization(OperatorModel::dense(t));
      c.require(w.unitary_residual.has_value(), label + " no unitary residual");
      if (w.unitary_residual) {
        c.track(*w.unitary_residual);
        c.require(*w.unitary_residual <= kResidualTol,
                  label + " unitary residual " + fmt(*w.unitary_residual));
      }
    } catch (const Error& e) {
      c.require(false, label + " threw: " + e.what());
    }
  }

  Matrix half = Matrix::Zero(2, 2);
  half(0, 0) = 0.5;
  half(1, 1) = 1.0;
  bool rejected = false;
  try {
    nagy_unitarization(OperatorModel::dense(half));
  } catch (const NotPowerBoundedError&) {
    rejected = true;
  }
  c.require(rejected, "diag(1/2, 1) was not rejected as power unbounded");
  return {c.pass, c.pass ? "10 similarities, worst unitary residual " +
                               fmt(c.worst) + " <= 1e-6; inverse-unbounded input rejected"
                         : c.failures};
}

// --- 6: envelope oracle ------------------------------------------------------

CriterionResult envelope_oracle_periodic_and_blocks() {
  constexpr double kExactTol = 1e-9;
  Collector c;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int period = 2; period <= 7; ++period) {
    std::vector<double> values(static_cast<std::size_t>(period));
    for (double& v : values) v = unif(rng);
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= period;
    const std::string label = "period " + std::to_string(period);

    std::vector<double> sample;
    for (int k = 0; k < 3 * period; ++k) {
      sample.push_back(values[static_cast<std::size_t>(k % period)]);
    }
    const EnvelopeEstimate declared =
        envelope(BoundedSequence::with_periodic_tail(sample, values));
    c.track(declared.gap());
    c.require(declared.gap() <= kExactTol, label + " gap " + fmt(declared.gap()));
    const double mid = 0.5 * (declared.phi_minus + declared.phi_plus);
    c.track(std::abs(mid - mean));
    c.require(std::abs(mid - mean) <= kExactTol,
              label + " midpoint missed the period mean by " +
                  fmt(std::abs(mid - mean)));

    std::vector<double> stream(std::size_t(1) << 16);
    for (std::size_t k = 0; k < stream.size(); ++k) {
      stream[k] = values[k % static_cast<std::size_t>(period)];
    }
    const EnvelopeEstimate sampled =
        envelope(BoundedSequence::from_samples(std::move(stream)));
    c.require(sampled.uniform == Verdict::yes,
              label + " sampled estimation did not collapse");
    const double mid_est = 0.5 * (sampled.phi_minus + sampled.phi_plus);
    c.require(std::abs(mid_est - mean) <= 2e-3,
              label + " sampled midpoint off by " + fmt(std::abs(mid_est - mean)));
  }

  std::vector<double> blocks(std::size_t(1) << 16);
  {
    double level = 1.0;
    std::size_t pos = 0, len = 1;
    while (pos < blocks.size()) {
      for (std::size_t k = 0; k < len && pos < blocks.size(); ++k) {
        blocks[pos++] = level;
      }
      if (level == 0.0) len *= 2;  // lengths 1,1,2,2,4,4,...
      level = 1.0 - level;
    }
  }
  const EnvelopeEstimate doubling =
      envelope(BoundedSequence::from_samples(std::move(blocks)));
  c.require(doubling.phi_minus == 0.0 && doubling.phi_plus == 1.0,
            "doubling blocks envelope is not exactly [0, 1]");
  c.require(doubling.gap() >= 0.1,
            "doubling blocks gap " + fmt(doubling.gap()) + " < 0.1");
  c.require(doubling.uniform == Verdict::no,
            "doubling blocks wrongly certified uniform");
  return {c.pass,
          c.pass ? "periods 2..7 exact to " + fmt(c.worst) +
                       " <= 1e-9; doubling-block gap stays 1"
                 : c.failures};
}

// --- 7: mean limit certificates ----------------------------------------------

CriterionResult quasinormal_certificates() {
  constexpr double kFormTol = 1e-6;
  Collector c;
  std::mt19937_64 rng(88);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const int dim = 2 + k % 7;
    const Matrix u = test_support::random_unitary(5000 + k, dim);
    Matrix d = Matrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
      const double modulus = (i % 2 == 0) ? 1.0 : 0.9 * unif(rng);
      const double phase = 2.0 * M_PI * unif(rng);
      d(i, i) = Complex(modulus * std::cos(phase), modulus * std::sin(phase));
    }
    const Matrix normal = u * d * u.adjoint();
    const OperatorModel t = OperatorModel::dense(normal);
    const std::string label = "normal " + std::to_string(k);

    const AsymptoticReport q_rep = cesaro_asymptotic_limit(normal, 1e-7);
    c.require(q_rep.converged(), label + " mean limit did not converge");
    if (!q_rep.limit) continue;

    std::vector<SupportedVector> probes;
    std::vector<double> q_form;
    for (int i = 1; i <= dim; ++i) {
      probes.push_back(SupportedVector::basis(i));
      const Vector v = probes.back().to_dense(dim);
      q_form.push_back((v.adjoint() * q_rep.limit->matrix() * v).real()(0, 0));
    }
    c.require(q_equals_aphi_certificate(t, q_form, probes, 4096, kFormTol) ==
                  Verdict::yes,
              label + " certificate not yes");

    const PhiFormBounds form = phi_asymptotic_form(t, probes, 4096, kFormTol);
    c.require(form.reconstructed.has_value(), label + " no reconstruction");
    if (form.reconstructed) {
      const double dev =
          max_abs_diff(form.reconstructed->matrix(), q_rep.limit->matrix());
      c.track(dev);
      c.require(dev <= kFormTol, label + " reconstruction off by " + fmt(dev));
    }
  }

  const OperatorModel shift = gallery("isometric_shift");
  std::vector<SupportedVector> shift_probes;
  std::vector<double> shift_q;
  for (int i = 1; i <= 8; ++i) {
    shift_probes.push_back(SupportedVector::basis(i));
    shift_q.push_back(1.0);
  }
  c.require(q_equals_aphi_certificate(shift, shift_q, shift_probes, 4096,
                                      kFormTol) == Verdict::yes,
            "constant-weight shift certificate not yes");

  const OperatorModel blocks = gallery("block_shift");
  c.require(q_equals_aphi_certificate(blocks, {1.5}, {SupportedVector::basis(1)},
                                      65535, kFormTol) == Verdict::no,
            "doubling-block shift certificate not no at e1");
  return {c.pass, c.pass ? "20 normal + shift certified yes (form dev " +
                               fmt(c.worst) + " <= 1e-6); block shift refused"
                         : c.failures};
}

// --- 8: verdict lattice -------------------------------------------------------

struct LatticeMember {
  std::string name;
  OperatorModel model;
  Verdict power_bounded;
  Verdict bounded_below;
  Verdict isometry;
  Verdict similar;
  Verdict c0_dot;
  Verdict c1_dot;
};

CriterionResult verdict_lattice() {
  Collector c;
  const Verdict Y = Verdict::yes, N = Verdict::no;
  // Block-diagonal so the basis probes cover both the persisting and the
  // dying subspace.
  const Matrix mixed = [] {
    Matrix b = Matrix::Zero(5, 5);
    b.topLeftCorner(2, 2) = test_support::random_unitary(42, 2);
    b(2, 2) = 0.5;
    b(3, 3) = 0.6;
    b(4, 4) = 0.7;
    return b;
  }();
  const Matrix dvd = [] {
    const Matrix v = test_support::random_unitary(606, 6);
    Matrix d = Matrix::Zero(6, 6);
    for (int i = 0; i < 6; ++i) d(i, i) = 1.0 + 0.3 * i;
    return Matrix(d * v * d.inverse());
  }();

  std::vector<LatticeMember> members;
  members.push_back({"isometric_shift", gallery("isometric_shift"), Y, Y, Y, Y, N, Y});
  members.push_back({"unitary_diag", gallery("unitary_diag"), Y, Y, Y, Y, N, Y});
  members.push_back({"rotation", gallery("rotation"), Y, Y, Y, Y, N, Y});
  members.push_back({"similar_rotation", gallery("similar_rotation"), Y, Y, N, Y, N, Y});
  members.push_back({"conjugated_unitary", OperatorModel::dense(dvd), Y, Y, N, Y, N, Y});
  members.push_back({"block_shift", gallery("block_shift"), Y, Y, N, Y, N, Y});
  members.push_back({"decaying_shift", gallery("decaying_shift"), Y, N, N, N, Y, N});
  members.push_back({"strict_contraction", gallery("strict_contraction"), Y, N, N, N, Y, N});
  members.push_back({"diag_contraction", gallery("diag_contraction"), Y, N, N, N, N, N});
  members.push_back({"mixed_contraction", OperatorModel::dense(mixed), Y, N, N, N, N, N});
  members.push_back({"jordan_plus_identity", gallery("jordan_plus_identity"), Y, N, N, N, N, N});
  members.push_back({"expanding_diag", gallery("expanding_diag"), N, Y, N, N, N, Y});

  int violations = 0;
  for (const LatticeMember& m : members) {
    const ClassificationReport r = classify(m.model, 512, 1e-8, 0);
    auto expect = [&](Verdict got, Verdict want, const char* what) {
      if (got != want) {
        ++violations;
        c.require(false, m.name + " " + what + " = " + to_string(got) +
                             ", expected " + to_string(want));
      }
    };
    expect(r.power_bounded, m.power_bounded, "power_bounded");
    expect(r.power_bounded_below, m.bounded_below, "bounded_below");
    expect(r.isometry, m.isometry, "isometry");
    expect(r.similar_to_isometry, m.similar, "similar_to_isometry");
    expect(r.c0_dot, m.c0_dot, "c0_dot");
    expect(r.c1_dot, m.c1_dot, "c1_dot");

    // verdict-level implications
    if (r.isometry == Y) {
      c.require(r.power_bounded == Y && r.power_bounded_below == Y &&
                    r.similar_to_isometry == Y,
                m.name + ": isometry without the implied verdicts");
    }
    c.require((r.similar_to_isometry == Y) ==
                  (r.power_bounded == Y && r.power_bounded_below == Y),
              m.name + ": similarity verdict breaks the two-sided bound rule");
    c.require(!(r.c0_dot == Y && r.c1_dot == Y),
              m.name + ": orbits both all-die and none-die");
    c.require(!(r.c0_dot == Y && r.power_bounded_below == Y),
              m.name + ": dying orbits on a power-bounded-below operator");

    // Finite power bounded members: the mean limit exists; certified strict
    // positivity at the solver's resolution must coincide with similarity,
    // and the isometry witness must succeed exactly there.
    if (m.model.is_finite() && r.power_bounded == Y) {
      const AsymptoticReport q_rep =
          cesaro_asymptotic_limit(m.model.to_dense(), 1e-7);
      c.require(q_rep.limit.has_value() && q_rep.delta <= 1e-6,
                m.name + ": mean limit did not stabilize to 1e-6");
      if (!q_rep.limit) continue;
      const double q_norm =
          hermitian_norm(HermitianMatrix(q_rep.limit->matrix()));
      const double floor =
          std::max(1e-4 * std::max(1.0, q_norm), 10.0 * q_rep.delta);
      const bool certified_positive = q_rep.limit->min_eigenvalue() > floor;
      c.require(certified_positive == (r.similar_to_isometry == Y),
                m.name + ": certified positivity disagrees with similarity");
      if (r.similar_to_isometry == Y) {
        c.require(inner_product_witness(*q_rep.limit).strictly_positive == Y,
                  m.name + ": renorming witness rejects a similar operator");
      }
      bool witness_ok = false;
      try {
        const SimilarityWitness w = isometry_witness(m.model, *q_rep.limit);
        witness_ok = w.isometry_residual <= 1e-6;
      } catch (const Error&) {
        witness_ok = false;
      }
      c.require(witness_ok == (r.similar_to_isometry == Y),
                m.name + ": isometry witness success does not match similarity");
    }
  }
  c.require(violations == 0,
            std::to_string(violations) + " verdict violations");
  return {c.pass, c.pass ? "12 operators, 0 verdict violations, witnesses match"
                         : c.failures};
}

// --- 9: functional axioms ------------------------------------------------------

CriterionResult functional_axioms() {
  Collector c;
  const CheckSuite suite = banach_axiom_suite(0, 50, 1e-9);
  double worst_ratio = 0.0;
  for (const CheckItem& item : suite.items) {
    if (item.tolerance > 0) {
      worst_ratio = std::max(worst_ratio, item.residual / item.tolerance);
    }
    c.require(item.pass, "axiom '" + item.name + "' residual " +
                             fmt(item.residual) + " > " + fmt(item.tolerance));
  }
  return {c.pass, c.pass ? "8 axiom families on 50 sequences, worst residual at " +
                               fmt(worst_ratio) + " of tolerance"
                         : c.failures};
}

// --- 10: numerical kernels -----------------------------------------------------

CriterionResult numerical_kernels() {
  constexpr double kRelTol = 1e-9;
  Collector c;
  for (int k = 0; k < 100; ++k) {
    const int dim = 1 + (k * 13) % 64;
    const PsdMatrix a = PsdMatrix::from(test_support::random_psd(6000 + k, dim));
    const PsdMatrix s = psd_sqrt(a);
    const double a_norm = std::max(hermitian_norm(a.hermitian()), 1e-300);
    const double sq_res =
        operator_norm(s.matrix() * s.matrix() - a.matrix()) / a_norm;
    c.track(sq_res);
    c.require(sq_res <= kRelTol,
              "sqrt case " + std::to_string(k) + " residual " + fmt(sq_res));
  }
  for (int k = 0; k < 100; ++k) {
    const int dim = 1 + (k * 7) % 64;
    const Matrix w = test_support::random_matrix(7000 + k, dim);
    const PolarDecomposition p = polar_decompose(w);
    const double w_norm = std::max(operator_norm(w), 1e-300);
    const double res =
        operator_norm(p.unitary * p.modulus.matrix() - w) / w_norm;
    c.track(res);
    c.require(res <= kRelTol,
              "polar case " + std::to_string(k) + " residual " + fmt(res));
  }
  return {c.pass, c.pass ? "200 fuzzed kernels, worst relative residual " +
                               fmt(c.worst) + " <= 1e-9"
                         : c.failures};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget_s;
    CriterionResult (*fn)();
  };
  const Criterion criteria[] = {
      {"boosted-shift envelope and means", 1.0, boosted_shift_envelope_and_means},
      {"jordan-plus-identity mean limit", 1.0, jordan_mean_limit_and_reconstruction},
      {"contraction power-gram limits", 30.0, contraction_limits_converge_and_check},
      {"mean limit concordance", 30.0, mean_limit_matches_contraction_limit},
      {"unitarization witnesses", 20.0, unitarization_witnesses},
      {"envelope oracle sequences", 10.0, envelope_oracle_periodic_and_blocks},
      {"quasinormal mean-limit certificates", 20.0, quasinormal_certificates},
      {"operator verdict lattice", 30.0, verdict_lattice},
      {"shift-invariant functional axioms", 10.0, functional_axioms},
      {"psd sqrt and polar kernels", 10.0, numerical_kernels},
  };

  int failures = 0;
  int index = 0;
  for (const Criterion& criterion : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    CriterionResult result;
    try {
      result = criterion.fn();
    } catch (const std::exception& e) {
      result.pass = false;
      result.detail = std::string("threw: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (elapsed > criterion.budget_s) {
      result.pass = false;
      result.detail += (result.detail.empty() ? "" : "; ");
      result.detail += "over budget";
    }
    if (!result.pass) ++failures;
    std::printf("[%s] %2d %-38s %6.2fs/%gs  %s\n",
                result.pass ? "PASS" : "FAIL", index, criterion.name, elapsed,
                criterion.budget_s, result.detail.c_str());
  }
  if (failures > 0) {
    std::printf("%d of 10 criteria failed\n", failures);
    return 1;
  }
  std::printf("all 10 criteria passed\n");
  return 0;
}
