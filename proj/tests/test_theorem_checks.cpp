#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "asymptotica/gallery.hpp"
#include "asymptotica/power_asymptotics.hpp"
#include "asymptotica/theorem_checks.hpp"
#include "test_support.hpp"

using namespace asymptotica;
using test_support::mixed_contraction;
using test_support::random_contraction;
using test_support::random_unitary;

namespace {

Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

// D R(theta) D^(-1) with diagonal D: power bounded, invertible limit.
Matrix rotation_similarity(double theta, double stretch) {
  Matrix r(2, 2);
  r(0, 0) = std::cos(theta);
  r(0, 1) = -std::sin(theta);
  r(1, 0) = std::sin(theta);
  r(1, 1) = std::cos(theta);
  const Matrix d = diag2(1.0, stretch);
  return d * r * invert(d);
}

double measured_beta(const Matrix& t, int n_max = 512) {
  double beta = 1.0;
  Matrix p = Matrix::Identity(t.rows(), t.cols());
  for (int n = 0; n < n_max; ++n) {
    p = p * t;
    beta = std::max(beta, operator_norm(p));
  }
  return beta;
}

void require_all(const CheckSuite& suite) {
  for (const auto& it : suite.items) {
    INFO(suite.subject, "/", it.name, ": residual ", it.residual,
         " tolerance ", it.tolerance);
    CHECK(it.pass);
  }
  CHECK(suite.all_pass());
}

}  // namespace

TEST_CASE("contraction suite passes on diag(1/2, 1)") {
  const Matrix t = diag2(0.5, 1.0);
  const auto report = contraction_asymptotic_limit(t, 1e-12);
  REQUIRE(report.converged());
  const CheckSuite suite = contraction_limit_checks(t, *report.limit);
  CHECK(suite.subject == "power_gram_limit");
  CHECK(suite.items.size() == 11);
  require_all(suite);

  const CheckItem* fixed = suite.find("fixed_point_under_conjugation");
  REQUIRE(fixed != nullptr);
  CHECK(fixed->residual <= 1e-11);
  CHECK(suite.find("no_such_item") == nullptr);
}

TEST_CASE("contraction suite passes on a unitary") {
  const Matrix u = random_unitary(7, 4);
  const auto report = contraction_asymptotic_limit(u, 1e-12);
  REQUIRE(report.converged());
  const CheckSuite suite = contraction_limit_checks(u, *report.limit);
  require_all(suite);
  // The limit is the identity, so the orbit floor branch is the active one.
  const CheckItem* floor = suite.find("positive_limit_iff_uniform_orbit_floor");
  REQUIRE(floor != nullptr);
  CHECK(floor->residual <= 1e-10);
}

TEST_CASE("contraction suite passes on a nilpotent operator") {
  Matrix t = Matrix::Zero(3, 3);
  t(0, 1) = 0.9;
  t(1, 2) = 0.3;
  const auto report = contraction_asymptotic_limit(t, 1e-12);
  REQUIRE(report.converged());
  const CheckSuite suite = contraction_limit_checks(t, *report.limit);
  require_all(suite);
}

TEST_CASE("contraction suite passes on mixed contractions") {
  for (std::uint64_t seed : {101u, 102u, 103u}) {
    const auto mixed = mixed_contraction(seed, 2, 3);
    const auto report = contraction_asymptotic_limit(mixed.t, 1e-12);
    REQUIRE(report.converged());
    require_all(contraction_limit_checks(mixed.t, *report.limit));
  }
}

TEST_CASE("contraction suite flags a wrong limit") {
  const Matrix t = diag2(0.5, 1.0);
  const PsdMatrix wrong = PsdMatrix::from(Matrix::Identity(2, 2));
  const CheckSuite suite = contraction_limit_checks(t, wrong);
  CHECK_FALSE(suite.all_pass());
  const CheckItem* grams = suite.find("power_grams_converge_to_limit");
  REQUIRE(grams != nullptr);
  CHECK_FALSE(grams->pass);
  CHECK(grams->residual >= 0.9);
}

TEST_CASE("contraction suite rejects bad inputs") {
  const Matrix t = diag2(0.5, 1.0);
  const PsdMatrix limit = PsdMatrix::from(diag2(0.0, 1.0));
  CHECK_THROWS_AS(contraction_limit_checks(diag2(2.0, 1.0), limit),
                  NotAContractionError);
  CHECK_THROWS_AS(
      contraction_limit_checks(t, PsdMatrix::from(Matrix::Identity(3, 3))),
      PreconditionError);
  CHECK_THROWS_AS(contraction_limit_checks(t, limit, 0.0), PreconditionError);
  Matrix rect(2, 3);
  rect.setZero();
  CHECK_THROWS_AS(contraction_limit_checks(rect, limit), PreconditionError);
}

TEST_CASE("mean suite passes on diag(1/2, 1)") {
  const Matrix t = diag2(0.5, 1.0);
  const auto report = cesaro_asymptotic_limit(t, 1e-10);
  REQUIRE(report.converged());
  const CheckSuite suite = cesaro_limit_checks(t, *report.limit, 1.0);
  CHECK(suite.subject == "mean_limit");
  CHECK(suite.items.size() == 13);
  require_all(suite);
}

TEST_CASE("mean suite passes on a unitary") {
  const Matrix u = random_unitary(11, 3);
  const auto report = cesaro_asymptotic_limit(u, 1e-10);
  REQUIRE(report.converged());
  const CheckSuite suite = cesaro_limit_checks(u, *report.limit, 1.0);
  require_all(suite);
  // Isometry with identity limit: the equivalence fires on the true side.
  const CheckItem* iff = suite.find("full_limit_iff_isometry");
  REQUIRE(iff != nullptr);
  CHECK(iff->pass);
}

TEST_CASE("mean suite passes on the non-contraction gallery member") {
  const Matrix t = gallery("jordan_plus_identity").to_dense();
  const auto report = cesaro_asymptotic_limit(t, 1e-9);
  REQUIRE(report.converged());
  const double beta = measured_beta(t);
  CHECK(beta == doctest::Approx(5.0));
  const CheckSuite suite = cesaro_limit_checks(t, *report.limit, beta);
  require_all(suite);
  // Idempotent limit with nonzero norm: the commutator bounds are active.
  const CheckItem* bounds = suite.find("idempotent_limit_commutator_bounds");
  REQUIRE(bounds != nullptr);
  CHECK(bounds->residual <= 1e-3);
}

TEST_CASE("mean suite passes on an operator similar to a rotation") {
  const Matrix t = rotation_similarity(2.39996, 2.0);
  const auto report = cesaro_asymptotic_limit(t, 1e-7);
  REQUIRE(report.converged());
  // For D R D^(-1) with D = diag(1, s) the limit is (1+s^2)/2 D^(-2).
  const Matrix exact = 2.5 * diag2(1.0, 0.25);
  CHECK((report.limit->matrix() - exact).cwiseAbs().maxCoeff() <= 1e-7);
  const CheckSuite suite = cesaro_limit_checks(t, *report.limit, measured_beta(t));
  require_all(suite);
  // Invertible limit: the power bounded below branch is the active one.
  const CheckItem* below = suite.find("positive_limit_iff_power_bounded_below");
  REQUIRE(below != nullptr);
  CHECK(below->residual <= 1.0);
}

TEST_CASE("mean suite flags a wrong limit") {
  const Matrix t = diag2(0.5, 1.0);
  const PsdMatrix wrong = PsdMatrix::from(Matrix::Identity(2, 2));
  const CheckSuite suite = cesaro_limit_checks(t, wrong, 1.0);
  CHECK_FALSE(suite.all_pass());
  const CheckItem* means = suite.find("window_means_converge_to_form");
  REQUIRE(means != nullptr);
  CHECK_FALSE(means->pass);
}

TEST_CASE("mean suite rejects bad inputs") {
  const Matrix t = diag2(0.5, 1.0);
  const PsdMatrix limit = PsdMatrix::from(diag2(0.0, 1.0));
  CHECK_THROWS_AS(cesaro_limit_checks(t, limit, 0.0), PreconditionError);
  CHECK_THROWS_AS(cesaro_limit_checks(t, limit, -1.0), PreconditionError);
  CHECK_THROWS_AS(cesaro_limit_checks(diag2(3.0, 1.0), limit, 1.0),
                  PreconditionError);
}

TEST_CASE("orbit functional suite passes where mean and power limits live") {
  SUBCASE("mixed contraction") {
    const auto mixed = mixed_contraction(201, 2, 2);
    const auto report = contraction_asymptotic_limit(mixed.t, 1e-12);
    REQUIRE(report.converged());
    const CheckSuite suite = phi_limit_checks(mixed.t, *report.limit, 1.0);
    CHECK(suite.subject == "orbit_functional_limit");
    CHECK(suite.items.size() == 10);
    require_all(suite);
  }
  SUBCASE("power bounded gallery member") {
    const Matrix t = gallery("jordan_plus_identity").to_dense();
    const auto report = cesaro_asymptotic_limit(t, 1e-9);
    REQUIRE(report.converged());
    require_all(phi_limit_checks(t, *report.limit, measured_beta(t)));
  }
  SUBCASE("rotation similarity") {
    const Matrix t = rotation_similarity(0.8312, 1.7);
    const auto report = cesaro_asymptotic_limit(t, 1e-7);
    REQUIRE(report.converged());
    require_all(phi_limit_checks(t, *report.limit, measured_beta(t)));
  }
}

TEST_CASE("orbit functional suite flags a wrong limit") {
  const Matrix t = diag2(0.5, 1.0);
  const PsdMatrix wrong = PsdMatrix::from(0.5 * Matrix::Identity(2, 2));
  const CheckSuite suite = phi_limit_checks(t, wrong, 1.0);
  CHECK_FALSE(suite.all_pass());
}

TEST_CASE("strict contractions have the zero limit and a quiet suite") {
  for (std::uint64_t seed : {301u, 302u}) {
    const Matrix t = random_contraction(seed, 5, 0.9);
    const auto report = contraction_asymptotic_limit(t, 1e-12);
    REQUIRE(report.converged());
    require_all(contraction_limit_checks(t, *report.limit));
    require_all(cesaro_limit_checks(t, *report.limit, 1.0));
    require_all(phi_limit_checks(t, *report.limit, 1.0));
  }
}
