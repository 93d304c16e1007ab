#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "asymptotica/gallery.hpp"
#include "asymptotica/operator_model.hpp"
#include "test_support.hpp"

using namespace asymptotica;

namespace {

// Brute-force window products over an explicitly materialized weight stream;
// no shared code with the library's horizon/prefix-product route.
double oracle_window_sup(const WeightRule& rule, std::int64_t n, std::int64_t scan) {
  auto w = rule.materialize(scan + n);
  double sup = 0.0;
  for (std::int64_t i = 0; i < scan; ++i) {
    double p = 1.0;
    for (std::int64_t m = 0; m < n; ++m) p *= w[size_t(i + m)];
    sup = std::max(sup, p);
  }
  return sup;
}

double oracle_window_inf(const WeightRule& rule, std::int64_t n, std::int64_t scan) {
  auto w = rule.materialize(scan + n);
  double inf = std::numeric_limits<double>::infinity();
  for (std::int64_t i = 0; i < scan; ++i) {
    double p = 1.0;
    for (std::int64_t m = 0; m < n; ++m) p *= w[size_t(i + m)];
    inf = std::min(inf, p);
  }
  return inf;
}

SupportedVector seeded_vector(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::int64_t> support;
  std::vector<Complex> amps;
  size_t count = 1 + size_t(rng() % 5);
  while (support.size() < count) {
    std::int64_t k = 1 + std::int64_t(rng() % 20);
    if (std::find(support.begin(), support.end(), k) == support.end()) {
      support.push_back(k);
      amps.push_back(Complex(normal(rng), normal(rng)));
    }
  }
  return SupportedVector(support, amps);
}

const OperatorModel kBetaShift = gallery("beta_shift");
const OperatorModel kBlockShift = gallery("block_shift");
const OperatorModel kIsometricShift = gallery("isometric_shift");
const OperatorModel kJordanPlusIdentity = gallery("jordan_plus_identity");

}  // namespace

TEST_CASE("weighted shift apply moves mass up one index") {
  SupportedVector e1 = SupportedVector::basis(1);
  SupportedVector y = apply(kBetaShift, e1);
  REQUIRE(y.support().size() == 1);
  CHECK(y.support()[0] == 2);
  CHECK(y.amplitudes()[0] == Complex(2.0, 0.0));
  SupportedVector back = adjoint_apply(kBetaShift, y);
  CHECK(back.support()[0] == 1);
  CHECK(back.amplitudes()[0] == Complex(4.0, 0.0));
  // e_1 is annihilated by the adjoint
  CHECK(adjoint_apply(kBetaShift, e1).empty());
}

TEST_CASE("adjoint duality <Tx;y> = <x;T*y> across variants") {
  std::vector<OperatorModel> models = {
      kBetaShift, kBlockShift, gallery("periodic_shift"), gallery("unitary_diag"),
      kJordanPlusIdentity};
  models.push_back(OperatorModel::dense(test_support::random_matrix(77, 8)));
  for (const auto& t : models) {
    for (std::uint64_t s = 0; s < 20; ++s) {
      SupportedVector x = seeded_vector(1000 + s);
      SupportedVector y = seeded_vector(2000 + s);
      if (t.dim()) {  // clip probes into a finite model's space
        if (x.max_index() > *t.dim() || y.max_index() > *t.dim()) continue;
      }
      Complex lhs = inner(apply(t, x), y);
      Complex rhs = inner(x, adjoint_apply(t, y));
      CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(lhs)));
    }
  }
}

TEST_CASE("orbit norms of the boosted shift are exactly 1,4,4,...") {
  auto orbit = orbit_norms(kBetaShift, SupportedVector::basis(1), 64);
  REQUIRE(orbit.size() == 65);
  CHECK(orbit[0] == 1.0);
  for (size_t n = 1; n < orbit.size(); ++n) CHECK(orbit[n] == 4.0);
  // away from the bump the shift is isometric
  auto flat = orbit_norms(kBetaShift, SupportedVector::basis(3), 32);
  for (double v : flat) CHECK(v == 1.0);
}

TEST_CASE("orbit norms agree with repeated application") {
  std::vector<OperatorModel> models = {kBetaShift, kBlockShift,
                                       gallery("periodic_shift"),
                                       gallery("unitary_diag"), kJordanPlusIdentity};
  for (const auto& t : models) {
    SupportedVector x = seeded_vector(42);
    if (t.dim() && x.max_index() > *t.dim()) continue;
    auto orbit = orbit_norms(t, x, 50);
    SupportedVector v = x;
    for (std::int64_t n = 0; n <= 50; ++n) {
      CHECK(orbit[size_t(n)] ==
            doctest::Approx(v.squared_norm()).epsilon(1e-12));
      v = apply(t, v);
    }
  }
}

TEST_CASE("block shift orbit rides two levels") {
  auto orbit = orbit_norms(kBlockShift, SupportedVector::basis(1), 200);
  for (size_t n = 0; n < orbit.size(); ++n) {
    bool on_level = std::abs(orbit[n] - 1.0) <= 1e-12 || std::abs(orbit[n] - 2.0) <= 1e-12;
    CHECK(on_level);
  }
  // both levels occur, in growing runs
  int ones = 0, twos = 0;
  for (double v : orbit) (v < 1.5 ? ones : twos)++;
  CHECK(ones > 50);
  CHECK(twos > 50);
}

TEST_CASE("power norms of shifts match the brute-force window oracle") {
  std::vector<WeightRule> rules = {
      WeightRule{{2.0}, WeightRule::Constant{1.0}},
      WeightRule{{0.7, 1.3}, WeightRule::Constant{0.9}},
      WeightRule{{}, WeightRule::Periodic{{2.0, 0.5, 1.5}}},
      WeightRule{{1.1}, WeightRule::Blocks{std::sqrt(2.0), 1.0 / std::sqrt(2.0), 2.0, 1}},
      WeightRule{{}, WeightRule::Blocks{1.5, 0.6, 1.0, 3}},
  };
  for (const auto& rule : rules) {
    OperatorModel t = OperatorModel::weighted_shift(rule);
    for (std::int64_t n : {1, 2, 3, 5, 8, 13, 21}) {
      double sup = power_norm_estimate(t, n);
      double inf = power_floor_estimate(t, n);
      double sup_oracle = oracle_window_sup(rule, n, 3000);
      double inf_oracle = oracle_window_inf(rule, n, 3000);
      CHECK(sup == doctest::Approx(sup_oracle).epsilon(1e-12));
      CHECK(inf == doctest::Approx(inf_oracle).epsilon(1e-12));
    }
  }
}

TEST_CASE("power norms of the two-level block shift are flat") {
  for (std::int64_t n : {1, 2, 4, 16, 64, 256}) {
    CHECK(power_norm_estimate(kBlockShift, n) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(power_floor_estimate(kBlockShift, n) ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  }
}

TEST_CASE("jordan_plus_identity power norms collapse to the identity part") {
  CHECK(model_norm(kJordanPlusIdentity) == doctest::Approx(5.0));
  CHECK(power_norm_estimate(kJordanPlusIdentity, 1) == doctest::Approx(5.0));
  for (std::int64_t n : {2, 3, 8, 50})
    CHECK(power_norm_estimate(kJordanPlusIdentity, n) == doctest::Approx(1.0));
}

TEST_CASE("dense power norms agree with the structured route on a shared model") {
  Matrix m = kJordanPlusIdentity.to_dense();
  OperatorModel dense = OperatorModel::dense(m);
  for (std::int64_t n : {1, 2, 5, 16}) {
    CHECK(power_norm_estimate(dense, n) ==
          doctest::Approx(power_norm_estimate(kJordanPlusIdentity, n)).epsilon(1e-9));
  }
  SupportedVector x({1, 2, 3}, {Complex(0.3, 0.1), Complex(-1.0, 0.0), Complex(0.0, 2.0)});
  auto structured = orbit_norms(kJordanPlusIdentity, x, 30);
  auto densified = orbit_norms(dense, x, 30);
  for (size_t n = 0; n < structured.size(); ++n)
    CHECK(structured[n] == doctest::Approx(densified[n]).epsilon(1e-12));
}

TEST_CASE("direct sums route coordinates through the right component") {
  // dense 2x2 followed by an infinite isometric shift
  std::vector<OperatorModel> parts;
  parts.push_back(OperatorModel::dense(test_support::random_matrix(5, 2)));
  parts.push_back(gallery("isometric_shift"));
  OperatorModel sum = OperatorModel::direct_sum(parts);
  CHECK(!sum.dim());
  SupportedVector x({2, 3, 7}, {Complex(1, 0), Complex(0, 1), Complex(2, 0)});
  SupportedVector y = apply(sum, x);
  // index 3 is the shift's e_1, lands on global index 4
  CHECK(std::abs(y.amplitude_at(4) - Complex(0, 1)) <= 1e-15);
  CHECK(std::abs(y.amplitude_at(8) - Complex(2, 0)) <= 1e-15);

  // an infinite component anywhere but last is rejected
  std::vector<OperatorModel> bad = {gallery("isometric_shift"),
                                    OperatorModel::dense(Matrix::Identity(2, 2))};
  CHECK_THROWS_AS(OperatorModel::direct_sum(bad), UnsupportedVariantError);
}

TEST_CASE("spectral radius: defective dense matrix converges to 0.9") {
  Matrix m(2, 2);
  m << 0.9, 10.0, 0.0, 0.9;
  auto est = spectral_radius(OperatorModel::dense(m));
  CHECK(std::abs(est.value - 0.9) <= 5e-3);
}

TEST_CASE("spectral radius: exact paths") {
  CHECK(spectral_radius(gallery("unitary_diag")).value == doctest::Approx(1.0));
  CHECK(spectral_radius(gallery("nilpotent")).value == 0.0);
  auto rot = spectral_radius(gallery("rotation"));
  CHECK(rot.value == doctest::Approx(1.0).epsilon(1e-8));
  Matrix d = Matrix::Zero(3, 3);
  d(0, 0) = 0.25;
  d(1, 1) = Complex(0.0, 0.5);
  d(2, 2) = -0.75;
  CHECK(spectral_radius(OperatorModel::dense(d)).value ==
        doctest::Approx(0.75).epsilon(1e-8));
  CHECK_THROWS_AS(spectral_radius(kBetaShift), UnsupportedVariantError);
}

TEST_CASE("quasinormal predicate") {
  CHECK(is_quasinormal(kIsometricShift).verdict);
  CHECK(is_quasinormal(gallery("decaying_shift")).verdict);
  CHECK(is_quasinormal(gallery("unitary_diag")).verdict);
  auto beta = is_quasinormal(kBetaShift);
  CHECK(!beta.verdict);
  CHECK(beta.residual == doctest::Approx(6.0));  // w1 |w1^2 - w2^2| = 2 * 3
  CHECK(!is_quasinormal(kJordanPlusIdentity).verdict);
  // dense normal matrices are quasinormal
  Matrix u = test_support::random_unitary(3, 5);
  Matrix n = u * Matrix(Vector::Random(5).asDiagonal()) * u.adjoint();
  CHECK(is_quasinormal(OperatorModel::dense(n), 1e-9).verdict);
}

TEST_CASE("normaloid predicate") {
  CHECK(is_normaloid(gallery("diag_contraction")).verdict);
  CHECK(is_normaloid(kIsometricShift).verdict);
  CHECK(is_normaloid(gallery("unitary_diag")).verdict);
  Matrix jordan(2, 2);
  jordan << 1.0, 1.0, 0.0, 1.0;
  CHECK(!is_normaloid(OperatorModel::dense(jordan)).verdict);
  CHECK(!is_normaloid(kBetaShift).verdict);
  CHECK(!is_normaloid(kBlockShift).verdict);  // ||T^n|| = sqrt(2) < ||T||^n
}

TEST_CASE("probe conventions") {
  auto finite = default_probes(kJordanPlusIdentity);
  CHECK(finite.size() == 3);
  auto structured = default_probes(kBetaShift, 7);
  CHECK(structured.size() == 24);
  auto again = default_probes(kBetaShift, 7);
  for (size_t i = 0; i < structured.size(); ++i) CHECK(structured[i] == again[i]);
}

TEST_CASE("gallery rejects unknown names and parameters") {
  CHECK_THROWS_AS(gallery("no_such_model"), UnknownGalleryEntryError);
  CHECK_THROWS_AS(gallery("beta_shift", {{"gamma", 1.0}}), PreconditionError);
  CHECK(gallery_list().size() >= 10);
}

TEST_CASE("model validation") {
  CHECK_THROWS_AS(OperatorModel::dense(Matrix::Zero(300, 300)), PreconditionError);
  WeightRule negative{{-1.0}, WeightRule::Constant{1.0}};
  CHECK_THROWS_AS(OperatorModel::weighted_shift(negative), PreconditionError);
  WeightRule bad_growth{{}, WeightRule::Blocks{1.0, 1.0, 0.5, 1}};
  CHECK_THROWS_AS(OperatorModel::weighted_shift(bad_growth), PreconditionError);
  SupportedVector too_far = SupportedVector::basis(9);
  CHECK_THROWS_AS(apply(kJordanPlusIdentity, too_far), OutOfRangeError);
}

TEST_CASE("supported vector algebra") {
  SupportedVector x({1, 4}, {Complex(1, 0), Complex(0, 2)});
  SupportedVector y({4, 6}, {Complex(0, -2), Complex(3, 0)});
  SupportedVector s = x + y;
  CHECK(s.support() == std::vector<std::int64_t>{1, 6});  // index 4 cancels
  CHECK(s.squared_norm() == doctest::Approx(10.0));
  CHECK(std::abs(inner(x, y) - Complex(-4.0, 0.0)) <= 1e-15);
  Vector dense = x.to_dense(5);
  CHECK(dense(3) == Complex(0, 2));
  CHECK_THROWS_AS(x.to_dense(3), OutOfRangeError);
}
