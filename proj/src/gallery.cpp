#include "asymptotica/gallery.hpp"

#include <cmath>

namespace asymptotica {

namespace {

double param(const GalleryParams& params, const GalleryParams& defaults,
             const std::string& key) {
  auto it = params.find(key);
  if (it != params.end()) return it->second;
  return defaults.at(key);
}

void check_keys(const std::string& name, const GalleryParams& params,
                const GalleryParams& defaults) {
  for (const auto& [key, value] : params) {
    (void)value;
    if (!defaults.count(key)) {
      throw PreconditionError("gallery entry '" + name + "' has no parameter '" + key + "'");
    }
  }
}

Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

const std::vector<GalleryEntry>& gallery_list() {
  static const std::vector<GalleryEntry> entries = {
      {"beta_shift",
       "unilateral shift with one boosted weight: w = (beta, 1, 1, ...)",
       {{"beta", 2.0}}},
      {"isometric_shift", "unilateral shift with unit weights", {}},
      {"decaying_shift", "unilateral shift with constant weight rate < 1",
       {{"rate", 0.5}}},
      {"periodic_shift", "unilateral shift with weights alternating (a, b)",
       {{"a", 2.0}, {"b", 0.5}}},
      {"block_shift",
       "shift whose running weight products hold two levels over geometrically "
       "growing blocks",
       {{"hi", std::sqrt(2.0)}, {"lo", 1.0 / std::sqrt(2.0)}, {"growth", 2.0}, {"init", 1.0}}},
      {"jordan_plus_identity",
       "2x2 nilpotent cell with entry beta, direct-summed with a 1x1 identity",
       {{"beta", 5.0}}},
      {"diag_contraction", "diag(rate, 1): contractive with a unitary part",
       {{"rate", 0.5}}},
      {"strict_contraction", "diag(rate, rate/2): every orbit dies",
       {{"rate", 0.5}}},
      {"rotation", "2x2 real rotation by theta", {{"theta", 1.0}}},
      {"similar_rotation",
       "diag(1, cond) * rotation(theta) * diag(1, cond)^-1: similar to a unitary",
       {{"theta", 1.0}, {"cond", 2.0}}},
      {"nilpotent", "dim x dim Jordan cell at 0", {{"dim", 3.0}}},
      {"expanding_diag", "diag(rate, 1) with rate > 1: powers blow up",
       {{"rate", 2.0}}},
      {"unitary_diag",
       "infinite diagonal with prefix (i, -1) and unit tail: a diagonal unitary",
       {}},
  };
  return entries;
}

OperatorModel gallery(const std::string& name, const GalleryParams& params) {
  const GalleryEntry* entry = nullptr;
  for (const auto& e : gallery_list()) {
    if (e.name == name) {
      entry = &e;
      break;
    }
  }
  if (!entry) throw UnknownGalleryEntryError("no gallery entry named '" + name + "'");
  check_keys(name, params, entry->defaults);
  auto p = [&](const std::string& key) { return param(params, entry->defaults, key); };

  if (name == "beta_shift") {
    return OperatorModel::weighted_shift(
        WeightRule{{p("beta")}, WeightRule::Constant{1.0}});
  }
  if (name == "isometric_shift") {
    return OperatorModel::weighted_shift(WeightRule{{}, WeightRule::Constant{1.0}});
  }
  if (name == "decaying_shift") {
    return OperatorModel::weighted_shift(WeightRule{{}, WeightRule::Constant{p("rate")}});
  }
  if (name == "periodic_shift") {
    return OperatorModel::weighted_shift(
        WeightRule{{}, WeightRule::Periodic{{p("a"), p("b")}}});
  }
  if (name == "block_shift") {
    return OperatorModel::weighted_shift(WeightRule{
        {}, WeightRule::Blocks{p("hi"), p("lo"), p("growth"),
                               std::int64_t(std::llround(p("init")))}});
  }
  if (name == "jordan_plus_identity") {
    Matrix cell = Matrix::Zero(2, 2);
    cell(0, 1) = p("beta");
    Matrix one = Matrix::Identity(1, 1);
    std::vector<OperatorModel> parts;
    parts.push_back(OperatorModel::dense(cell));
    parts.push_back(OperatorModel::dense(one));
    return OperatorModel::direct_sum(std::move(parts));
  }
  if (name == "diag_contraction") return OperatorModel::dense(diag2(p("rate"), 1.0));
  if (name == "strict_contraction")
    return OperatorModel::dense(diag2(p("rate"), p("rate") / 2.0));
  if (name == "rotation") {
    double c = std::cos(p("theta")), s = std::sin(p("theta"));
    Matrix m(2, 2);
    m << Complex(c, 0), Complex(-s, 0), Complex(s, 0), Complex(c, 0);
    return OperatorModel::dense(m);
  }
  if (name == "similar_rotation") {
    double c = std::cos(p("theta")), s = std::sin(p("theta"));
    Matrix r(2, 2);
    r << Complex(c, 0), Complex(-s, 0), Complex(s, 0), Complex(c, 0);
    Matrix d = diag2(1.0, p("cond"));
    Matrix dinv = diag2(1.0, 1.0 / p("cond"));
    return OperatorModel::dense(d * r * dinv);
  }
  if (name == "nilpotent") {
    auto dim = std::int64_t(std::llround(p("dim")));
    if (dim < 1) throw PreconditionError("gallery nilpotent: dim must be >= 1");
    Matrix m = Matrix::Zero(dim, dim);
    for (std::int64_t i = 0; i + 1 < dim; ++i) m(i, i + 1) = 1.0;
    return OperatorModel::dense(m);
  }
  if (name == "expanding_diag") return OperatorModel::dense(diag2(p("rate"), 1.0));
  if (name == "unitary_diag") {
    return OperatorModel::diagonal({Complex(0.0, 1.0), Complex(-1.0, 0.0)},
                                   Complex(1.0, 0.0));
  }
  throw UnknownGalleryEntryError("no gallery entry named '" + name + "'");
}

}  // namespace asymptotica
