#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace asymptotica::detail {

// Running product with an explicit power-of-two exponent. Each multiply rounds
// exactly like a plain double multiply (frexp/ldexp are exact), but the
// exponent lives in an int64 so the accumulator never over- or underflows.
struct ScaledProduct {
  double sig = 0.5;      // in [0.5, 1), or 0
  std::int64_t exp = 1;  // value = sig * 2^exp; default is 1.0

  static ScaledProduct one() { return ScaledProduct{}; }

  void multiply(double w) {
    int e = 0;
    sig = std::frexp(sig * w, &e);
    exp += e;
  }

  double value() const {
    if (sig == 0.0) return 0.0;
    if (exp > 1024) return std::numeric_limits<double>::infinity();
    if (exp < -1073) return 0.0;
    return std::ldexp(sig, int(exp));
  }

  // |product|^2, same guarded exponent arithmetic
  double squared_value() const {
    if (sig == 0.0) return 0.0;
    ScaledProduct sq;
    int e = 0;
    sq.sig = std::frexp(sig * sig, &e);
    sq.exp = 2 * exp + e;
    return sq.value();
  }

  double log_value() const {
    if (sig == 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(sig) + double(exp) * 0.69314718055994530942;
  }

  // this / other, evaluated without forming huge intermediates
  double ratio(const ScaledProduct& other) const {
    if (other.sig == 0.0) return std::numeric_limits<double>::quiet_NaN();
    ScaledProduct r;
    int e = 0;
    r.sig = std::frexp(sig / other.sig, &e);
    r.exp = exp - other.exp + e;
    return r.value();
  }
};

}  // namespace asymptotica::detail
