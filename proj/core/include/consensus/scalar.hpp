#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace consensus {

// Exact arbitrary-precision rational, always kept in lowest terms.
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// The numeric backend: either Rational (exact) or double (fast). Everything
// in dynamics/analysis/walk is generic over this choice.
template <class S>
struct ScalarOps;

template <>
struct ScalarOps<Rational> {
  static constexpr bool exact = true;
  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
  static Rational from_int(long v) { return Rational(v); }
  static Rational fraction(long num, long den) { return make_rational(num, den); }
  static double to_double(const Rational& v) { return v.get_d(); }
  static Rational abs(const Rational& v) { return ::abs(v); }
  // Canonical "num/den" form, den always present ("3/2", "0/1", "-2/1").
  static std::string str(const Rational& v) {
    return v.get_num().get_str() + "/" + v.get_den().get_str();
  }
  static bool finite(const Rational&) { return true; }
};

template <>
struct ScalarOps<double> {
  static constexpr bool exact = false;
  static double zero() { return 0.0; }
  static double one() { return 1.0; }
  static double from_int(long v) { return static_cast<double>(v); }
  static double fraction(long num, long den) {
    if (den == 0) throw std::invalid_argument("fraction with zero denominator");
    return static_cast<double>(num) / static_cast<double>(den);
  }
  static double to_double(double v) { return v; }
  static double abs(double v) { return std::fabs(v); }
  // 17 significant digits, fixed scientific width, round-trip exact.
  static std::string str(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
  }
  static bool finite(double v) { return std::isfinite(v); }
};

// Tolerances from the float backend contract: inequalities get slack
// 1e-9 * max(1, |lhs|, |rhs|); equalities 1e-12 relative. Exact backend
// tolerates nothing.
template <class S>
struct Tolerance {
  static S inequality_slack(const S& lhs, const S& rhs);
  static bool approx_equal(const S& lhs, const S& rhs);
};

template <>
struct Tolerance<Rational> {
  static Rational inequality_slack(const Rational&, const Rational&) { return Rational(0); }
  static bool approx_equal(const Rational& lhs, const Rational& rhs) { return lhs == rhs; }
};

template <>
struct Tolerance<double> {
  static double inequality_slack(double lhs, double rhs) {
    return 1e-9 * std::max({1.0, std::fabs(lhs), std::fabs(rhs)});
  }
  static bool approx_equal(double lhs, double rhs) {
    double scale = std::max({1.0, std::fabs(lhs), std::fabs(rhs)});
    return std::fabs(lhs - rhs) <= 1e-12 * scale;
  }
};

// lhs <= rhs up to the backend's inequality slack.
template <class S>
bool leq_with_slack(const S& lhs, const S& rhs) {
  return lhs <= rhs + Tolerance<S>::inequality_slack(lhs, rhs);
}

inline std::string format_double_17(double v) { return ScalarOps<double>::str(v); }

}  // namespace consensus
