#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include "mot/errors.hpp"

namespace mot {

// Expression templates are disabled so that `auto` and generic code behave like plain values.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

enum class Mode { exact, approx };

// Global equality tolerance used by every double-precision comparison.
double tolerance();
void set_tolerance(double tau);

namespace num {

inline bool eq(const Rational& a, const Rational& b) { return a == b; }
inline bool eq(double a, double b) { return std::fabs(a - b) <= tolerance(); }

inline bool lt(const Rational& a, const Rational& b) { return a < b; }
inline bool lt(double a, double b) { return a < b - tolerance(); }

inline bool le(const Rational& a, const Rational& b) { return a <= b; }
inline bool le(double a, double b) { return a <= b + tolerance(); }

inline bool is_zero(const Rational& a) { return a.is_zero(); }
inline bool is_zero(double a) { return std::fabs(a) <= tolerance(); }

template <class T>
int sign(const T& a) {
  if (is_zero(a)) return 0;
  return a > T(0) ? 1 : -1;
}

inline Rational abs(const Rational& a) { return boost::multiprecision::abs(a); }
inline double abs(double a) { return std::fabs(a); }

inline double to_double(const Rational& a) { return a.convert_to<double>(); }
inline double to_double(double a) { return a; }

template <class T>
T ratio(std::int64_t p, std::int64_t q) {
  return T(p) / T(q);
}

}  // namespace num

// "p/q" (or "p") for rationals, shortest round-trip decimal for doubles.
std::string format_scalar(const Rational& v);
std::string format_scalar(double v);

// Exponent rho >= 1 of the transport cost |x - y|^rho.
class Exponent {
 public:
  explicit Exponent(unsigned n = 1);
  static Exponent real(double r);
  static Exponent parse(std::string_view text);

  bool is_integer() const { return integer_ != 0; }
  unsigned integer() const { return integer_; }
  double value() const { return value_; }
  std::string str() const;

 private:
  unsigned integer_ = 1;
  double value_ = 1.0;
};

Rational abs_pow(const Rational& d, const Exponent& e);
double abs_pow(double d, const Exponent& e);

}  // namespace mot
