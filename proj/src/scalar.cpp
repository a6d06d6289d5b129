#include "mot/scalar.hpp"

#include <atomic>
#include <charconv>
#include <sstream>

namespace mot {

namespace {
std::atomic<double> g_tolerance{1e-12};
}

double tolerance() { return g_tolerance.load(std::memory_order_relaxed); }

void set_tolerance(double tau) {
  if (!(tau > 0.0)) throw ParameterError("tolerance must be positive");
  g_tolerance.store(tau, std::memory_order_relaxed);
}

std::string format_scalar(const Rational& v) { return v.str(); }

std::string format_scalar(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

Exponent::Exponent(unsigned n) : integer_(n), value_(static_cast<double>(n)) {
  if (n < 1) throw ParameterError("exponent rho must be >= 1");
}

Exponent Exponent::real(double r) {
  if (!(r >= 1.0) || !std::isfinite(r)) throw ParameterError("exponent rho must be a finite value >= 1");
  Exponent e;
  e.value_ = r;
  double ip = 0.0;
  e.integer_ = (std::modf(r, &ip) == 0.0 && r <= 64.0) ? static_cast<unsigned>(ip) : 0U;
  return e;
}

Exponent Exponent::parse(std::string_view text) {
  double r = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), r);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ParameterError("cannot read exponent rho from '" + std::string(text) + "'");
  return real(r);
}

std::string Exponent::str() const {
  if (is_integer()) return std::to_string(integer_);
  std::ostringstream os;
  os << value_;
  return os.str();
}

Rational abs_pow(const Rational& d, const Exponent& e) {
  if (!e.is_integer())
    throw ParameterError("exact arithmetic supports integer exponents only (rho = " + e.str() + ")");
  Rational a = num::abs(d);
  if (e.integer() == 1) return a;
  Rational r = a;
  for (unsigned k = 1; k < e.integer(); ++k) r *= a;
  return r;
}

double abs_pow(double d, const Exponent& e) {
  double a = std::fabs(d);
  switch (e.integer()) {
    case 1:
      return a;
    case 2:
      return a * a;
    case 0:
      return std::pow(a, e.value());
    default: {
      double r = a;
      for (unsigned k = 1; k < e.integer(); ++k) r *= a;
      return r;
    }
  }
}

}  // namespace mot
