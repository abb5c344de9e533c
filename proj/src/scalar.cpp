#include "bounce/scalar.hpp"

#include <boost/multiprecision/integer.hpp>

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <ostream>

namespace bounce {

namespace {

[[noreturn]] void throw_mixed(const char* op) {
  throw ModeError(std::string("cannot ") + op + " scalars of different numeric modes");
}

}  // namespace

Scalar Scalar::exact(long long num, long long den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  // The backing type insists on a positive denominator.
  BigInt n(num), d(den);
  if (d < 0) {
    n = -n;
    d = -d;
  }
  return Scalar(Rational(std::move(n), std::move(d)));
}

const Rational& Scalar::rational() const {
  if (!is_exact()) throw ModeError("floating scalar has no rational payload");
  return std::get<Rational>(rep_);
}

double Scalar::raw() const {
  if (is_exact()) throw ModeError("exact scalar has no floating payload");
  return std::get<double>(rep_);
}

double Scalar::approx() const noexcept {
  if (is_exact()) return std::get<Rational>(rep_).convert_to<double>();
  return std::get<double>(rep_);
}

Scalar Scalar::to_float() const noexcept { return Scalar(approx()); }

Scalar Scalar::operator-() const {
  if (is_exact()) return Scalar(Rational(-std::get<Rational>(rep_)));
  return Scalar(-std::get<double>(rep_));
}

Scalar operator+(const Scalar& x, const Scalar& y) {
  if (x.mode() != y.mode()) throw_mixed("add");
  if (x.is_exact()) return Scalar(Rational(x.rational() + y.rational()));
  return Scalar(x.raw() + y.raw());
}

Scalar operator-(const Scalar& x, const Scalar& y) {
  if (x.mode() != y.mode()) throw_mixed("subtract");
  if (x.is_exact()) return Scalar(Rational(x.rational() - y.rational()));
  return Scalar(x.raw() - y.raw());
}

Scalar operator*(const Scalar& x, const Scalar& y) {
  if (x.mode() != y.mode()) throw_mixed("multiply");
  if (x.is_exact()) return Scalar(Rational(x.rational() * y.rational()));
  return Scalar(x.raw() * y.raw());
}

Scalar operator/(const Scalar& x, const Scalar& y) {
  if (x.mode() != y.mode()) throw_mixed("divide");
  if (x.is_exact()) {
    if (y.rational() == 0) throw DomainError("exact division by zero");
    return Scalar(Rational(x.rational() / y.rational()));
  }
  return Scalar(x.raw() / y.raw());
}

bool operator==(const Scalar& x, const Scalar& y) {
  if (x.mode() != y.mode()) throw_mixed("compare");
  if (x.is_exact()) return x.rational() == y.rational();
  return x.raw() == y.raw();
}

bool operator<(const Scalar& x, const Scalar& y) {
  if (x.mode() != y.mode()) throw_mixed("compare");
  if (x.is_exact()) return x.rational() < y.rational();
  return x.raw() < y.raw();
}

int sign(const Scalar& x) {
  const Scalar z = Scalar::zero(x.mode());
  if (x < z) return -1;
  if (z < x) return 1;
  return 0;
}

Scalar abs(const Scalar& x) { return sign(x) < 0 ? -x : x; }

Scalar min(const Scalar& x, const Scalar& y) { return y < x ? y : x; }

Scalar max(const Scalar& x, const Scalar& y) { return x < y ? y : x; }

bool is_integer(const Scalar& x) {
  if (!x.is_exact())
    throw ModeError("integrality is only decidable for exact scalars");
  return denominator(x.rational()) == 1;
}

BigInt to_integer(const Scalar& x) {
  if (!is_integer(x)) throw DomainError("scalar is not an integer: " + to_string(x));
  return numerator(x.rational());
}

Scalar floor(const Scalar& x) {
  if (!x.is_exact()) return Scalar::floating(std::floor(x.raw()));
  const BigInt num = numerator(x.rational());
  const BigInt den = denominator(x.rational());
  BigInt q = num / den;  // truncates toward zero
  if (num < 0 && q * den != num) q -= 1;
  return Scalar::exact(std::move(q));
}

Scalar frac(const Scalar& x) {
  Scalar f = x - floor(x);
  if (!f.is_exact()) {
    // floor can land on the wrong side of representable values near an
    // integer; fold the half-open range shut.
    double d = f.raw();
    if (d >= 1.0) d -= 1.0;
    if (d < 0.0) d += 1.0;
    return Scalar::floating(d);
  }
  return f;
}

Scalar mod(const Scalar& x, const Scalar& period) {
  if (!(Scalar::zero(period.mode()) < period))
    throw DomainError("mod requires a positive period");
  return x - floor(x / period) * period;
}

std::optional<Rational> exact_sqrt(const Rational& r) {
  if (r < 0) return std::nullopt;
  const BigInt num = numerator(r);
  const BigInt den = denominator(r);
  const BigInt sn = boost::multiprecision::sqrt(num);
  if (sn * sn != num) return std::nullopt;
  const BigInt sd = boost::multiprecision::sqrt(den);
  if (sd * sd != den) return std::nullopt;
  return Rational(sn, sd);
}

std::string to_string(const Scalar& x) {
  if (x.is_exact()) {
    const BigInt& num = numerator(x.rational());
    const BigInt& den = denominator(x.rational());
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
  }
  const double d = x.raw();
  if (!std::isfinite(d)) return d > 0 ? "inf" : (d < 0 ? "-inf" : "nan");
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, d);
  return std::string(buf, res.ptr);
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

Scalar parse_exact(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  const auto slash = s.find('/');
  const auto dot = s.find('.');
  if (slash != std::string_view::npos && dot != std::string_view::npos)
    throw ParseError("malformed rational: " + std::string(text));
  Rational value;
  if (slash != std::string_view::npos) {
    const std::string_view p = s.substr(0, slash);
    const std::string_view q = s.substr(slash + 1);
    if (!all_digits(p) || !all_digits(q))
      throw ParseError("malformed rational: " + std::string(text));
    const BigInt den{std::string(q)};
    if (den == 0) throw ParseError("rational with zero denominator: " + std::string(text));
    value = Rational(BigInt(std::string(p)), den);
  } else if (dot != std::string_view::npos) {
    const std::string_view whole = s.substr(0, dot);
    const std::string_view fracpart = s.substr(dot + 1);
    if (!all_digits(whole) || !all_digits(fracpart))
      throw ParseError("malformed decimal: " + std::string(text));
    BigInt scale = 1;
    for (std::size_t i = 0; i < fracpart.size(); ++i) scale *= 10;
    const BigInt num = BigInt(std::string(whole)) * scale + BigInt(std::string(fracpart));
    value = Rational(num, scale);
  } else {
    if (!all_digits(s)) throw ParseError("malformed integer: " + std::string(text));
    value = Rational(BigInt(std::string(s)));
  }
  if (negative) value = -value;
  return Scalar::exact(std::move(value));
}

Scalar parse_floating(std::string_view text) {
  const std::string buf(text);
  const char* begin = buf.c_str();
  char* end = nullptr;
  const double d = std::strtod(begin, &end);
  if (end != begin + buf.size() || buf.empty())
    throw ParseError("malformed floating value: " + buf);
  if (!std::isfinite(d)) throw ParseError("non-finite floating value: " + buf);
  return Scalar::floating(d);
}

}  // namespace

Scalar parse_scalar(std::string_view text, Mode m) {
  if (m == Mode::exact) return parse_exact(text);
  return parse_floating(text);
}

std::ostream& operator<<(std::ostream& os, const Scalar& x) {
  return os << to_string(x);
}

}  // namespace bounce
