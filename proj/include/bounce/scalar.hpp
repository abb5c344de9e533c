#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace bounce {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Mixing exact and floating scalars in one operation.
struct ModeError : Error {
  using Error::Error;
};

/// A value outside the mathematical domain of an operation (bad parameters,
/// evaluation outside a piece, division by zero, ...).
struct DomainError : Error {
  using Error::Error;
};

/// Malformed textual input (scalar strings, documents, trajectories).
struct ParseError : Error {
  using Error::Error;
};

/// The free-flight parabola never returns to the plate inside the search
/// horizon; the state is below the map's well-definedness threshold.
struct NoImpactError : Error {
  using Error::Error;
};

/// Failure while iterating a map, tagged with the step index.
struct StepError : Error {
  std::size_t index;
  StepError(std::size_t i, const std::string& msg)
      : Error("step " + std::to_string(i) + ": " + msg), index(i) {}
};

enum class Mode { exact, floating };

/// Dual-mode scalar.
///
/// exact:    rational p/q with unbounded integer parts, kept in canonical
///           reduced form with q > 0; field operations are exact.
/// floating: IEEE-754 double; each individual operation is correctly rounded
///           (the code must not be compiled with value-unsafe FP options).
///
/// Operands of an operation must share the mode; any mixing throws ModeError.
/// There is no implicit promotion in either direction. exact -> floating is
/// available explicitly through to_float(); the reverse is not provided.
class Scalar {
 public:
  Scalar() : rep_(Rational(0)) {}

  static Scalar exact(long long value) { return Scalar(Rational(value)); }
  static Scalar exact(long long num, long long den);
  static Scalar exact(Rational r) { return Scalar(std::move(r)); }
  static Scalar exact(BigInt n) { return Scalar(Rational(std::move(n))); }
  static Scalar floating(double x) { return Scalar(x); }
  static Scalar of(long long value, Mode m) {
    return m == Mode::exact ? exact(value) : floating(static_cast<double>(value));
  }
  static Scalar zero(Mode m) { return of(0, m); }

  Mode mode() const noexcept {
    return rep_.index() == 0 ? Mode::exact : Mode::floating;
  }
  bool is_exact() const noexcept { return rep_.index() == 0; }

  /// The rational payload; ModeError when floating.
  const Rational& rational() const;
  /// The double payload; ModeError when exact.
  double raw() const;
  /// Double approximation regardless of mode (for rendering/diagnostics).
  double approx() const noexcept;
  /// Rounded copy in floating mode; identity when already floating.
  Scalar to_float() const noexcept;

  Scalar operator-() const;

  friend Scalar operator+(const Scalar& x, const Scalar& y);
  friend Scalar operator-(const Scalar& x, const Scalar& y);
  friend Scalar operator*(const Scalar& x, const Scalar& y);
  friend Scalar operator/(const Scalar& x, const Scalar& y);

  Scalar& operator+=(const Scalar& y) { return *this = *this + y; }
  Scalar& operator-=(const Scalar& y) { return *this = *this - y; }
  Scalar& operator*=(const Scalar& y) { return *this = *this * y; }
  Scalar& operator/=(const Scalar& y) { return *this = *this / y; }
  Scalar& operator+=(long long n) { return *this = *this + n; }
  Scalar& operator-=(long long n) { return *this = *this - n; }
  Scalar& operator*=(long long n) { return *this = *this * n; }
  Scalar& operator/=(long long n) { return *this = *this / n; }

  friend bool operator==(const Scalar& x, const Scalar& y);
  friend bool operator<(const Scalar& x, const Scalar& y);
  friend bool operator!=(const Scalar& x, const Scalar& y) { return !(x == y); }
  friend bool operator>(const Scalar& x, const Scalar& y) { return y < x; }
  friend bool operator<=(const Scalar& x, const Scalar& y) { return !(y < x); }
  friend bool operator>=(const Scalar& x, const Scalar& y) { return !(x < y); }

  // Convenience mixed forms with plain integers; the integer adopts the
  // scalar's mode, so these never raise ModeError.
  friend Scalar operator+(const Scalar& x, long long n) { return x + of(n, x.mode()); }
  friend Scalar operator+(long long n, const Scalar& x) { return of(n, x.mode()) + x; }
  friend Scalar operator-(const Scalar& x, long long n) { return x - of(n, x.mode()); }
  friend Scalar operator-(long long n, const Scalar& x) { return of(n, x.mode()) - x; }
  friend Scalar operator*(const Scalar& x, long long n) { return x * of(n, x.mode()); }
  friend Scalar operator*(long long n, const Scalar& x) { return of(n, x.mode()) * x; }
  friend Scalar operator/(const Scalar& x, long long n) { return x / of(n, x.mode()); }
  friend Scalar operator/(long long n, const Scalar& x) { return of(n, x.mode()) / x; }
  friend bool operator==(const Scalar& x, long long n) { return x == of(n, x.mode()); }
  friend bool operator!=(const Scalar& x, long long n) { return !(x == n); }
  friend bool operator<(const Scalar& x, long long n) { return x < of(n, x.mode()); }
  friend bool operator>(const Scalar& x, long long n) { return x > of(n, x.mode()); }
  friend bool operator<=(const Scalar& x, long long n) { return x <= of(n, x.mode()); }
  friend bool operator>=(const Scalar& x, long long n) { return x >= of(n, x.mode()); }

 private:
  explicit Scalar(Rational r) : rep_(std::move(r)) {}
  explicit Scalar(double x) : rep_(x) {}

  std::variant<Rational, double> rep_;
};

int sign(const Scalar& x);
Scalar abs(const Scalar& x);
Scalar min(const Scalar& x, const Scalar& y);
Scalar max(const Scalar& x, const Scalar& y);

/// True when an exact scalar has denominator 1. Floating scalars never claim
/// integrality; asking throws ModeError.
bool is_integer(const Scalar& x);

/// Exact integer value of an integral exact scalar.
BigInt to_integer(const Scalar& x);

/// Largest integer <= x, in the mode of x.
Scalar floor(const Scalar& x);

/// x - floor(x), always in [0, 1).
Scalar frac(const Scalar& x);

/// x reduced modulo period (period > 0), in [0, period).
Scalar mod(const Scalar& x, const Scalar& period);

/// sqrt of a non-negative rational when it is again rational.
std::optional<Rational> exact_sqrt(const Rational& r);

/// exact: "p" or "p/q" (canonical, q > 0); floating: shortest round-trip
/// decimal.
std::string to_string(const Scalar& x);

/// Accepts "p", "p/q" and plain decimals ("0.9" -> 9/10) in exact mode;
/// decimal/scientific notation in floating mode. Whole string must parse.
Scalar parse_scalar(std::string_view text, Mode m);

std::ostream& operator<<(std::ostream& os, const Scalar& x);

}  // namespace bounce
