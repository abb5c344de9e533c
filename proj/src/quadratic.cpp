#include "bounce/quadratic.hpp"

#include <cmath>

namespace bounce {

namespace {

// Relative discriminant threshold below which a floating root pair counts as
// a grazing (near-tangent) contact.
constexpr double kGrazeRel = 1e-10;

enum Region { left_of_roots = 0, between_roots = 1, right_of_roots = 2 };

// Position of a rational point x relative to the two irrational roots of q.
// Valid only when disc > 0 and q(x) != 0 (guaranteed: no rational root).
Region region_of(const Scalar& a, const Scalar& b, const Scalar& c, const Scalar& x) {
  const Scalar q = eval_poly(a, b, c, x);
  if (sign(a) * sign(q) < 0) return between_roots;
  const Scalar vertex = -b / (a * 2);
  return x < vertex ? left_of_roots : right_of_roots;
}

std::optional<Scalar> pick_smallest_in_window(Scalar r1, Scalar r2, const Scalar& after,
                                              const Scalar& lo, const Scalar& hi,
                                              const Scalar& guard) {
  if (r2 < r1) std::swap(r1, r2);
  for (const Scalar* r : {&r1, &r2}) {
    if (*r > after + guard && *r >= lo && *r < hi) return *r;
  }
  return std::nullopt;
}

}  // namespace

Scalar eval_poly(const Scalar& a, const Scalar& b, const Scalar& c, const Scalar& t) {
  return (a * t + b) * t + c;
}

Scalar eval_quadratic(const QuadraticPiece& piece, const Scalar& t) {
  if (t < piece.lo || t >= piece.hi)
    throw DomainError("evaluation point " + to_string(t) + " outside piece [" +
                      to_string(piece.lo) + ", " + to_string(piece.hi) + ")");
  return eval_poly(piece.a, piece.b, piece.c, t);
}

std::optional<Scalar> first_root_in_window(const Scalar& a, const Scalar& b, const Scalar& c,
                                           const Scalar& after, const Scalar& lo,
                                           const Scalar& hi, double guard, bool* grazing) {
  const Mode m = a.mode();
  const Scalar zero = Scalar::zero(m);
  const Scalar g = m == Mode::exact ? zero : Scalar::floating(guard);

  // Degenerate coefficients first.
  if (a == zero) {
    if (b == zero) {
      if (c != zero) return std::nullopt;
      // Identically zero: the root set is the whole domain. The window has a
      // smallest point only when it is closed on the left.
      if (lo > after && lo < hi) return lo;
      return std::nullopt;
    }
    const Scalar r = -c / b;
    if (r > after + g && r >= lo && r < hi) return r;
    return std::nullopt;
  }

  if (m == Mode::exact) {
    const Scalar disc = b * b - a * c * 4;
    if (disc < zero) return std::nullopt;
    if (auto s = exact_sqrt(disc.rational())) {
      const Scalar sq = Scalar::exact(*s);
      const Scalar r1 = (-b - sq) / (a * 2);
      const Scalar r2 = (-b + sq) / (a * 2);
      return pick_smallest_in_window(r1, r2, after, lo, hi, zero);
    }
    // Irrational root pair. Decide membership without the radical: rational
    // points are never roots here, so endpoint openness does not matter.
    const Scalar w1 = max(lo, after);
    if (!(w1 < hi)) return std::nullopt;
    if (region_of(a, b, c, w1) < region_of(a, b, c, hi))
      throw DomainError("quadratic has an irrational root in the window; use floating mode");
    return std::nullopt;
  }

  const double ad = a.raw(), bd = b.raw(), cd = c.raw();
  const double disc = bd * bd - 4.0 * ad * cd;
  const double scale = std::max(bd * bd, std::abs(4.0 * ad * cd));
  if (grazing && scale > 0 && std::abs(disc) <= kGrazeRel * scale) *grazing = true;
  if (disc < 0) return std::nullopt;
  double r1, r2;
  if (cd == 0) {
    r1 = 0.0;
    r2 = -bd / ad;
  } else {
    const double s = std::sqrt(disc);
    const double q = -(bd + std::copysign(s, bd)) / 2.0;
    if (q == 0) {
      r1 = r2 = -bd / (2.0 * ad);
    } else {
      r1 = q / ad;
      r2 = cd / q;
    }
  }
  return pick_smallest_in_window(Scalar::floating(r1), Scalar::floating(r2), after, lo, hi, g);
}

std::optional<Scalar> first_root_after(const QuadraticPiece& piece, const Scalar& t_min) {
  return first_root_in_window(piece.a, piece.b, piece.c, t_min, piece.lo, piece.hi);
}

PositivityResult positive_on_open_interval(const Scalar& a, const Scalar& b, const Scalar& c,
                                           const Scalar& lo, const Scalar& hi,
                                           bool allow_zero_at_lo, bool allow_zero_at_hi,
                                           double zero_tol) {
  if (!(lo < hi)) throw DomainError("positivity interval is empty");
  const Mode m = a.mode();
  const Scalar zero = Scalar::zero(m);
  const Scalar tol =
      m == Mode::exact ? zero : Scalar::floating(zero_tol);

  const auto is_zero = [&](const Scalar& x) { return abs(x) <= tol; };
  const auto fail = [&](Scalar t, Scalar q, std::string reason) {
    return PositivityResult{false, std::move(t), std::move(q), std::move(reason)};
  };
  const auto ok = [&] { return PositivityResult{true, zero, zero, ""}; };

  const Scalar ql = eval_poly(a, b, c, lo);
  const Scalar qh = eval_poly(a, b, c, hi);

  if (ql < -tol) return fail(lo, ql, "negative at left endpoint");
  if (qh < -tol) return fail(hi, qh, "negative at right endpoint");
  const bool zl = is_zero(ql);
  const bool zh = is_zero(qh);
  if (zl && !allow_zero_at_lo) return fail(lo, ql, "unexpected zero at left endpoint");
  if (zh && !allow_zero_at_hi) return fail(hi, qh, "unexpected zero at right endpoint");

  const Scalar mid = (lo + hi) / 2;

  if (a == zero && b == zero) {
    if (c > tol) return ok();
    return fail(mid, c, "constant piece is not strictly positive");
  }
  if (a == zero) {
    if (zl && zh) return fail(mid, eval_poly(a, b, c, mid), "linear piece vanishes at both endpoints");
    return ok();
  }

  if (zl && zh) {
    // Both endpoints are the roots: q = a (t - lo)(t - hi).
    if (a < zero) return ok();
    return fail(mid, eval_poly(a, b, c, mid), "upward parabola with roots at both endpoints");
  }
  if (zl || zh) {
    const Scalar known = zl ? lo : hi;
    const Scalar other = -b / a - known;  // root sum = -b/a
    if (zl) {
      if (a > zero && other <= lo) return ok();
      if (a < zero && other >= hi) return ok();
    } else {
      if (a > zero && other >= hi) return ok();
      if (a < zero && other <= lo) return ok();
    }
    // A sub-interval dips below zero: between the roots when the parabola
    // opens upward, outside them when it opens downward. Report its midpoint.
    Scalar wlo = lo, whi = hi;
    if (other > lo && other < hi) {
      const bool toward_other = a > zero;
      if (zl == toward_other)
        whi = other;
      else
        wlo = other;
    }
    const Scalar w = (wlo + whi) / 2;
    return fail(w, eval_poly(a, b, c, w), "second root inside the interval");
  }

  // Strictly positive endpoints: only an upward parabola dipping through the
  // interval can fail, and then its vertex is the minimum.
  if (a > zero) {
    const Scalar disc = b * b - a * c * 4;
    const Scalar vertex = -b / (a * 2);
    if (disc >= zero && vertex > lo && vertex < hi)
      return fail(vertex, eval_poly(a, b, c, vertex), "vertex dips to or below zero");
  }
  return ok();
}

}  // namespace bounce
