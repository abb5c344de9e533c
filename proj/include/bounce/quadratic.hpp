#pragma once

#include "bounce/scalar.hpp"

#include <optional>
#include <string>

namespace bounce {

/// q(t) = a*t^2 + b*t + c evaluated on the half-open interval [lo, hi).
struct QuadraticPiece {
  Scalar a, b, c;
  Scalar lo, hi;
};

/// a*t^2 + b*t + c without any domain restriction.
Scalar eval_poly(const Scalar& a, const Scalar& b, const Scalar& c, const Scalar& t);

/// Piece value at t; DomainError outside [lo, hi).
Scalar eval_quadratic(const QuadraticPiece& piece, const Scalar& t);

/// Smallest root r of q with r > after, lo <= r < hi; nullopt when none.
///
/// Exact mode decides root existence with rational sign analysis and only
/// extracts a root when it is rational; an irrational root inside the window
/// raises DomainError (switch to floating mode for such inputs).
///
/// Floating mode uses the cancellation-safe closed form; roots within `guard`
/// of `after` are discarded, and `grazing` (when given) is set when the
/// discriminant is within tolerance of zero relative to the coefficients.
std::optional<Scalar> first_root_in_window(const Scalar& a, const Scalar& b, const Scalar& c,
                                           const Scalar& after, const Scalar& lo,
                                           const Scalar& hi, double guard = 0.0,
                                           bool* grazing = nullptr);

/// first_root_in_window over the piece's own domain.
std::optional<Scalar> first_root_after(const QuadraticPiece& piece, const Scalar& t_min);

/// Certificate outcome for strict positivity of a quadratic on an open interval.
struct PositivityResult {
  bool positive = false;
  Scalar witness_t;  // a point with q(witness_t) <= 0 when !positive
  Scalar witness_q;
  std::string reason;
};

/// Decides q > 0 on the open interval (lo, hi), optionally permitting
/// q(lo) = 0 / q(hi) = 0 at the stated endpoint. Exact mode is a proof
/// (discriminant and sign analysis over rationals); floating mode applies the
/// same analysis with |value| <= zero_tol classified as zero.
PositivityResult positive_on_open_interval(const Scalar& a, const Scalar& b, const Scalar& c,
                                           const Scalar& lo, const Scalar& hi,
                                           bool allow_zero_at_lo, bool allow_zero_at_hi,
                                           double zero_tol = 0.0);

}  // namespace bounce
