#pragma once

#include "bounce/construction.hpp"

#include <vector>

namespace bounce {

inline constexpr double kDefaultGapTolerance = 1e-12;

/// One impact: absolute impact time and outgoing velocity.
struct PhaseState {
  Scalar t;
  Scalar v;
};

enum class MapKind { gs, pf };

/// Per-step diagnostics, meaningful for the implicit map in floating mode.
struct StepInfo {
  double residual = 0.0;  // |t1 - t0 - (2/g) v0 + (2/g) f[t1, t0]|
  bool grazing = false;   // a near-tangent root was encountered
};

struct Trajectory {
  MapKind kind = MapKind::gs;
  Mode mode = Mode::exact;
  Scalar g;
  std::vector<PhaseState> states;
  std::vector<StepInfo> steps;  // one per step for the implicit map, else empty
};

/// Index of the piece whose half-open domain contains x (x already in [0, 1)).
std::size_t locate_piece(const std::vector<QuadraticPiece>& pieces, const Scalar& x);

/// Least upper bound of f over one period; attained at a piece endpoint or an
/// interior vertex, so it is computed exactly in exact mode.
Scalar profile_upper_bound(const PlateProfile& profile);

/// Sub-interval of (t_min, t_max) on which the downward parabola
/// pa t^2 + pb t + pc provably exceeds `bound`: both endpoints are verified
/// by direct evaluation and concavity covers everything between. Used to
/// skip plate pieces a flight cannot touch; `active` is false when no such
/// interval was found (callers then scan every piece).
struct ClearanceWindow {
  bool active = false;
  Scalar from, to;
};
ClearanceWindow clearance_window(const Scalar& pa, const Scalar& pb, const Scalar& pc,
                                 const Scalar& bound, const Scalar& t_min, const Scalar& t_max);

/// Walks the periodic piece tiling in absolute time, forward from t_start.
class PieceWalker {
 public:
  PieceWalker(const std::vector<QuadraticPiece>& pieces, const Scalar& t_start);

  const QuadraticPiece& piece() const { return (*pieces_)[seq_ % pieces_->size()]; }
  Scalar shift() const;            // absolute offset of the current piece
  Scalar lo() const { return piece().lo + shift(); }
  Scalar hi() const { return piece().hi + shift(); }
  void advance() { ++seq_; }
  /// Move forward to the piece containing t (no-op when already past it).
  void jump_to(const Scalar& t);

 private:
  const std::vector<QuadraticPiece>* pieces_;
  Mode mode_;
  long long base_period_;
  std::size_t seq_;  // pieces advanced since the base period started
};

/// f at absolute time t (reduced mod 1 internally).
Scalar plate_height(const PlateProfile& profile, const Scalar& t);

/// zeta = f' at absolute time t.
Scalar plate_velocity(const PlateProfile& profile, const Scalar& t);

/// (f(t1) - f(t0)) / (t1 - t0); DomainError when t1 = t0.
Scalar divided_difference(const PlateProfile& profile, const Scalar& t1, const Scalar& t0);

/// Explicit map: t1 = t0 + (2/g) v0, v1 = v0 + 2 zeta(t1).
PhaseState gs_step(const PlateProfile& profile, const Scalar& g, const PhaseState& state);

struct PfStep {
  PhaseState next;
  double residual = 0.0;
  bool grazing = false;
};

/// Implicit map via physical first-impact detection: the free-flight parabola
/// from (t0, f(t0), v0) is intersected with f piece by piece and the earliest
/// crossing after t0 is the next impact. The returned time satisfies
/// t1 = t0 + (2/g) v0 - (2/g) f[t1, t0] exactly in exact mode and within the
/// reported residual in floating mode.
PfStep pf_step(const PlateProfile& profile, const Scalar& g, const PhaseState& state,
               double tolerance = kDefaultGapTolerance);

/// Iterates the chosen map; wraps failures in StepError with the failing
/// index. Velocities must stay positive along the way.
Trajectory orbit(const PlateProfile& profile, const Scalar& g, const PhaseState& initial,
                 MapKind kind, long long steps, double tolerance = kDefaultGapTolerance);

/// Rounded copies for floating-mode simulation.
PlateProfile to_float(const PlateProfile& profile);
PhaseState to_float(const PhaseState& state);

}  // namespace bounce
