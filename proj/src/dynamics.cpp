#include "bounce/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace bounce {

namespace {

std::size_t segment_index(const std::vector<ZetaNode>& nodes, const Scalar& x) {
  auto it = std::upper_bound(nodes.begin(), nodes.end(), x,
                             [](const Scalar& v, const ZetaNode& n) { return v < n.tau; });
  if (it == nodes.begin() || it == nodes.end())
    throw DomainError("position outside the zeta node range");
  return static_cast<std::size_t>(it - nodes.begin()) - 1;
}

void require_same_mode(const PlateProfile& profile, const Scalar& g, const PhaseState& state) {
  const Mode m = profile_mode(profile);
  if (g.mode() != m || state.t.mode() != m || state.v.mode() != m)
    throw ModeError("profile, gravity and state must share one numeric mode");
}

long long floor_to_ll(const Scalar& x) {
  constexpr double kRange = 9e15;
  if (x.is_exact()) {
    const BigInt f = to_integer(floor(x));
    if (f > static_cast<long long>(kRange) || f < -static_cast<long long>(kRange))
      throw DomainError("time offset out of the walkable range");
    return f.convert_to<long long>();
  }
  const double f = std::floor(x.raw());
  if (!(std::abs(f) < kRange)) throw DomainError("time offset out of the walkable range");
  return static_cast<long long>(f);
}

}  // namespace

std::size_t locate_piece(const std::vector<QuadraticPiece>& pieces, const Scalar& x) {
  auto it = std::upper_bound(pieces.begin(), pieces.end(), x,
                             [](const Scalar& v, const QuadraticPiece& p) { return v < p.lo; });
  if (it == pieces.begin()) throw DomainError("position below the first piece");
  const std::size_t i = static_cast<std::size_t>(it - pieces.begin()) - 1;
  if (!(x < pieces[i].hi)) throw DomainError("pieces do not tile the circle");
  return i;
}

Scalar profile_upper_bound(const PlateProfile& profile) {
  const Mode m = profile_mode(profile);
  Scalar bound = Scalar::zero(m);
  bool first = true;
  for (const QuadraticPiece& p : profile.f_pieces) {
    Scalar local = max(eval_poly(p.a, p.b, p.c, p.lo), eval_poly(p.a, p.b, p.c, p.hi));
    if (p.a != 0) {
      const Scalar vertex = -p.b / (p.a * 2);
      if (p.lo < vertex && vertex < p.hi)
        local = max(local, eval_poly(p.a, p.b, p.c, vertex));
    }
    bound = first ? local : max(bound, local);
    first = false;
  }
  return bound;
}

ClearanceWindow clearance_window(const Scalar& pa, const Scalar& pb, const Scalar& pc,
                                 const Scalar& bound, const Scalar& t_min,
                                 const Scalar& t_max) {
  ClearanceWindow window;
  const Mode m = pa.mode();
  if (!(pa < 0)) return window;

  // Float estimate of where the parabola crosses the bound; the exact
  // evaluations below are what make the window trustworthy.
  const double ad = pa.approx(), bd = pb.approx(), cd = pc.approx() - bound.approx();
  const double disc = bd * bd - 4.0 * ad * cd;
  if (!(disc > 0)) return window;
  const double s = std::sqrt(disc);
  const double ra = (-bd - s) / (2.0 * ad);
  const double rb = (-bd + s) / (2.0 * ad);
  const double lo_root = std::min(ra, rb);
  const double hi_root = std::max(ra, rb);

  // Snap inward to a coarse rational grid so exact-mode arithmetic stays on
  // small denominators.
  constexpr long long kGrid = 64;
  constexpr double kRange = 9e15;
  if (!(std::abs(lo_root) * kGrid < kRange) || !(std::abs(hi_root) * kGrid < kRange))
    return window;

  const auto grid_point = [&](long long ticks) { return Scalar::of(ticks, m) / kGrid; };
  const auto clears = [&](const Scalar& t) {
    return t > t_min && t < t_max && eval_poly(pa, pb, pc, t) > bound;
  };

  long long from_ticks = static_cast<long long>(std::ceil(lo_root * kGrid)) + 1;
  long long to_ticks = static_cast<long long>(std::floor(hi_root * kGrid)) - 1;
  Scalar from = grid_point(from_ticks);
  Scalar to = grid_point(to_ticks);
  for (int tries = 0; tries < 4 && !clears(from); ++tries) from = grid_point(++from_ticks);
  for (int tries = 0; tries < 4 && !clears(to); ++tries) to = grid_point(--to_ticks);
  if (!clears(from) || !clears(to) || !(from < to)) return window;

  window.active = true;
  window.from = from;
  window.to = to;
  return window;
}

PieceWalker::PieceWalker(const std::vector<QuadraticPiece>& pieces, const Scalar& t_start)
    : pieces_(&pieces),
      mode_(t_start.mode()),
      base_period_(floor_to_ll(t_start)),
      seq_(locate_piece(pieces, frac(t_start))) {}

Scalar PieceWalker::shift() const {
  return Scalar::of(base_period_ + static_cast<long long>(seq_ / pieces_->size()), mode_);
}

void PieceWalker::jump_to(const Scalar& t) {
  long long period;
  try {
    period = floor_to_ll(t);
  } catch (const DomainError&) {
    return;  // absurdly far target; keep walking piece by piece
  }
  const long long rel = period - base_period_;
  const long long count = static_cast<long long>(pieces_->size());
  if (rel < 0 || rel > static_cast<long long>(9e15) / count) return;
  const std::size_t target =
      static_cast<std::size_t>(rel * count) + locate_piece(*pieces_, frac(t));
  if (target > seq_) seq_ = target;
}

Scalar plate_height(const PlateProfile& profile, const Scalar& t) {
  const Scalar x = frac(t);
  const QuadraticPiece& piece = profile.f_pieces[locate_piece(profile.f_pieces, x)];
  return eval_poly(piece.a, piece.b, piece.c, x);
}

Scalar plate_velocity(const PlateProfile& profile, const Scalar& t) {
  const Scalar x = frac(t);
  const std::size_t i = segment_index(profile.zeta_nodes, x);
  const ZetaNode& u = profile.zeta_nodes[i];
  const ZetaNode& w = profile.zeta_nodes[i + 1];
  return u.value + (w.value - u.value) * (x - u.tau) / (w.tau - u.tau);
}

Scalar divided_difference(const PlateProfile& profile, const Scalar& t1, const Scalar& t0) {
  if (t1 == t0) throw DomainError("divided difference over a degenerate interval");
  return (plate_height(profile, t1) - plate_height(profile, t0)) / (t1 - t0);
}

PhaseState gs_step(const PlateProfile& profile, const Scalar& g, const PhaseState& state) {
  const Scalar t1 = state.t + state.v * 2 / g;
  const Scalar v1 = state.v + plate_velocity(profile, t1) * 2;
  return {t1, v1};
}

PfStep pf_step(const PlateProfile& profile, const Scalar& g, const PhaseState& state,
               double tolerance) {
  require_same_mode(profile, g, state);
  const Mode m = profile_mode(profile);
  const Scalar& t0 = state.t;
  const Scalar& v0 = state.v;

  const Scalar zeta0 = plate_velocity(profile, t0);
  if (!(v0 > zeta0))
    throw NoImpactError("outgoing velocity " + to_string(v0) +
                        " does not exceed the plate velocity " + to_string(zeta0) +
                        "; the ball never leaves the plate");

  // Free flight from the plate: p(t) = f(t0) + v0 (t - t0) - g/2 (t - t0)^2.
  const Scalar f0 = plate_height(profile, t0);
  const Scalar pa = -g / 2;
  const Scalar pb = v0 + g * t0;
  const Scalar pc = f0 - v0 * t0 - g / 2 * t0 * t0;

  // Twice the still-plate flight time; the plate is bounded, so any return
  // happens well inside this window.
  const Scalar horizon = t0 + v0 * 4 / g;

  // While the parabola provably exceeds sup f there is nothing to intersect;
  // the walker can vault over that stretch instead of scanning it.
  const ClearanceWindow clear =
      clearance_window(pa, pb, pc, profile_upper_bound(profile), t0, horizon);

  std::optional<Scalar> impact;
  bool grazing = false;
  for (PieceWalker walker(profile.f_pieces, t0);; walker.advance()) {
    if (clear.active && walker.lo() >= clear.from && walker.hi() <= clear.to)
      walker.jump_to(clear.to);
    const QuadraticPiece& piece = walker.piece();
    const Scalar shift = walker.shift();
    const Scalar lo = walker.lo();
    const Scalar hi = walker.hi();
    if (lo > horizon)
      throw NoImpactError("no impact before t = " + to_string(horizon) +
                          "; velocity " + to_string(v0) +
                          " is below the map's well-definedness threshold");

    // Shift the piece to absolute time and subtract it from the parabola.
    const Scalar fa = piece.a;
    const Scalar fb = piece.b - piece.a * shift * 2;
    const Scalar fc = (piece.a * shift - piece.b) * shift + piece.c;
    impact = first_root_in_window(pa - fa, pb - fb, pc - fc, t0, lo, hi,
                                  m == Mode::floating ? tolerance : 0.0, &grazing);
    if (impact) break;
  }

  const Scalar t1 = *impact;
  const Scalar dd = divided_difference(profile, t1, t0);
  const Scalar v1 = v0 + plate_velocity(profile, t1) * 2 - dd * 2;

  const Scalar residual = t1 - t0 - v0 * 2 / g + dd * 2 / g;
  if (m == Mode::exact) {
    if (residual != 0) throw Error("internal: exact impact violates the implicit relation");
    return {{t1, v1}, 0.0, false};
  }
  return {{t1, v1}, std::abs(residual.raw()), grazing};
}

Trajectory orbit(const PlateProfile& profile, const Scalar& g, const PhaseState& initial,
                 MapKind kind, long long steps, double tolerance) {
  require_same_mode(profile, g, initial);
  if (steps < 0) throw DomainError("step count must be non-negative");

  Trajectory traj;
  traj.kind = kind;
  traj.mode = profile_mode(profile);
  traj.g = g;
  traj.states.reserve(static_cast<std::size_t>(steps) + 1);
  traj.states.push_back(initial);
  if (kind == MapKind::pf) traj.steps.reserve(static_cast<std::size_t>(steps));

  for (long long i = 0; i < steps; ++i) {
    const PhaseState& current = traj.states.back();
    try {
      PhaseState next;
      if (kind == MapKind::gs) {
        next = gs_step(profile, g, current);
      } else {
        PfStep step = pf_step(profile, g, current, tolerance);
        next = step.next;
        traj.steps.push_back({step.residual, step.grazing});
      }
      if (!(next.v > 0))
        throw DomainError("post-impact velocity " + to_string(next.v) + " is not positive");
      if (!(next.t > current.t))
        throw DomainError("impact times must increase");
      traj.states.push_back(next);
    } catch (const StepError&) {
      throw;
    } catch (const Error& e) {
      throw StepError(static_cast<std::size_t>(i), e.what());
    }
  }
  return traj;
}

PlateProfile to_float(const PlateProfile& profile) {
  PlateProfile out;
  out.delta = profile.delta.to_float();
  out.zeta_nodes.reserve(profile.zeta_nodes.size());
  for (const ZetaNode& n : profile.zeta_nodes)
    out.zeta_nodes.push_back({n.tau.to_float(), n.value.to_float()});
  out.breakpoints.reserve(profile.breakpoints.size());
  for (const Breakpoint& b : profile.breakpoints)
    out.breakpoints.push_back({b.tau.to_float(), b.target.to_float()});
  out.f_pieces.reserve(profile.f_pieces.size());
  for (const QuadraticPiece& p : profile.f_pieces)
    out.f_pieces.push_back(
        {p.a.to_float(), p.b.to_float(), p.c.to_float(), p.lo.to_float(), p.hi.to_float()});
  return out;
}

PhaseState to_float(const PhaseState& state) {
  return {state.t.to_float(), state.v.to_float()};
}

}  // namespace bounce
