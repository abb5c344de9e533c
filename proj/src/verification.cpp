#include "bounce/verification.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bounce {

namespace {

void require_exact(std::initializer_list<const Scalar*> scalars, const char* who) {
  for (const Scalar* s : scalars)
    if (!s->is_exact())
      throw ModeError(std::string(who) + " requires exact scalars");
}

void require_exact_times(const std::vector<Scalar>& times, const char* who) {
  for (const Scalar& t : times)
    if (!t.is_exact()) throw ModeError(std::string(who) + " requires exact scalars");
}

CheckItem make_item(std::string id, std::string statement) {
  CheckItem item;
  item.id = std::move(id);
  item.statement = std::move(statement);
  return item;
}

void set_equal(CheckItem& item, const Scalar& lhs, const Scalar& rhs) {
  item.lhs = to_string(lhs);
  item.rhs = to_string(rhs);
  item.status = lhs == rhs ? CheckStatus::pass : CheckStatus::fail;
}

bool positive_integer(const Scalar& x) { return is_integer(x) && x >= 1; }

Scalar nearest_integer(const Scalar& x) {
  // floating helper; half-away rounding is fine for diagnostics
  return Scalar::floating(std::round(x.raw()));
}

}  // namespace

std::string_view to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::pass: return "PASS";
    case CheckStatus::fail: return "FAIL";
    default: return "ERROR";
  }
}

bool CheckReport::all_passed() const {
  return std::all_of(items.begin(), items.end(),
                     [](const CheckItem& i) { return i.status == CheckStatus::pass; });
}

const CheckItem* CheckReport::find(std::string_view id) const {
  for (const CheckItem& item : items)
    if (item.id == id) return &item;
  return nullptr;
}

void CheckReport::merge(CheckReport other) {
  items.insert(items.end(), std::make_move_iterator(other.items.begin()),
               std::make_move_iterator(other.items.end()));
}

std::string CheckReport::to_text() const {
  std::ostringstream os;
  for (const CheckItem& item : items) {
    os << item.id << ' ' << to_string(item.status);
    if (!item.lhs.empty() || !item.rhs.empty())
      os << " lhs=" << item.lhs << " rhs=" << item.rhs;
    if (!item.note.empty()) os << " note=" << item.note;
    os << " | " << item.statement << '\n';
  }
  return os.str();
}

CheckReport check_lemma1(const std::vector<Scalar>& times, const std::vector<Scalar>& zetas,
                         const Scalar& g, long long N, const Scalar& W, const Scalar& V) {
  if (N < 2) throw DomainError("check_lemma1 needs N >= 2");
  if (times.size() != static_cast<std::size_t>(N) || zetas.size() != times.size())
    throw DomainError("check_lemma1 needs t_0..t_{N-1} with matching zeta values");
  require_exact_times(times, "check_lemma1");
  require_exact_times(zetas, "check_lemma1");
  require_exact({&g, &W, &V}, "check_lemma1");

  CheckReport report;

  CheckItem cond1 = make_item(
      "lemma1.cond1", "N (t_1 - t_0) + (4/g) sum_{k=1}^{N-1} (N-k) zeta(t_k) equals the "
                      "positive integer W");
  Scalar weighted = Scalar::exact(0);
  for (long long k = 1; k < N; ++k)
    weighted += zetas[static_cast<std::size_t>(k)] * (N - k);
  const Scalar lhs1 = (times[1] - times[0]) * N + weighted * 4 / g;
  set_equal(cond1, lhs1, W);
  if (!positive_integer(W)) {
    cond1.status = CheckStatus::fail;
    cond1.note = "W is not a positive integer";
  }
  report.items.push_back(std::move(cond1));

  CheckItem cond2 = make_item(
      "lemma1.cond2", "(4/g) sum_{k=0}^{N-1} zeta(t_k) equals the positive integer V");
  Scalar total = Scalar::exact(0);
  for (const Scalar& z : zetas) total += z;
  set_equal(cond2, total * 4 / g, V);
  if (!positive_integer(V)) {
    cond2.status = CheckStatus::fail;
    cond2.note = "V is not a positive integer";
  }
  report.items.push_back(std::move(cond2));
  return report;
}

CheckReport check_prop1(const PlateProfile& profile, const std::vector<Scalar>& times,
                        const Scalar& g) {
  if (times.size() < 3) throw DomainError("check_prop1 needs t_0..t_N with N >= 2");
  require_exact_times(times, "check_prop1");
  require_exact({&g, &profile.delta}, "check_prop1");
  const std::size_t n = times.size() - 1;

  CheckReport report;

  CheckItem cond1 = make_item("prop1.cond1", "t_N - t_0 is a positive integer");
  const Scalar span = times[n] - times[0];
  cond1.lhs = to_string(span);
  cond1.rhs = "positive integer";
  cond1.status = positive_integer(span) ? CheckStatus::pass : CheckStatus::fail;
  report.items.push_back(std::move(cond1));

  CheckItem cond2 = make_item(
      "prop1.cond2",
      "(4/g) zeta(t_0) + (t_N - t_{N-1}) - (t_1 - t_0) is a positive integer");
  const Scalar gain = plate_velocity(profile, times[0]) * 4 / g +
                      (times[n] - times[n - 1]) - (times[1] - times[0]);
  cond2.lhs = to_string(gain);
  cond2.rhs = "positive integer";
  cond2.status = positive_integer(gain) ? CheckStatus::pass : CheckStatus::fail;
  report.items.push_back(std::move(cond2));

  CheckItem cond3 = make_item("prop1.cond3", "f(t_0) = f(t_1) = ... = f(t_{N-1})");
  const Scalar h0 = plate_height(profile, times[0]);
  cond3.status = CheckStatus::pass;
  cond3.lhs = to_string(h0);
  cond3.rhs = to_string(h0);
  for (std::size_t k = 1; k < n; ++k) {
    const Scalar hk = plate_height(profile, times[k]);
    if (hk != h0) {
      cond3.status = CheckStatus::fail;
      cond3.rhs = to_string(hk);
      cond3.note = "first mismatch at k=" + std::to_string(k);
      break;
    }
  }
  report.items.push_back(std::move(cond3));

  CheckItem cond4 = make_item(
      "prop1.cond4", "zeta(t_k) = (g/4)(t_{k+1} - 2 t_k + t_{k-1}) for 1 <= k <= N-1");
  cond4.status = CheckStatus::pass;
  for (std::size_t k = 1; k < n; ++k) {
    const Scalar lhs = plate_velocity(profile, times[k]);
    const Scalar rhs = g / 4 * (times[k + 1] - times[k] * 2 + times[k - 1]);
    if (lhs != rhs) {
      cond4.status = CheckStatus::fail;
      cond4.lhs = to_string(lhs);
      cond4.rhs = to_string(rhs);
      cond4.note = "first mismatch at k=" + std::to_string(k);
      break;
    }
  }
  report.items.push_back(std::move(cond4));
  return report;
}

CheckReport check_lemma3(const std::vector<Scalar>& times, const Scalar& g, const Scalar& delta,
                         const Scalar& eta, const Scalar& W, const Scalar& V) {
  if (times.size() < 3) throw DomainError("check_lemma3 needs t_0..t_N with N >= 2");
  require_exact_times(times, "check_lemma3");
  require_exact({&g, &delta, &eta, &W, &V}, "check_lemma3");
  const std::size_t n = times.size() - 1;

  CheckReport report;

  CheckItem cond1 = make_item("lemma3.cond1", "t_N - t_0 equals the positive integer W");
  set_equal(cond1, times[n] - times[0], W);
  if (!positive_integer(W)) {
    cond1.status = CheckStatus::fail;
    cond1.note = "W is not a positive integer";
  }
  report.items.push_back(std::move(cond1));

  CheckItem cond2 = make_item(
      "lemma3.cond2",
      "(4/g) eta + (t_N - t_{N-1}) - (t_1 - t_0) equals the positive integer V, 0 < eta <= delta");
  const Scalar lhs2 = eta * 4 / g + (times[n] - times[n - 1]) - (times[1] - times[0]);
  set_equal(cond2, lhs2, V);
  if (!(eta > 0) || !(eta <= delta)) {
    cond2.status = CheckStatus::fail;
    cond2.note = "eta=" + to_string(eta) + " outside (0, delta], delta=" + to_string(delta);
  } else if (!positive_integer(V)) {
    cond2.status = CheckStatus::fail;
    cond2.note = "V is not a positive integer";
  }
  report.items.push_back(std::move(cond2));

  CheckItem cond3 = make_item(
      "lemma3.cond3", "(g/4)(t_{k+1} - 2 t_k + t_{k-1}) = delta for 1 <= k <= N-1");
  cond3.status = CheckStatus::pass;
  cond3.lhs = to_string(delta);
  cond3.rhs = to_string(delta);
  for (std::size_t k = 1; k < n; ++k) {
    const Scalar lhs = g / 4 * (times[k + 1] - times[k] * 2 + times[k - 1]);
    if (lhs != delta) {
      cond3.status = CheckStatus::fail;
      cond3.lhs = to_string(lhs);
      cond3.rhs = to_string(delta);
      cond3.note = "first mismatch at k=" + std::to_string(k);
      break;
    }
  }
  report.items.push_back(std::move(cond3));
  return report;
}

namespace {

// Signed trapezoid area of the node polyline over [nodes[i].tau, nodes[j].tau].
Scalar polyline_area(const std::vector<ZetaNode>& nodes, std::size_t i, std::size_t j) {
  Scalar area = Scalar::exact(0);
  for (std::size_t k = i; k < j; ++k)
    area += (nodes[k].value + nodes[k + 1].value) * (nodes[k + 1].tau - nodes[k].tau) / 2;
  return area;
}

}  // namespace

CheckReport check_profile(const PlateProfile& profile) {
  if (profile_mode(profile) != Mode::exact)
    throw ModeError("check_profile requires exact scalars");
  if (profile.breakpoints.size() < 2 || profile.zeta_nodes.size() < 2)
    throw DomainError("profile is structurally empty");

  CheckReport report;
  const std::vector<ZetaNode>& nodes = profile.zeta_nodes;

  CheckItem heights = make_item("profile.heights", "f vanishes at every breakpoint");
  heights.status = CheckStatus::pass;
  heights.lhs = "0";
  heights.rhs = "0";
  for (const Breakpoint& bp : profile.breakpoints) {
    const Scalar h = plate_height(profile, bp.tau);
    if (h != 0) {
      heights.status = CheckStatus::fail;
      heights.lhs = to_string(h);
      heights.note = "at tau=" + to_string(bp.tau);
      break;
    }
  }
  report.items.push_back(std::move(heights));

  CheckItem targets = make_item("profile.targets",
                                "zeta takes the assigned derivative target at every breakpoint");
  targets.status = CheckStatus::pass;
  for (const Breakpoint& bp : profile.breakpoints) {
    const Scalar z = plate_velocity(profile, bp.tau);
    if (z != bp.target) {
      targets.status = CheckStatus::fail;
      targets.lhs = to_string(z);
      targets.rhs = to_string(bp.target);
      targets.note = "at tau=" + to_string(bp.tau);
      break;
    }
  }
  report.items.push_back(std::move(targets));

  CheckItem bound = make_item("profile.bound", "max |zeta| <= delta (attained at nodes)");
  Scalar peak = Scalar::exact(0);
  for (const ZetaNode& n : nodes) peak = max(peak, abs(n.value));
  bound.lhs = to_string(peak);
  bound.rhs = to_string(profile.delta);
  bound.status = peak <= profile.delta ? CheckStatus::pass : CheckStatus::fail;
  report.items.push_back(std::move(bound));

  CheckItem area = make_item("profile.area",
                             "zeta integrates to zero between consecutive breakpoints");
  area.status = CheckStatus::pass;
  area.lhs = "0";
  area.rhs = "0";
  std::size_t cursor = 0;
  for (std::size_t b = 0; b + 1 < profile.breakpoints.size(); ++b) {
    const Scalar& from = profile.breakpoints[b].tau;
    const Scalar& to = profile.breakpoints[b + 1].tau;
    while (cursor < nodes.size() && nodes[cursor].tau < from) ++cursor;
    std::size_t end = cursor;
    while (end < nodes.size() && nodes[end].tau < to) ++end;
    if (cursor >= nodes.size() || end >= nodes.size() || nodes[cursor].tau != from ||
        nodes[end].tau != to) {
      area.status = CheckStatus::error;
      area.note = "breakpoints are not aligned with zeta nodes";
      break;
    }
    const Scalar piece_area = polyline_area(nodes, cursor, end);
    if (piece_area != 0) {
      area.status = CheckStatus::fail;
      area.lhs = to_string(piece_area);
      area.note = "interval [" + to_string(from) + ", " + to_string(to) + "]";
      break;
    }
    cursor = end;
  }
  report.items.push_back(std::move(area));

  CheckItem periodic = make_item("profile.periodic",
                                 "zeta(0) = zeta(1) and f(1) = f(0) over the full circle");
  periodic.status = CheckStatus::pass;
  const Scalar total = polyline_area(nodes, 0, nodes.size() - 1);
  if (nodes.front().tau != 0 || nodes.back().tau != 1) {
    periodic.status = CheckStatus::fail;
    periodic.note = "node range is not [0, 1]";
  } else if (nodes.front().value != nodes.back().value) {
    periodic.status = CheckStatus::fail;
    periodic.lhs = to_string(nodes.front().value);
    periodic.rhs = to_string(nodes.back().value);
    periodic.note = "zeta endpoint values differ";
  } else if (total != 0) {
    periodic.status = CheckStatus::fail;
    periodic.lhs = to_string(total);
    periodic.rhs = "0";
    periodic.note = "f(1) - f(0) is the full-circle integral of zeta";
  }
  report.items.push_back(std::move(periodic));
  return report;
}

CheckReport check_profile(const PlateProfile& profile, const EscapeBlueprint& blueprint) {
  CheckReport report = check_profile(profile);

  CheckItem cross = make_item("profile.breakpoints",
                              "breakpoints equal the blueprint times reduced mod 1 with their "
                              "derivative targets");
  cross.status = CheckStatus::pass;
  try {
    const std::vector<Breakpoint> expected = reduce_mod_one(blueprint.t, blueprint.D);
    if (expected.size() != profile.breakpoints.size()) {
      cross.status = CheckStatus::fail;
      cross.lhs = std::to_string(profile.breakpoints.size());
      cross.rhs = std::to_string(expected.size());
      cross.note = "breakpoint counts differ";
    } else {
      for (std::size_t i = 0; i < expected.size(); ++i) {
        const bool same = expected[i].tau == profile.breakpoints[i].tau &&
                          expected[i].target == profile.breakpoints[i].target;
        if (!same) {
          cross.status = CheckStatus::fail;
          cross.lhs = "(" + to_string(profile.breakpoints[i].tau) + ", " +
                      to_string(profile.breakpoints[i].target) + ")";
          cross.rhs = "(" + to_string(expected[i].tau) + ", " + to_string(expected[i].target) + ")";
          cross.note = "index " + std::to_string(i);
          break;
        }
      }
    }
  } catch (const Error& e) {
    cross.status = CheckStatus::error;
    cross.note = e.what();
  }
  report.items.push_back(std::move(cross));
  return report;
}

CheckReport check_escape(const Trajectory& traj, long long N, long long V, const Scalar& g,
                         double tolerance, std::vector<Scalar>* sigmas) {
  if (N < 1 || V < 1) throw DomainError("check_escape needs N >= 1 and V >= 1");
  const std::size_t period = static_cast<std::size_t>(N);
  if (traj.states.size() < 2 * period + 1)
    throw DomainError("trajectory too short: need at least 2N+1 states, have " +
                      std::to_string(traj.states.size()));
  if (g.mode() != traj.mode)
    throw ModeError("check_escape requires gravity in the trajectory's mode");
  const bool exact = traj.mode == Mode::exact;
  const Scalar gain = g / 2 * V;
  const Scalar tol = exact ? Scalar::exact(0) : Scalar::floating(tolerance);

  CheckReport report;
  CheckItem vgain = make_item("escape.vgain", "v_{n+N} - v_n = (g/2) V for every window");
  vgain.status = CheckStatus::pass;
  vgain.lhs = to_string(gain);
  vgain.rhs = to_string(gain);
  CheckItem tshift = make_item("escape.tshift",
                               "t_{n+N} - t_n is a non-negative integer for every window");
  tshift.status = CheckStatus::pass;

  std::vector<Scalar> shift_values;
  for (std::size_t n = 0; n + period < traj.states.size(); ++n) {
    const Scalar dv = traj.states[n + period].v - traj.states[n].v;
    if (vgain.status == CheckStatus::pass && !(abs(dv - gain) <= tol)) {
      vgain.status = CheckStatus::fail;
      vgain.lhs = to_string(dv);
      vgain.rhs = to_string(gain);
      vgain.note = "first mismatch at n=" + std::to_string(n);
    }

    const Scalar dt = traj.states[n + period].t - traj.states[n].t;
    bool integral;
    Scalar sigma = dt;
    if (exact) {
      integral = is_integer(dt) && dt >= 0;
    } else {
      sigma = nearest_integer(dt);
      integral = abs(dt - sigma) <= tol && sigma >= 0;
    }
    if (tshift.status == CheckStatus::pass && !integral) {
      tshift.status = CheckStatus::fail;
      tshift.lhs = to_string(dt);
      tshift.rhs = "non-negative integer";
      tshift.note = "first mismatch at n=" + std::to_string(n);
    }
    shift_values.push_back(sigma);
  }

  if (tshift.status == CheckStatus::pass && !shift_values.empty()) {
    std::string preview = "sigma=(";
    const std::size_t shown = std::min<std::size_t>(shift_values.size(), 8);
    for (std::size_t i = 0; i < shown; ++i) {
      if (i) preview += ", ";
      preview += to_string(shift_values[i]);
    }
    if (shown < shift_values.size()) preview += ", ...";
    preview += ")";
    tshift.note = preview;
    tshift.lhs = to_string(shift_values.front());
    tshift.rhs = to_string(shift_values.front());
  }
  if (sigmas) *sigmas = shift_values;

  report.items.push_back(std::move(vgain));
  report.items.push_back(std::move(tshift));
  return report;
}

CheckReport identity_oracles(const std::vector<Scalar>& times) {
  if (times.size() < 2) throw DomainError("identity_oracles needs t_0..t_N with N >= 1");
  const std::size_t n = times.size() - 1;
  const Mode m = times.front().mode();
  const Scalar zero = Scalar::zero(m);

  Scalar plain = zero;
  Scalar weighted = zero;
  for (std::size_t k = 1; k < n; ++k) {
    const Scalar second = times[k + 1] - times[k] * 2 + times[k - 1];
    plain += second;
    weighted += second * static_cast<long long>(n - k);
  }

  CheckReport report;
  CheckItem one = make_item("identity.telescope1",
                            "sum T_k = (t_N - t_{N-1}) - (t_1 - t_0)");
  set_equal(one, plain, (times[n] - times[n - 1]) - (times[1] - times[0]));
  report.items.push_back(std::move(one));

  CheckItem two = make_item("identity.telescope2",
                            "sum (N-k) T_k = (N-1) t_0 - N t_1 + t_N");
  set_equal(two, weighted,
            times[0] * static_cast<long long>(n - 1) - times[1] * static_cast<long long>(n) +
                times[n]);
  report.items.push_back(std::move(two));
  return report;
}

CheckReport check_feasibility(const PlateProfile& profile, const Trajectory& traj,
                              const Scalar& g, double zero_tol) {
  if (traj.states.size() < 2) throw DomainError("check_feasibility needs at least one flight");
  const Mode m = profile_mode(profile);
  if (g.mode() != m || traj.mode != m)
    throw ModeError("check_feasibility requires one shared numeric mode");
  const bool exact = m == Mode::exact;
  const Scalar tol = exact ? Scalar::exact(0) : Scalar::floating(zero_tol);

  CheckReport report;
  CheckItem departure = make_item("feasibility.departure",
                                  "v_n > 0 and v_n > zeta(t_n) at every departure");
  departure.status = CheckStatus::pass;
  CheckItem arrival = make_item("feasibility.arrival",
                                "the flight parabola meets the plate exactly at each arrival");
  arrival.status = CheckStatus::pass;
  CheckItem gap = make_item("feasibility.gap",
                            "the ball stays strictly above the plate between impacts");
  gap.status = CheckStatus::pass;

  const std::vector<QuadraticPiece>& pieces = profile.f_pieces;
  const Scalar f_upper = profile_upper_bound(profile);
  std::size_t flights = 0;

  for (std::size_t n = 0; n + 1 < traj.states.size(); ++n) {
    const PhaseState& s0 = traj.states[n];
    const PhaseState& s1 = traj.states[n + 1];
    ++flights;

    const Scalar zeta0 = plate_velocity(profile, s0.t);
    if (departure.status == CheckStatus::pass && (!(s0.v > 0) || !(s0.v > zeta0))) {
      departure.status = CheckStatus::fail;
      departure.lhs = to_string(s0.v);
      departure.rhs = to_string(zeta0);
      departure.note = "flight " + std::to_string(n);
    }

    // p(t) = f(t0) + v0 (t - t0) - g/2 (t - t0)^2 in monomial form.
    const Scalar f0 = plate_height(profile, s0.t);
    const Scalar pa = -g / 2;
    const Scalar pb = s0.v + g * s0.t;
    const Scalar pc = f0 - s0.v * s0.t - g / 2 * s0.t * s0.t;

    const Scalar arrival_gap =
        eval_poly(pa, pb, pc, s1.t) - plate_height(profile, s1.t);
    if (arrival.status == CheckStatus::pass && !(abs(arrival_gap) <= tol)) {
      arrival.status = CheckStatus::fail;
      arrival.lhs = to_string(arrival_gap);
      arrival.rhs = "0";
      arrival.note = "flight " + std::to_string(n);
    }

    if (gap.status != CheckStatus::pass) continue;

    // Exact mode certifies the full open flight with zeros permitted only at
    // the recorded impacts. Floating mode cannot pin those zeros to an exact
    // time (impact times and piece boundaries disagree by ulps), so it
    // certifies the flight clipped a hair inside both ends, where the gap is
    // already well clear of the noise floor.
    Scalar flight_lo = s0.t;
    Scalar flight_hi = s1.t;
    if (!exact) {
      const Scalar slack =
          Scalar::floating(10 * zero_tol * (1.0 + std::abs(s1.t.raw())));
      flight_lo += slack;
      flight_hi -= slack;
      if (!(flight_lo < flight_hi)) continue;
    }

    // Pieces fully under the parabola's verified clearance cannot host a
    // sign change; vault over them instead of certifying one by one.
    const ClearanceWindow clear = clearance_window(pa, pb, pc, f_upper, flight_lo, flight_hi);
    for (PieceWalker walker(pieces, flight_lo);; walker.advance()) {
      if (clear.active && walker.lo() >= clear.from && walker.hi() <= clear.to)
        walker.jump_to(clear.to);
      const QuadraticPiece& piece = walker.piece();
      const Scalar shift = walker.shift();
      if (!(walker.lo() < flight_hi)) break;
      const Scalar lo = max(walker.lo(), flight_lo);
      const Scalar hi = min(walker.hi(), flight_hi);
      if (!(lo < hi)) continue;

      const Scalar fa = piece.a;
      const Scalar fb = piece.b - piece.a * shift * 2;
      const Scalar fc = (piece.a * shift - piece.b) * shift + piece.c;
      const PositivityResult res =
          positive_on_open_interval(pa - fa, pb - fb, pc - fc, lo, hi,
                                    /*allow_zero_at_lo=*/exact && lo == s0.t,
                                    /*allow_zero_at_hi=*/exact && hi == s1.t, zero_tol);
      if (!res.positive) {
        gap.status = CheckStatus::fail;
        gap.lhs = to_string(res.witness_q);
        gap.rhs = "> 0";
        gap.note = "flight " + std::to_string(n) + " at t=" + to_string(res.witness_t) + ": " +
                   res.reason;
        break;
      }
    }
  }

  const std::string summary = "flights=" + std::to_string(flights);
  if (departure.note.empty()) departure.note = summary;
  if (arrival.note.empty()) arrival.note = summary;
  if (gap.note.empty()) gap.note = summary;

  report.items.push_back(std::move(departure));
  report.items.push_back(std::move(arrival));
  report.items.push_back(std::move(gap));
  return report;
}

}  // namespace bounce
