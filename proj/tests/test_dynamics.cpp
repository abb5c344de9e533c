#include "bounce/dynamics.hpp"

#include "doctest.h"
#include "support/generators.hpp"

#include <algorithm>
#include <cmath>

using namespace bounce;

namespace {

Parameters worked_params() {
  Parameters p;
  p.g = Scalar::exact(10);
  p.delta = Scalar::exact(1);
  return p;
}

PlateProfile zero_profile() {
  const std::vector<Breakpoint> bps = {{Scalar::exact(0), Scalar::exact(0)},
                                       {Scalar::exact(1), Scalar::exact(0)}};
  PlateProfile profile;
  profile.breakpoints = bps;
  profile.zeta_nodes = build_zeta(bps, Scalar::exact(1, 2));
  profile.f_pieces = integrate_zeta(profile.zeta_nodes);
  profile.delta = Scalar::exact(1, 2);
  return profile;
}

}  // namespace

TEST_SUITE_BEGIN("dynamics");

TEST_CASE("plate height at breakpoints and inside the first triangle") {
  const Instance inst = construct(worked_params());
  CHECK(plate_height(inst.profile, Scalar::exact(18)) == Scalar::exact(0));
  CHECK(plate_height(inst.profile, Scalar::exact(3, 35)) == Scalar::exact(3, 140));
  CHECK(plate_height(zero_profile(), Scalar::exact(123, 17)) == Scalar::exact(0));
}

TEST_CASE("plate velocity at the marked positions") {
  const Instance inst = construct(worked_params());
  CHECK(plate_velocity(inst.profile, Scalar::exact(28, 5)) == Scalar::exact(1));
  CHECK(plate_velocity(inst.profile, Scalar::exact(18)) == Scalar::exact(1, 2));
  CHECK(plate_velocity(inst.profile, Scalar::exact(3, 35)) == Scalar::exact(0));
}

TEST_CASE("divided differences") {
  const Instance inst = construct(worked_params());
  CHECK(divided_difference(inst.profile, Scalar::exact(28, 5), Scalar::exact(0)) ==
        Scalar::exact(0));
  CHECK(divided_difference(zero_profile(), Scalar::exact(7, 2), Scalar::exact(1, 3)) ==
        Scalar::exact(0));
  CHECK(divided_difference(inst.profile, Scalar::exact(0), Scalar::exact(3, 35)) ==
        Scalar::exact(1, 4));
  CHECK_THROWS_AS(divided_difference(inst.profile, Scalar::exact(1), Scalar::exact(1)),
                  DomainError);
}

TEST_CASE("explicit map steps") {
  const Instance inst = construct(worked_params());
  const Scalar g = Scalar::exact(10);

  const PhaseState free = gs_step(zero_profile(), g, {Scalar::exact(0), Scalar::exact(28)});
  CHECK(free.t == Scalar::exact(28, 5));
  CHECK(free.v == Scalar::exact(28));

  const PhaseState s1 = gs_step(inst.profile, g, {Scalar::exact(0), Scalar::exact(28)});
  CHECK(s1.t == Scalar::exact(28, 5));
  CHECK(s1.v == Scalar::exact(30));

  const PhaseState s3 = gs_step(inst.profile, g, {Scalar::exact(58, 5), Scalar::exact(32)});
  CHECK(s3.t == Scalar::exact(18));
  CHECK(s3.v == Scalar::exact(33));
}

TEST_CASE("implicit map equals the explicit map on the constructed orbit") {
  const Instance inst = construct(worked_params());
  const Scalar g = Scalar::exact(10);

  const PfStep still = pf_step(zero_profile(), g, {Scalar::exact(0), Scalar::exact(28)});
  CHECK(still.next.t == Scalar::exact(28, 5));
  CHECK(still.next.v == Scalar::exact(28));

  const PfStep s1 = pf_step(inst.profile, g, {Scalar::exact(0), Scalar::exact(28)});
  CHECK(s1.next.t == Scalar::exact(28, 5));
  CHECK(s1.next.v == Scalar::exact(30));

  const PfStep s2 = pf_step(inst.profile, g, {Scalar::exact(28, 5), Scalar::exact(30)});
  CHECK(s2.next.t == Scalar::exact(58, 5));
  CHECK(s2.next.v == Scalar::exact(32));
}

TEST_CASE("implicit map in floating mode stays within tolerance") {
  const Instance inst = construct(worked_params());
  const PlateProfile profile = to_float(inst.profile);
  const Scalar g = Scalar::floating(10);

  PhaseState state{Scalar::floating(0), Scalar::floating(28)};
  const double expected_t[] = {5.6, 11.6, 18.0};
  const double expected_v[] = {30.0, 32.0, 33.0};
  for (int i = 0; i < 3; ++i) {
    const PfStep step = pf_step(profile, g, state, 1e-12);
    CHECK(std::abs(step.next.t.raw() - expected_t[i]) < 1e-10);
    CHECK(std::abs(step.next.v.raw() - expected_v[i]) < 1e-10);
    CHECK(step.residual <= 1e-10);
    state = step.next;
  }
}

TEST_CASE("no impact below the well-definedness threshold") {
  const Instance inst = construct(worked_params());
  CHECK_THROWS_AS(
      pf_step(inst.profile, Scalar::exact(10), {Scalar::exact(0), Scalar::exact(1, 10)}),
      NoImpactError);
}

TEST_CASE("orbit of the worked instance, six explicit steps") {
  const Instance inst = construct(worked_params());
  const Trajectory traj = orbit(inst.profile, Scalar::exact(10),
                                {Scalar::exact(0), Scalar::exact(28)}, MapKind::gs, 6, 0);
  REQUIRE(traj.states.size() == 7);
  const long long t_num[] = {0, 28, 58, 90, 123, 158, 195};  // over denominator 5
  const long long v_val[] = {28, 30, 32, 33, 35, 37, 38};
  for (int i = 0; i <= 6; ++i) {
    CHECK(traj.states[i].t == Scalar::exact(t_num[i], 5));
    CHECK(traj.states[i].v == Scalar::exact(v_val[i]));
  }
  // period-3 window: velocity gain 5 and integer time shifts
  CHECK(traj.states[6].v == traj.states[3].v + Scalar::exact(5));
  CHECK(traj.states[6].t - traj.states[3].t == Scalar::exact(21));
}

TEST_CASE("zero-step orbit is only the initial state") {
  const Instance inst = construct(worked_params());
  const Trajectory traj = orbit(inst.profile, Scalar::exact(10),
                                {Scalar::exact(0), Scalar::exact(28)}, MapKind::gs, 0, 0);
  CHECK(traj.states.size() == 1);
}

TEST_CASE("implicit float orbit tracks the exact explicit orbit") {
  const Instance inst = construct(worked_params());
  const Trajectory exact = orbit(inst.profile, Scalar::exact(10),
                                 {Scalar::exact(0), Scalar::exact(28)}, MapKind::gs, 3, 0);
  const Trajectory impl =
      orbit(to_float(inst.profile), Scalar::floating(10),
            {Scalar::floating(0), Scalar::floating(28)}, MapKind::pf, 3, 1e-12);
  REQUIRE(impl.states.size() == 4);
  for (int i = 0; i <= 3; ++i) {
    CHECK(std::abs(impl.states[i].t.raw() - exact.states[i].t.approx()) < 1e-10);
    CHECK(std::abs(impl.states[i].v.raw() - exact.states[i].v.approx()) < 1e-10);
  }
  for (const StepInfo& info : impl.steps) CHECK(info.residual <= 1e-10);
}

TEST_CASE("orbit propagates step errors with the failing index") {
  const Instance inst = construct(worked_params());
  try {
    orbit(inst.profile, Scalar::exact(10), {Scalar::exact(0), Scalar::exact(1, 10)},
          MapKind::pf, 5, 0);
    FAIL("expected a step error");
  } catch (const StepError& e) {
    CHECK(e.index == 0);
  }
}

TEST_CASE("upper bound of the plate motion") {
  const Instance inst = construct(worked_params());
  // f peaks at the second zero-crossing node 23/35 with value 1/35
  CHECK(profile_upper_bound(inst.profile) == Scalar::exact(1, 35));
  CHECK(profile_upper_bound(zero_profile()) == Scalar::exact(0));

  // never undercuts a dense sample of the profile
  for (const QuadraticPiece& piece : inst.profile.f_pieces) {
    for (int i = 0; i < 8; ++i) {
      const Scalar t = piece.lo + (piece.hi - piece.lo) * i / 8;
      CHECK(eval_poly(piece.a, piece.b, piece.c, t) <= profile_upper_bound(inst.profile));
    }
  }
}

TEST_CASE("clearance window of the first worked flight") {
  const Instance inst = construct(worked_params());
  const Scalar bound = profile_upper_bound(inst.profile);
  // p(t) = 28 t - 5 t^2 leaving the plate at t=0 and returning at 28/5
  const Scalar pa = Scalar::exact(-5), pb = Scalar::exact(28), pc = Scalar::exact(0);
  const ClearanceWindow clear =
      clearance_window(pa, pb, pc, bound, Scalar::exact(0), Scalar::exact(28, 5));
  REQUIRE(clear.active);
  CHECK(clear.from > 0);
  CHECK(clear.to < Scalar::exact(28, 5));
  CHECK(clear.from < clear.to);
  CHECK(eval_poly(pa, pb, pc, clear.from) > bound);
  CHECK(eval_poly(pa, pb, pc, clear.to) > bound);

  // a flight that never clears the bound gets no window
  const ClearanceWindow none = clearance_window(pa, Scalar::exact(1, 100), pc, bound,
                                                Scalar::exact(0), Scalar::exact(1));
  CHECK(!none.active);
}

TEST_CASE("long flights stay affordable: full period of the implicit exact map") {
  // N = 63: each flight spans ~3900 plate periods
  Parameters p;
  p.g = Scalar::exact(10);
  p.delta = Scalar::exact(1, 25);
  const Instance inst = construct(p);
  REQUIRE(inst.blueprint.N == 63);
  const Trajectory traj = orbit(inst.profile, p.g, {Scalar::exact(0), inst.blueprint.v[0]},
                                MapKind::pf, inst.blueprint.N, 0);
  CHECK(traj.states.back().v == inst.blueprint.v[0] + Scalar::exact(5));
  CHECK(traj.states.back().t - traj.states.front().t == inst.blueprint.W);
}

TEST_CASE("torus commutation relations, exact, randomized") {
  testing::Rng rng(0x70f0);
  const Instance inst = construct(testing::random_parameters(rng));
  const Scalar g = inst.params.g;
  for (int i = 0; i < 120; ++i) {
    const PhaseState s{rng.rational(50, 7), rng.positive_rational(60, 3)};
    const PhaseState base = gs_step(inst.profile, g, s);

    const PhaseState shifted_t = gs_step(inst.profile, g, {s.t + 1, s.v});
    CHECK(shifted_t.t == base.t + 1);
    CHECK(shifted_t.v == base.v);

    const PhaseState shifted_v = gs_step(inst.profile, g, {s.t, s.v + g / 2});
    CHECK(shifted_v.t == base.t + 1);
    CHECK(shifted_v.v == base.v + g / 2);
  }
}

TEST_CASE("closed forms of the n-th explicit iterate, exact, randomized") {
  testing::Rng rng(0xab5e);
  for (int run = 0; run < 12; ++run) {
    const Instance inst = construct(testing::random_parameters(rng));
    const Scalar g = inst.params.g;
    const PhaseState init{rng.rational(20, 5),
                          inst.params.delta * 52 + rng.positive_rational(40, 2)};
    const long long steps = 25;
    const Trajectory traj = orbit(inst.profile, g, init, MapKind::gs, steps, 0);

    for (std::size_t n = 1; n < traj.states.size(); ++n) {
      Scalar zsum = Scalar::exact(0);
      Scalar weighted = Scalar::exact(0);
      for (std::size_t k = 1; k <= n; ++k) {
        const Scalar z = plate_velocity(inst.profile, traj.states[k].t);
        zsum += z;
        if (k < n) weighted += z * static_cast<long long>(n - k);
      }
      CHECK(traj.states[n].v == init.v + zsum * 2);
      CHECK(traj.states[n].t ==
            init.t + init.v * 2 * static_cast<long long>(n) / g + weighted * 4 / g);
    }
  }
}

TEST_CASE("elastic reflection identity for the implicit map") {
  testing::Rng rng(0xe1a51c);
  int checked = 0;
  for (int run = 0; run < 300 && checked < 120; ++run) {
    const Instance inst = construct(testing::random_parameters(rng));
    const PlateProfile profile = to_float(inst.profile);
    const Scalar g = inst.params.g.to_float();
    PhaseState state{Scalar::floating(rng.real(0, 1)),
                     Scalar::floating(rng.real(2, 60) * g.raw() / 10 + g.raw())};
    for (int j = 0; j < 4; ++j) {
      PfStep step;
      try {
        step = pf_step(profile, g, state, 1e-12);
      } catch (const Error&) {
        break;
      }
      const double t0 = state.t.raw(), v0 = state.v.raw();
      const double t1 = step.next.t.raw();
      const double pre_impact = v0 - g.raw() * (t1 - t0);
      const double reflected = 2 * plate_velocity(profile, step.next.t).raw() - pre_impact;
      CHECK(step.next.v.raw() == doctest::Approx(reflected).epsilon(1e-9));
      state = step.next;
      ++checked;
    }
  }
  CHECK(checked >= 120);
}

TEST_CASE("implicit and explicit maps coincide on equal-height orbits") {
  testing::Rng rng(0x5a5a);
  for (int run = 0; run < 6; ++run) {
    const Instance inst = construct(testing::random_parameters(rng));
    const Scalar g = inst.params.g;
    const PhaseState init{Scalar::exact(0), inst.blueprint.v[0]};
    const long long steps = std::min<long long>(2 * inst.blueprint.N, 10);
    const Trajectory gs = orbit(inst.profile, g, init, MapKind::gs, steps, 0);
    const Trajectory pf = orbit(inst.profile, g, init, MapKind::pf, steps, 0);
    REQUIRE(gs.states.size() == pf.states.size());
    for (std::size_t i = 0; i < gs.states.size(); ++i) {
      CHECK(gs.states[i].t == pf.states[i].t);
      CHECK(gs.states[i].v == pf.states[i].v);
    }
  }
}

TEST_SUITE_END();
