// Acceptance suite: one criterion per function, one PASS/FAIL line each.
// Exit code 0 only when every criterion holds.

#include "bounce/document.hpp"
#include "bounce/verification.hpp"

#include "support/generators.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace bounce;

namespace {

using Clock = std::chrono::steady_clock;

void require(bool condition, const std::string& what) {
  if (!condition) throw Error(what);
}

void require_eq(const Scalar& got, const Scalar& want, const std::string& what) {
  if (!(got == want))
    throw Error(what + ": got " + to_string(got) + ", want " + to_string(want));
}

Instance worked_instance() {
  Parameters p;
  p.g = Scalar::exact(10);
  p.delta = Scalar::exact(1);
  return construct(p);
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// ---------------------------------------------------------------------------
// 1. Worked-instance exactness.

void criterion_worked_instance() {
  const auto start = Clock::now();
  const Instance inst = worked_instance();

  require(inst.blueprint.N == 3, "N");
  require(inst.blueprint.V == 1, "V");
  require_eq(inst.blueprint.W, Scalar::exact(18), "W");
  require_eq(inst.blueprint.eta, Scalar::exact(1, 2), "eta");

  const long long t_num[] = {0, 28, 58, 90};
  for (int i = 0; i < 4; ++i)
    require_eq(inst.blueprint.t[i], Scalar::exact(t_num[i], 5), "t_" + std::to_string(i));

  const std::pair<long long, long long> d_val[] = {{1, 2}, {1, 1}, {1, 1}, {1, 2}};
  for (int i = 0; i < 4; ++i)
    require_eq(inst.blueprint.D[i], Scalar::exact(d_val[i].first, d_val[i].second),
               "D_" + std::to_string(i));

  const long long v_val[] = {28, 30, 32, 33};
  for (int i = 0; i < 4; ++i)
    require_eq(inst.blueprint.v[i], Scalar::exact(v_val[i]), "v_" + std::to_string(i));

  require(inst.profile.breakpoints.size() == 3, "breakpoint count");
  require_eq(inst.profile.breakpoints[0].tau, Scalar::exact(0), "tau_0");
  require_eq(inst.profile.breakpoints[0].target, Scalar::exact(1, 2), "target_0");
  require_eq(inst.profile.breakpoints[1].tau, Scalar::exact(3, 5), "tau_1");
  require_eq(inst.profile.breakpoints[1].target, Scalar::exact(1), "target_1");
  require_eq(inst.profile.breakpoints[2].tau, Scalar::exact(1), "tau_2");
  require_eq(inst.profile.breakpoints[2].target, Scalar::exact(1, 2), "target_2");

  // five-node shape constants per interval: (L, C)
  const std::vector<ZetaNode>& nodes = inst.profile.zeta_nodes;
  require(nodes.size() == 9, "node count");
  require_eq(nodes[1].tau - nodes[0].tau, Scalar::exact(3, 35), "L_0");
  require_eq(-nodes[2].value, Scalar::exact(3, 10), "C_0");
  require_eq(nodes[5].tau - nodes[4].tau, Scalar::exact(2, 35), "L_1");
  require_eq(-nodes[6].value, Scalar::exact(3, 10), "C_1");

  require(seconds_since(start) < 1.0, "worked-instance pipeline must finish in under 1 s");
}

// ---------------------------------------------------------------------------
// 2. Escape along 150 exact explicit-map steps.

void criterion_escape() {
  const auto start = Clock::now();
  const Instance inst = worked_instance();
  const Trajectory traj = orbit(inst.profile, inst.params.g,
                                {Scalar::exact(0), Scalar::exact(28)}, MapKind::gs, 150, 0);
  require(traj.states.size() == 151, "state count");

  for (std::size_t n = 0; n + 3 < traj.states.size(); ++n) {
    require_eq(traj.states[n + 3].v - traj.states[n].v, Scalar::exact(5),
               "velocity gain at n=" + std::to_string(n));
    const Scalar shift = traj.states[n + 3].t - traj.states[n].t;
    require(is_integer(shift) && shift >= 0,
            "time shift at n=" + std::to_string(n) + " is " + to_string(shift));
  }

  std::vector<Scalar> sigmas;
  require(check_escape(traj, 3, 1, inst.params.g, 0, &sigmas).all_passed(), "escape checker");
  const long long expected[] = {18, 19, 20, 21};
  for (int i = 0; i < 4; ++i)
    require_eq(sigmas[i], Scalar::exact(expected[i]), "sigma_" + std::to_string(i));

  require_eq(traj.states[150].v, Scalar::exact(278), "v_150");
  require(seconds_since(start) < 1.0, "escape run must finish in under 1 s");
}

// ---------------------------------------------------------------------------
// 3. Parameter sweep with the full battery.

void criterion_sweep() {
  const auto start = Clock::now();
  const std::pair<const char*, const char*> grid[] = {
      {"10", "1"},     {"4", "9/10"},  {"8", "1"},     {"2", "1/4"},  {"12", "3/2"},
      {"1", "1/5"},    {"1", "1/8"},   {"7", "1/3"},   {"22/7", "1/5"}, {"9", "2"},
      {"100", "3"},    {"100", "12"},  {"3", "1/2"},   {"5", "6/5"},  {"17/3", "1/4"},
      {"6", "3/5"},    {"11", "5/4"},  {"13", "3"},    {"10", "7/5"}, {"15/2", "1/2"},
      {"9/2", "1"},    {"20", "3/2"},  {"16", "4/3"},  {"10", "2/7"}};
  static_assert(std::size(grid) >= 20);

  int boundary_cases = 0;
  for (const auto& [g_text, d_text] : grid) {
    Parameters params;
    params.g = parse_scalar(g_text, Mode::exact);
    params.delta = parse_scalar(d_text, Mode::exact);
    const Instance inst = construct(params);
    if (inst.blueprint.eta == params.delta) ++boundary_cases;

    const ProfileDocument doc = make_document(inst);
    const CheckReport report = verify_document(doc);
    if (!report.all_passed()) {
      for (const CheckItem& item : report.items)
        if (item.status != CheckStatus::pass)
          throw Error(std::string("g=") + g_text + " delta=" + d_text + ": " + item.id +
                      " lhs=" + item.lhs + " rhs=" + item.rhs + " " + item.note);
    }
  }
  require(boundary_cases >= 3, "grid must include eta = delta boundary cases");
  require(seconds_since(start) < 10.0, "sweep must finish in under 10 s");
}

// ---------------------------------------------------------------------------
// 4. Implicit floating map tracks the exact explicit map.

void criterion_gs_pf_coincidence() {
  const Instance inst = worked_instance();
  const Trajectory exact = orbit(inst.profile, inst.params.g,
                                 {Scalar::exact(0), Scalar::exact(28)}, MapKind::gs, 12, 0);
  const Trajectory impl =
      orbit(to_float(inst.profile), Scalar::floating(10),
            {Scalar::floating(0), Scalar::floating(28)}, MapKind::pf, 12, 1e-12);

  for (std::size_t i = 0; i <= 12; ++i) {
    const double dt = std::abs(impl.states[i].t.raw() - exact.states[i].t.approx());
    const double dv = std::abs(impl.states[i].v.raw() - exact.states[i].v.approx());
    const double bound = i <= 6 ? 1e-6 : 1e-3;
    require(dt <= bound, "t deviation " + std::to_string(dt) + " at step " + std::to_string(i));
    require(dv <= bound, "v deviation " + std::to_string(dv) + " at step " + std::to_string(i));
  }
  for (std::size_t i = 0; i < impl.steps.size(); ++i)
    require(impl.steps[i].residual <= 1e-10,
            "residual " + std::to_string(impl.steps[i].residual) + " at step " +
                std::to_string(i));
}

// ---------------------------------------------------------------------------
// 5. Exact feasibility certificate for the first N flights.

void criterion_feasibility() {
  const Instance inst = worked_instance();
  const Trajectory traj = orbit(inst.profile, inst.params.g,
                                {Scalar::exact(0), Scalar::exact(28)}, MapKind::gs,
                                inst.blueprint.N, 0);
  require(traj.mode == Mode::exact, "certificate must run on exact scalars");
  const CheckReport report = check_feasibility(inst.profile, traj, inst.params.g);
  for (const CheckItem& item : report.items)
    require(item.status == CheckStatus::pass, item.id + ": " + item.note);
}

// ---------------------------------------------------------------------------
// 6. Property suites, each with at least 100 randomized cases.

void criterion_properties() {
  // torus commutation relations of the explicit map
  {
    testing::Rng rng(0x1001);
    int cases = 0;
    for (int p = 0; p < 5; ++p) {
      const Instance inst = construct(testing::random_parameters(rng));
      const Scalar g = inst.params.g;
      for (int i = 0; i < 25; ++i, ++cases) {
        const PhaseState s{rng.rational(60, 9), rng.positive_rational(50, 4)};
        const PhaseState base = gs_step(inst.profile, g, s);
        const PhaseState st = gs_step(inst.profile, g, {s.t + 1, s.v});
        require(st.t == base.t + 1 && st.v == base.v, "time-shift commutation");
        const PhaseState sv = gs_step(inst.profile, g, {s.t, s.v + g / 2});
        require(sv.t == base.t + 1 && sv.v == base.v + g / 2, "velocity-shift commutation");
      }
    }
    require(cases >= 100, "commutation case count");
  }

  // closed forms of the n-th iterate against step iteration
  {
    testing::Rng rng(0x1002);
    int cases = 0;
    for (int run = 0; run < 6; ++run) {
      const Instance inst = construct(testing::random_parameters(rng));
      const Scalar g = inst.params.g;
      const PhaseState init{rng.rational(10, 3),
                            inst.params.delta * 45 + rng.positive_rational(30, 2)};
      const Trajectory traj = orbit(inst.profile, g, init, MapKind::gs, 20, 0);
      for (std::size_t n = 1; n < traj.states.size(); ++n, ++cases) {
        Scalar zsum = Scalar::exact(0), weighted = Scalar::exact(0);
        for (std::size_t k = 1; k <= n; ++k) {
          const Scalar z = plate_velocity(inst.profile, traj.states[k].t);
          zsum += z;
          if (k < n) weighted += z * static_cast<long long>(n - k);
        }
        require(traj.states[n].v == init.v + zsum * 2, "closed form for v_n");
        require(traj.states[n].t ==
                    init.t + init.v * 2 * static_cast<long long>(n) / g + weighted * 4 / g,
                "closed form for t_n");
      }
    }
    require(cases >= 100, "closed-form case count");
  }

  // telescoping identities on arbitrary sequences
  {
    testing::Rng rng(0x1003);
    for (int i = 0; i < 120; ++i) {
      const long long n = rng.integer(1, 12);
      std::vector<Scalar> times;
      for (long long k = 0; k <= n; ++k) times.push_back(rng.rational(1000, 60));
      require(identity_oracles(times).all_passed(), "telescoping identities");
    }
  }

  // elastic-reflection form of the implicit velocity update
  {
    testing::Rng rng(0x1004);
    int cases = 0;
    for (int run = 0; run < 300 && cases < 100; ++run) {
      const Instance inst = construct(testing::random_parameters(rng));
      const PlateProfile profile = to_float(inst.profile);
      const Scalar g = inst.params.g.to_float();
      PhaseState state{Scalar::floating(rng.real(0, 1)),
                       Scalar::floating(g.raw() * rng.real(1.5, 8.0))};
      for (int j = 0; j < 3; ++j) {
        PfStep step;
        try {
          step = pf_step(profile, g, state, 1e-12);
        } catch (const Error&) {
          break;
        }
        const double pre = state.v.raw() - g.raw() * (step.next.t.raw() - state.t.raw());
        const double reflected = 2 * plate_velocity(profile, step.next.t).raw() - pre;
        require(std::abs(step.next.v.raw() - reflected) <=
                    1e-9 * std::max(1.0, std::abs(reflected)),
                "elastic reflection identity");
        state = step.next;
        ++cases;
      }
    }
    require(cases >= 100, "elastic reflection case count");
  }

  // profile invariants across random parameters
  {
    testing::Rng rng(0x1005);
    for (int i = 0; i < 110; ++i) {
      const Instance inst = construct(testing::random_parameters(rng));
      const std::vector<ZetaNode>& nodes = inst.profile.zeta_nodes;

      Scalar peak = Scalar::exact(0);
      for (const ZetaNode& n : nodes) peak = max(peak, abs(n.value));
      require(peak <= inst.params.delta, "derivative bound");

      require(nodes.front().tau == 0 && nodes.back().tau == 1 &&
                  nodes.front().value == nodes.back().value,
              "periodic derivative endpoints");

      std::size_t cursor = 0;
      for (std::size_t b = 0; b + 1 < inst.profile.breakpoints.size(); ++b) {
        Scalar area = Scalar::exact(0);
        const Scalar to = inst.profile.breakpoints[b + 1].tau;
        while (nodes[cursor].tau != to) {
          area += (nodes[cursor].value + nodes[cursor + 1].value) *
                  (nodes[cursor + 1].tau - nodes[cursor].tau) / 2;
          ++cursor;
        }
        require(area == 0, "zero area between breakpoints");
      }

      const std::vector<QuadraticPiece>& pieces = inst.profile.f_pieces;
      for (std::size_t k = 0; k < pieces.size(); ++k) {
        require(pieces[k].a * nodes[k].tau * 2 + pieces[k].b == nodes[k].value,
                "derivative matches zeta at piece start");
        if (k + 1 < pieces.size())
          require(eval_poly(pieces[k].a, pieces[k].b, pieces[k].c, pieces[k].hi) ==
                      eval_quadratic(pieces[k + 1], pieces[k + 1].lo),
                  "continuity across pieces");
      }
      require(eval_poly(pieces.back().a, pieces.back().b, pieces.back().c,
                        Scalar::exact(1)) == Scalar::exact(0),
              "f(1) = f(0) = 0");
    }
  }
}

// ---------------------------------------------------------------------------
// 7. Negative controls: documented single-field mutations hit their checks.

void criterion_negative_controls() {
  const Instance inst = worked_instance();
  const Scalar g = inst.params.g;

  // span off by one -> lemma1.cond1 with witness (18, 17)
  {
    std::vector<Scalar> head(inst.blueprint.t.begin(), inst.blueprint.t.begin() + 3);
    std::vector<Scalar> zetas;
    for (const Scalar& t : head) zetas.push_back(plate_velocity(inst.profile, t));
    const CheckReport report =
        check_lemma1(head, zetas, g, 3, Scalar::exact(17), Scalar::exact(1));
    const CheckItem* item = report.find("lemma1.cond1");
    require(item && item->status == CheckStatus::fail, "lemma1.cond1 must fail");
    require(item->lhs == "18" && item->rhs == "17", "lemma1.cond1 witness");
    require(report.find("lemma1.cond2")->status == CheckStatus::pass, "lemma1.cond2 unaffected");
  }

  // eta zeroed in the document -> exactly lemma3.cond2 fails in the battery
  {
    ProfileDocument doc = make_document(inst);
    doc.eta = Scalar::exact(0);
    const CheckReport report = verify_document(doc);
    for (const CheckItem& item : report.items) {
      if (item.id == "lemma3.cond2")
        require(item.status == CheckStatus::fail, "lemma3.cond2 must fail");
      else
        require(item.status == CheckStatus::pass, item.id + " must stay green");
    }
  }

  // breakpoint height perturbed by 1/1000 -> prop1.cond3
  {
    PlateProfile tampered = inst.profile;
    for (QuadraticPiece& piece : tampered.f_pieces)
      if (piece.lo >= Scalar::exact(3, 5)) piece.c += Scalar::exact(1, 1000);
    const CheckReport report = check_prop1(tampered, inst.blueprint.t, g);
    const CheckItem* item = report.find("prop1.cond3");
    require(item && item->status == CheckStatus::fail, "prop1.cond3 must fail");
    require(item->lhs == "0" && item->rhs == "1/1000", "prop1.cond3 witness");
    require(report.find("prop1.cond1")->status == CheckStatus::pass, "prop1.cond1 unaffected");
    require(report.find("prop1.cond4")->status == CheckStatus::pass, "prop1.cond4 unaffected");
  }

  // dip value doubled -> profile.area with a nonzero witness
  {
    PlateProfile tampered = inst.profile;
    tampered.zeta_nodes[2].value *= 2;
    const CheckReport report = check_profile(tampered);
    const CheckItem* item = report.find("profile.area");
    require(item && item->status == CheckStatus::fail, "profile.area must fail");
    require(item->lhs != "0", "profile.area witness must be nonzero");
    require(report.find("profile.bound")->status == CheckStatus::pass,
            "profile.bound unaffected by the doubled dip");
  }

  // node value above delta -> profile.bound with witness (1001/1000, 1)
  {
    PlateProfile tampered = inst.profile;
    tampered.zeta_nodes[2].value = inst.params.delta + Scalar::exact(1, 1000);
    const CheckReport report = check_profile(tampered);
    const CheckItem* item = report.find("profile.bound");
    require(item && item->status == CheckStatus::fail, "profile.bound must fail");
    require(item->lhs == "1001/1000" && item->rhs == "1", "profile.bound witness");
  }
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* name;
    std::function<void()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "worked-instance exactness", criterion_worked_instance},
      {2, "escape over 150 exact steps", criterion_escape},
      {3, "parameter sweep with full battery", criterion_sweep},
      {4, "implicit/explicit coincidence", criterion_gs_pf_coincidence},
      {5, "exact feasibility certificate", criterion_feasibility},
      {6, "randomized property suites", criterion_properties},
      {7, "negative controls", criterion_negative_controls},
  };

  bool all = true;
  for (const Criterion& criterion : criteria) {
    const auto start = Clock::now();
    try {
      criterion.run();
      std::printf("[PASS] criterion %d: %s (%.2fs)\n", criterion.number, criterion.name,
                  seconds_since(start));
    } catch (const std::exception& e) {
      all = false;
      std::printf("[FAIL] criterion %d: %s -- %s\n", criterion.number, criterion.name, e.what());
    }
  }
  std::printf("%s\n", all ? "acceptance: all criteria passed" : "acceptance: FAILURES");
  return all ? 0 : 1;
}
