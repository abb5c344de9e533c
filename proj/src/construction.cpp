#include "bounce/construction.hpp"

#include <algorithm>
#include <numeric>

namespace bounce {

namespace {

// Explicit blueprints beyond this period would not fit in memory anyway.
constexpr long long kMaxPeriod = 1'000'000;

BigInt ceil_rational(const Rational& r) {
  // r > 0 in every call site.
  const BigInt num = numerator(r);
  const BigInt den = denominator(r);
  return (num + den - 1) / den;
}

}  // namespace

void validate(const Parameters& params) {
  if (!params.g.is_exact() || !params.delta.is_exact())
    throw ModeError("construction parameters must be exact rationals");
  if (!(params.g > 0)) throw DomainError("g must be positive");
  if (!(params.delta > 0) || !(params.delta < params.g / 4))
    throw DomainError("delta must satisfy 0 < delta < g/4");
  if (params.w_scale < 1) throw DomainError("w_scale must be a positive integer");
}

Mode profile_mode(const PlateProfile& profile) { return profile.delta.mode(); }

DerivedConstants derive_constants(const Parameters& params) {
  validate(params);
  const Rational ratio = (params.g / (params.delta * 4)).rational();
  const BigInt n_big = ceil_rational(ratio);
  if (n_big > kMaxPeriod)
    throw DomainError("period N = " + n_big.str() + " exceeds the supported maximum " +
                      std::to_string(kMaxPeriod) + "; increase delta");
  const long long n = n_big.convert_to<long long>();

  DerivedConstants constants;
  constants.N = n;
  constants.V = 1;
  constants.eta = params.g / 4 - params.delta * (n - 1);
  constants.W = Scalar::exact(BigInt(params.w_scale) * n_big * n_big * (n_big - 1));

  // Forced by 0 < delta < g/4; asserted to catch regressions.
  if (n < 2) throw Error("internal: period N must exceed 1");
  if (!(constants.eta > 0) || !(constants.eta <= params.delta))
    throw Error("internal: eta outside (0, delta]");
  return constants;
}

std::vector<Scalar> build_impact_times(const DerivedConstants& constants,
                                       const Parameters& params) {
  const long long n = constants.N;
  const Scalar step = params.delta * 4 / params.g;  // second difference
  const Scalar t1 = constants.W / n - step / 2 * (n - 1);
  if (!(t1 > 0)) throw Error("internal: t_1 must be positive");

  std::vector<Scalar> times;
  times.reserve(static_cast<std::size_t>(n) + 1);
  for (long long k = 0; k <= n; ++k) {
    const Scalar quad = step * k * (k - 1) / 2;
    times.push_back(quad + t1 * k);
  }
  if (times.back() != constants.W) throw Error("internal: t_N != W");
  return times;
}

Targets assign_targets(const DerivedConstants& constants, const Parameters& params,
                       const std::vector<Scalar>& times) {
  const long long n = constants.N;
  Targets out;
  out.D.reserve(times.size());
  out.D.push_back(constants.eta);
  for (long long k = 1; k < n; ++k) {
    const std::size_t i = static_cast<std::size_t>(k);
    const Scalar second_diff = times[i + 1] - times[i] * 2 + times[i - 1];
    out.D.push_back(params.g / 4 * second_diff);
    if (out.D.back() != params.delta) throw Error("internal: interior target != delta");
  }
  out.D.push_back(constants.eta);

  out.v.reserve(times.size());
  out.v.push_back(params.g * (times[1] - times[0]) / 2);
  for (std::size_t k = 1; k < times.size(); ++k)
    out.v.push_back(out.v[k - 1] + out.D[k] * 2);
  if (out.v.back() - out.v.front() != params.g / 2 * constants.V)
    throw Error("internal: v_N - v_0 != (g/2) V");
  return out;
}

std::vector<Breakpoint> reduce_mod_one(const std::vector<Scalar>& times,
                                       const std::vector<Scalar>& targets) {
  if (times.size() < 2 || times.size() != targets.size())
    throw DomainError("reduce_mod_one needs matching times/targets with N >= 1");
  if (times.front() != 0) throw DomainError("reduce_mod_one requires t_0 = 0");
  if (!is_integer(times.back())) throw DomainError("reduce_mod_one requires integer t_N");
  if (targets.front() != targets.back())
    throw DomainError("reduce_mod_one requires D_0 = D_N");

  std::vector<Breakpoint> reduced;
  reduced.reserve(times.size());
  for (std::size_t k = 0; k + 1 < times.size(); ++k)
    reduced.push_back({frac(times[k]), targets[k]});
  reduced.push_back({Scalar::exact(1), targets.back()});

  std::sort(reduced.begin(), reduced.end(),
            [](const Breakpoint& x, const Breakpoint& y) { return x.tau < y.tau; });

  std::vector<Breakpoint> merged;
  merged.reserve(reduced.size());
  for (const Breakpoint& bp : reduced) {
    if (!merged.empty() && merged.back().tau == bp.tau) {
      if (merged.back().target != bp.target)
        throw DomainError("impact times collide at circle position " + to_string(bp.tau) +
                          " with conflicting derivative targets " +
                          to_string(merged.back().target) + " and " + to_string(bp.target));
      continue;
    }
    merged.push_back(bp);
  }

  if (merged.front().tau != 0 || merged.back().tau != 1)
    throw Error("internal: reduced breakpoints must span [0, 1]");
  return merged;
}

std::vector<ZetaNode> build_zeta(const std::vector<Breakpoint>& breakpoints,
                                 const Scalar& delta) {
  if (breakpoints.size() < 2) throw DomainError("need at least two breakpoints");
  if (!(delta > 0)) throw DomainError("delta must be positive");

  std::vector<ZetaNode> nodes;
  nodes.reserve(breakpoints.size() * 4 + 1);
  nodes.push_back({breakpoints.front().tau, breakpoints.front().target});

  for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
    const Breakpoint& a = breakpoints[k];
    const Breakpoint& b = breakpoints[k + 1];
    if (!(a.tau < b.tau)) throw DomainError("breakpoints must be strictly increasing");
    if (a.target < 0 || a.target > delta || b.target < 0 || b.target > delta)
      throw DomainError("derivative targets must lie in [0, delta]");

    const Scalar width = b.tau - a.tau;
    const Scalar target_sum = a.target + b.target;
    // Half of the admissible supremum: keeps C_k <= delta/2 away from the
    // bound and the inner base wider than width/2.
    const Scalar margin = delta * width / ((target_sum + delta * 2) * 2);
    const Scalar dip = target_sum * margin / (width - margin * 2);
    if (dip < 0 || dip >= delta) throw Error("internal: dip outside [0, delta)");

    // Exact zero signed area over [a.tau, b.tau] by construction.
    const Scalar area = (margin * target_sum - dip * (width - margin * 2)) / 2;
    if (area != 0) throw Error("internal: interval area not zero");

    nodes.push_back({a.tau + margin, Scalar::exact(0)});
    nodes.push_back({(a.tau + b.tau) / 2, -dip});
    nodes.push_back({b.tau - margin, Scalar::exact(0)});
    nodes.push_back({b.tau, b.target});
  }
  return nodes;
}

std::vector<QuadraticPiece> integrate_zeta(const std::vector<ZetaNode>& nodes) {
  if (nodes.size() < 2) throw DomainError("need at least two zeta nodes");

  std::vector<QuadraticPiece> pieces;
  pieces.reserve(nodes.size() - 1);
  Scalar height = Scalar::exact(0);  // running value of f at the segment start
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const ZetaNode& u = nodes[i];
    const ZetaNode& w = nodes[i + 1];
    if (!(u.tau < w.tau)) throw DomainError("zeta nodes must be strictly increasing");
    const Scalar slope = (w.value - u.value) / (w.tau - u.tau);

    // f(t) = height + u.value (t - u.tau) + slope/2 (t - u.tau)^2, expanded
    // into monomial coefficients.
    QuadraticPiece piece;
    piece.a = slope / 2;
    piece.b = u.value - slope * u.tau;
    piece.c = height - u.value * u.tau + slope / 2 * u.tau * u.tau;
    piece.lo = u.tau;
    piece.hi = w.tau;
    pieces.push_back(piece);

    height += (u.value + w.value) * (w.tau - u.tau) / 2;
  }
  return pieces;
}

Instance construct(const Parameters& params) {
  Instance inst;
  inst.params = params;

  const DerivedConstants constants = derive_constants(params);
  inst.blueprint.N = constants.N;
  inst.blueprint.V = constants.V;
  inst.blueprint.W = constants.W;
  inst.blueprint.eta = constants.eta;
  inst.blueprint.t = build_impact_times(constants, params);
  Targets targets = assign_targets(constants, params, inst.blueprint.t);
  inst.blueprint.D = std::move(targets.D);
  inst.blueprint.v = std::move(targets.v);

  inst.profile.breakpoints = reduce_mod_one(inst.blueprint.t, inst.blueprint.D);
  inst.profile.zeta_nodes = build_zeta(inst.profile.breakpoints, params.delta);
  inst.profile.f_pieces = integrate_zeta(inst.profile.zeta_nodes);
  inst.profile.delta = params.delta;
  return inst;
}

}  // namespace bounce
