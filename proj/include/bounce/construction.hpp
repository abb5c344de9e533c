#pragma once

#include "bounce/quadratic.hpp"
#include "bounce/scalar.hpp"

#include <vector>

namespace bounce {

/// Input parameters of the whole pipeline. Construction is exact-only, so
/// g and delta must be exact rationals with 0 < delta < g/4.
struct Parameters {
  Scalar g;
  Scalar delta;
  long long w_scale = 1;
};

/// Throws DomainError/ModeError when the parameters are unusable.
void validate(const Parameters& params);

struct DerivedConstants {
  long long N = 0;  // cycle period
  long long V = 0;  // velocity gain numerator (fixed to 1)
  Scalar W;         // integer time span of one cycle
  Scalar eta;       // derivative value shared by both circle endpoints
};

/// The finite skeleton of the escaping orbit: impact times, derivative
/// targets and post-impact velocities for one period.
struct EscapeBlueprint {
  long long N = 0;
  long long V = 0;
  Scalar W;
  Scalar eta;
  std::vector<Scalar> t;  // t_0..t_N, strictly increasing, t_0 = 0, t_N = W
  std::vector<Scalar> D;  // D_0..D_N, D_0 = D_N = eta, interior = delta
  std::vector<Scalar> v;  // v_0..v_N, v_{n+1} = v_n + 2 D_{n+1}
};

/// Circle position with the derivative value the profile must take there.
struct Breakpoint {
  Scalar tau;
  Scalar target;
};

/// Node of the continuous piecewise-linear derivative profile.
struct ZetaNode {
  Scalar tau;
  Scalar value;
};

/// The 1-periodic C^1 plate motion: zeta = f' as a node list on [0, 1] and
/// f itself as quadratic pieces tiling [0, 1).
struct PlateProfile {
  std::vector<ZetaNode> zeta_nodes;
  std::vector<QuadraticPiece> f_pieces;
  std::vector<Breakpoint> breakpoints;
  Scalar delta;
};

Mode profile_mode(const PlateProfile& profile);

/// N = smallest integer >= g/(4 delta), V = 1, eta = g/4 - (N-1) delta,
/// W = w_scale * N^2 (N-1).
DerivedConstants derive_constants(const Parameters& params);

/// t_0 = 0, t_n = n(n-1)/2 * (4 delta / g) + n t_1 with t_1 = W/N - (N-1) * 2 delta / g,
/// which makes t_N = W exactly and all second differences equal 4 delta / g.
std::vector<Scalar> build_impact_times(const DerivedConstants& constants,
                                       const Parameters& params);

struct Targets {
  std::vector<Scalar> D;
  std::vector<Scalar> v;
};

/// D_k from the second differences of the times (interior) and eta at the
/// ends; velocities from v_0 = g t_1 / 2, v_{n+1} = v_n + 2 D_{n+1}.
Targets assign_targets(const DerivedConstants& constants, const Parameters& params,
                       const std::vector<Scalar>& times);

/// Reduce t_0..t_{N-1} mod 1 (t_N maps to 1), carry the D values along, sort,
/// and merge exact duplicates. Two positions colliding with different D
/// values is a hard error.
std::vector<Breakpoint> reduce_mod_one(const std::vector<Scalar>& times,
                                       const std::vector<Scalar>& targets);

/// Between consecutive breakpoints, emit the five-node shape: boundary
/// triangles of base L_k reaching the endpoint targets and a symmetric
/// central dip to -C_k, with L_k = delta*Delta / (2 (D_k + D_{k+1} + 2 delta))
/// and C_k = L_k (D_k + D_{k+1}) / (Delta - 2 L_k), so that every interval
/// integrates to exactly zero.
std::vector<ZetaNode> build_zeta(const std::vector<Breakpoint>& breakpoints,
                                 const Scalar& delta);

/// Antiderivative of the node polyline with f(0) = 0: one quadratic piece per
/// zeta segment, continuous with derivative equal to zeta everywhere.
std::vector<QuadraticPiece> integrate_zeta(const std::vector<ZetaNode>& nodes);

struct Instance {
  Parameters params;
  EscapeBlueprint blueprint;
  PlateProfile profile;
};

/// Full pipeline from (g, delta, w_scale).
Instance construct(const Parameters& params);

}  // namespace bounce
