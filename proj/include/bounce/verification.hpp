#pragma once

#include "bounce/construction.hpp"
#include "bounce/dynamics.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace bounce {

inline constexpr double kDefaultCheckTolerance = 1e-6;

enum class CheckStatus { pass, fail, error };

std::string_view to_string(CheckStatus status);

/// One verified (in)equality. Failing items carry the exact left/right values
/// of the violated relation.
struct CheckItem {
  std::string id;         // stable, scriptable, e.g. "lemma1.cond1"
  std::string statement;  // what is being asserted
  CheckStatus status = CheckStatus::pass;
  std::string lhs;
  std::string rhs;
  std::string note;
};

struct CheckReport {
  std::vector<CheckItem> items;

  bool all_passed() const;
  const CheckItem* find(std::string_view id) const;
  void merge(CheckReport other);
  std::string to_text() const;
};

/// Integer-cycle conditions on a window t_0..t_{N-1} with the plate
/// velocities zeta(t_k): the weighted sum closes up to the integer span W and
/// the plain sum yields the integer gain V.
///   lemma1.cond1, lemma1.cond2
CheckReport check_lemma1(const std::vector<Scalar>& times, const std::vector<Scalar>& zetas,
                         const Scalar& g, long long N, const Scalar& W, const Scalar& V);

/// The four orbit-generation conditions on a profile and times t_0..t_N:
/// integer span, integer gain from the endpoint derivative, equal heights,
/// and derivative values matching scaled second differences.
///   prop1.cond1 .. prop1.cond4
CheckReport check_prop1(const PlateProfile& profile, const std::vector<Scalar>& times,
                        const Scalar& g);

/// The arithmetic skeleton conditions on times t_0..t_N against the stored
/// constants: span W, gain V through eta (with 0 < eta <= delta), constant
/// scaled second differences.
///   lemma3.cond1 .. lemma3.cond3
CheckReport check_lemma3(const std::vector<Scalar>& times, const Scalar& g, const Scalar& delta,
                         const Scalar& eta, const Scalar& W, const Scalar& V);

/// Intrinsic profile conditions: zero heights at breakpoints, derivative
/// targets met, |zeta| <= delta, zero signed area between breakpoints, C^1
/// periodicity.
///   profile.heights, profile.targets, profile.bound, profile.area, profile.periodic
CheckReport check_profile(const PlateProfile& profile);

/// As above plus cross-checking the breakpoints against the blueprint
/// (profile.breakpoints).
CheckReport check_profile(const PlateProfile& profile, const EscapeBlueprint& blueprint);

/// Escape conclusion on a trajectory: v_{n+N} - v_n = (g/2) V and
/// t_{n+N} - t_n a non-negative integer, for every window the trajectory
/// contains. Exact trajectories are checked exactly, floating ones within
/// `tolerance` (integer shifts by distance to the nearest integer).
///   escape.vgain, escape.tshift
CheckReport check_escape(const Trajectory& traj, long long N, long long V, const Scalar& g,
                         double tolerance = kDefaultCheckTolerance,
                         std::vector<Scalar>* sigmas = nullptr);

/// Telescoping identities of the second differences T_k over an arbitrary
/// sequence t_0..t_N; they hold identically, so a failure flags an
/// implementation bug, not bad data.
///   identity.telescope1, identity.telescope2
CheckReport identity_oracles(const std::vector<Scalar>& times);

/// Certificate that every recorded flight stays strictly above the plate:
/// departure velocity exceeds the plate velocity, the flight parabola meets
/// the plate again exactly at the recorded arrival, and the gap is strictly
/// positive in between (per-piece discriminant/sign analysis; a proof in
/// exact mode).
///   feasibility.departure, feasibility.arrival, feasibility.gap
CheckReport check_feasibility(const PlateProfile& profile, const Trajectory& traj,
                              const Scalar& g, double zero_tol = 1e-9);

}  // namespace bounce
