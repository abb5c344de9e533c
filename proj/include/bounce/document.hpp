#pragma once

#include "bounce/construction.hpp"
#include "bounce/dynamics.hpp"
#include "bounce/verification.hpp"

#include <iosfwd>
#include <string>

namespace bounce {

/// On-disk form of a constructed instance: the inputs, the derived constants
/// and the profile. All scalars are exact rationals serialized as "p" / "p/q".
/// The impact times are not stored; they are rebuilt from (N, W, g, delta).
struct ProfileDocument {
  Parameters params;
  long long N = 0;
  long long V = 0;
  Scalar W;
  Scalar eta;
  PlateProfile profile;
};

ProfileDocument make_document(const Instance& instance);

/// Impact times t_0..t_N implied by the stored constants.
std::vector<Scalar> document_times(const ProfileDocument& doc);

/// Stored initial condition (t_0*, v_0*) = (0, g t_1 / 2).
PhaseState document_initial_state(const ProfileDocument& doc);

/// Canonical text form: fixed key order, no timestamps, byte-deterministic.
std::string serialize_document(const ProfileDocument& doc);
ProfileDocument parse_document(const std::string& text);  // ParseError on bad input

void write_document(const ProfileDocument& doc, const std::string& path);
ProfileDocument read_document(const std::string& path);

/// Delimited trajectory: header n,t,v,t_mod_1,v_mod_half_g[,residual]; the
/// residual column is present exactly for the implicit map in floating mode.
void write_trajectory(const Trajectory& traj, std::ostream& os);
Trajectory read_trajectory(std::istream& is, Mode mode, const Scalar& g);
void write_trajectory_file(const Trajectory& traj, const std::string& path);
Trajectory read_trajectory_file(const std::string& path, Mode mode, const Scalar& g);

struct VerifyOptions {
  long long escape_periods = 50;       // GS windows checked when no trajectory is given
  long long feasibility_flights = -1;  // default: 2N
  double tolerance = kDefaultCheckTolerance;
};

/// The full checker battery over a document: integer-cycle conditions,
/// skeleton conditions, orbit-generation conditions, profile conditions,
/// telescoping identities, escape along a trajectory (the given one, or a
/// fresh exact explicit-map orbit) and the flight feasibility certificate.
CheckReport verify_document(const ProfileDocument& doc, const Trajectory* trajectory = nullptr,
                            const VerifyOptions& options = {});

}  // namespace bounce
