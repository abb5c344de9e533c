#pragma once

#include "bounce/construction.hpp"
#include "bounce/dynamics.hpp"

#include <string>

namespace bounce {

/// Static SVG figures. Output is deterministic for identical inputs.

/// zeta over [0, 1] with node markers and the +-delta guides.
void plot_zeta(const PlateProfile& profile, const std::string& path);

/// f over [0, 1] with breakpoint markers.
void plot_height(const PlateProfile& profile, const std::string& path);

/// Post-impact velocity against bounce index (the escape staircase).
void plot_velocity(const Trajectory& traj, const std::string& path);

/// (t mod 1, v mod g/2) portrait of the orbit on the torus.
void plot_torus(const Trajectory& traj, const std::string& path);

}  // namespace bounce
