#pragma once

#include <vector>

#include "sem1d.hpp"
#include "util.hpp"

namespace tdnrbc {

// One Newmark step of the per-mode integro-differential system
//   M Vdd + B Vd + C V + G - (c/b) B (sigma * V) = F,
// with F_tilde = F^{n+1} - G^{n+1} already formed by the caller.  Updates
// (V, Vd, Vdd) and the boundary convolution accumulators; the constitutive
// accumulators advance separately via advance_drude().
void newmark_step(const ModeSystem& sys, ModeState& st,
                  const std::vector<cplx>& f_tilde);

}  // namespace tdnrbc
