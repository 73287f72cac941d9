#pragma once

#include <vector>

#include "nrbk.hpp"
#include "util.hpp"

namespace tdnrbc {

// Running accumulators f_j(t) = int_0^t e^{p_j (t - tau)} g(tau) dtau,
// advanced one step at a time by the trapezoidal rule:
//   f_j <- e^{p_j dt} f_j + (dt/2) (g_{n+1} + e^{p_j dt} g_n).
// Memory stays at one complex value per pole however many steps are taken.
struct ConvolutionState {
  std::vector<cplx> poles;         // rates, 1/time
  std::vector<cplx> step_factors;  // e^{p_j dt}
  std::vector<cplx> accum;         // f_j, zero at t = 0
  double dt = 0.0;
  double t_current = 0.0;
};

ConvolutionState make_state(const std::vector<cplx>& rate_poles, double dt);
inline ConvolutionState make_state(const ExpSumKernel& kernel, double dt) {
  return make_state(kernel.rate_poles, dt);
}

// One trapezoidal step with samples g(t_n), g(t_n + dt).
void advance(ConvolutionState& state, cplx g_n, cplx g_np1);

// (kernel * g)(t_current) = sum_j w_j f_j + delta_coeff * g(t_current).
cplx value(const ExpSumKernel& kernel, const ConvolutionState& state,
           cplx g_now);

}  // namespace tdnrbc
