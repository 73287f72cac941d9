#include "convolve.hpp"

#include <cmath>
#include <stdexcept>

namespace tdnrbc {

ConvolutionState make_state(const std::vector<cplx>& rate_poles, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("make_state: dt must be > 0");
  ConvolutionState st;
  st.poles = rate_poles;
  st.step_factors.reserve(rate_poles.size());
  for (const cplx& p : rate_poles) st.step_factors.push_back(std::exp(p * dt));
  st.accum.assign(rate_poles.size(), cplx(0.0, 0.0));
  st.dt = dt;
  st.t_current = 0.0;
  return st;
}

void advance(ConvolutionState& state, cplx g_n, cplx g_np1) {
  const double half_dt = 0.5 * state.dt;
  for (std::size_t j = 0; j < state.poles.size(); ++j) {
    const cplx e = state.step_factors[j];
    state.accum[j] = e * state.accum[j] + half_dt * (g_np1 + e * g_n);
  }
  state.t_current += state.dt;
}

cplx value(const ExpSumKernel& kernel, const ConvolutionState& state,
           cplx g_now) {
  if (kernel.rate_poles.size() != state.poles.size())
    throw std::invalid_argument("convolve::value: pole-set size mismatch");
  for (std::size_t j = 0; j < state.poles.size(); ++j)
    if (kernel.rate_poles[j] != state.poles[j])
      throw std::invalid_argument("convolve::value: pole-set mismatch");
  cplx acc = 0.0;
  for (std::size_t j = 0; j < state.poles.size(); ++j)
    acc += kernel.weights[j] * state.accum[j];
  return acc + kernel.delta_coeff * g_now;
}

}  // namespace tdnrbc
