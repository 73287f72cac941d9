#include "newmark.hpp"

namespace tdnrbc {

void newmark_step(const ModeSystem& sys, ModeState& st,
                  const std::vector<cplx>& f_tilde) {
  const NewmarkParams& nm = sys.nm;
  const int n = static_cast<int>(st.V.size());
  const int nb = n - 1;
  const double dt = nm.dt;
  const double bdt2 = nm.beta * dt * dt;

  // Vtilde^n = V + dt Vd + dt^2 (1/2 - beta) Vdd
  for (int i = 0; i < n; ++i)
    st.vtilde[i] = st.V[i] + dt * st.Vd[i] + dt * dt * (0.5 - nm.beta) * st.Vdd[i];

  // boundary-row history term W^n (only the boundary entry is nonzero)
  cplx conv_hist = 0.0;
  for (std::size_t j = 0; j < sys.alpha2j.size(); ++j)
    conv_hist += sys.alpha2j[j] * st.nrbc.accum[j];
  cplx wn = sys.bB * ((1.0 - nm.gamma) * dt * st.Vdd[nb] + st.Vd[nb] -
                      (sys.alpha2 * sys.c * dt / (2.0 * sys.b)) * st.V[nb] -
                      (sys.c / sys.b) * conv_hist);

  // rhs = beta dt^2 (F~ - W^n) + (M + gamma dt B) Vtilde
  sys.M.multiply(st.vtilde.data(), st.rhs.data());
  for (int i = 0; i < n; ++i) st.rhs[i] += bdt2 * f_tilde[i];
  st.rhs[nb] += nm.gamma * dt * sys.bB * st.vtilde[nb] - bdt2 * wn;

  const cplx v_old_b = st.V[nb];
  sys.newmark_lu.solve(st.rhs.data(), 1);
  st.V = st.rhs;

  // recover accelerations and velocities
  for (int i = 0; i < n; ++i) {
    cplx vdd_new = (st.V[i] - st.vtilde[i]) / bdt2;
    st.Vd[i] += dt * ((1.0 - nm.gamma) * st.Vdd[i] + nm.gamma * vdd_new);
    st.Vdd[i] = vdd_new;
  }

  // boundary accumulators V_j^{n+1} = e^{c dt z_j / b} V_j^n
  //                                   + (dt/2) V^{n+1} + (dt/2) e^{...} V^n
  advance(st.nrbc, v_old_b, st.V[nb]);
  ++st.step;
}

}  // namespace tdnrbc
