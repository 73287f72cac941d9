#include "sem1d.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace tdnrbc {

void NewmarkParams::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("NewmarkParams: dt must be > 0");
  if (!(gamma >= 0.5))
    throw std::invalid_argument("NewmarkParams: gamma must be >= 1/2");
  double req = 0.25 * (0.5 + gamma) * (0.5 + gamma);
  if (!(beta >= req - 1e-15))
    throw std::invalid_argument(
        "NewmarkParams: beta must be >= (1/2 + gamma)^2 / 4");
}

int Mesh1D::element_of(double r) const {
  if (r < 0.0 || r > b) throw std::domain_error("Mesh1D: radius outside [0, b]");
  auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), r);
  int e = static_cast<int>(it - breakpoints.begin()) - 1;
  return std::min(std::max(e, 0), E - 1);
}

bool Mesh1D::elem_in_cloak(int e) const {
  if (!has_cloak) return false;
  double mid = 0.5 * (elem_left(e) + elem_right(e));
  return mid > R1 && mid < R2;
}

bool Mesh1D::elem_in_shell(int e) const {
  double mid = 0.5 * (elem_left(e) + elem_right(e));
  return mid > R3 && mid < b;
}

cplx Mesh1D::eval(const std::vector<cplx>& dof, double r, cplx* deriv) const {
  int e = element_of(r);
  double a = elem_left(e), bb = elem_right(e);
  double x = 2.0 * (r - a) / (bb - a) - 1.0;
  std::vector<double> vals, ders;
  lagrange_eval(gll, bary, x, vals, ders);
  cplx v = 0.0, d = 0.0;
  for (int k = 0; k <= N; ++k) {
    cplx c = dof[global_index(e, k)];
    v += vals[k] * c;
    d += ders[k] * c;
  }
  if (deriv) *deriv = d * 2.0 / (bb - a);
  return v;
}

Mesh1D make_mesh(int E, int N, double b, double R3,
                 std::optional<std::pair<double, double>> cloak_radii) {
  if (E < 3 || N < 2) throw std::invalid_argument("make_mesh: need E >= 3, N >= 2");
  if (!(0.0 < R3 && R3 < b)) throw std::invalid_argument("make_mesh: need 0 < R3 < b");
  Mesh1D mesh;
  mesh.E = E;
  mesh.N = N;
  mesh.b = b;
  mesh.R3 = R3;
  std::vector<double> seps = {0.0};
  if (cloak_radii) {
    double R1 = cloak_radii->first, R2 = cloak_radii->second;
    if (!(0.0 < R1 && R1 < R2 && R2 < R3))
      throw std::invalid_argument("make_mesh: need 0 < R1 < R2 < R3");
    mesh.R1 = R1;
    mesh.R2 = R2;
    mesh.has_cloak = true;
    seps.push_back(R1);
    seps.push_back(R2);
  }
  seps.push_back(R3);
  seps.push_back(b);

  // distribute elements over the segments proportionally to length
  int n_seg = static_cast<int>(seps.size()) - 1;
  if (E < n_seg) throw std::invalid_argument("make_mesh: too few elements");
  std::vector<int> count(n_seg, 1);
  int left = E - n_seg;
  for (int it = 0; it < left; ++it) {
    // give the next element to the segment with the largest h
    int pick = 0;
    double worst = -1.0;
    for (int s = 0; s < n_seg; ++s) {
      double h = (seps[s + 1] - seps[s]) / count[s];
      if (h > worst) {
        worst = h;
        pick = s;
      }
    }
    ++count[pick];
  }
  mesh.breakpoints.push_back(0.0);
  for (int s = 0; s < n_seg; ++s)
    for (int k = 1; k <= count[s]; ++k)
      mesh.breakpoints.push_back(seps[s] +
                                 (seps[s + 1] - seps[s]) * k / count[s]);
  // snap the interface breakpoints exactly
  for (double s : seps)
    for (double& bp : mesh.breakpoints)
      if (std::abs(bp - s) < 1e-14) bp = s;

  QuadRule lob = gauss_lobatto(N + 1);
  mesh.gll = lob.x;
  mesh.bary = barycentric_weights(mesh.gll);
  mesh.quad = gauss_legendre(N + 2);
  int nq = N + 2;
  mesh.Pq.resize(static_cast<std::size_t>(nq) * (N + 1));
  mesh.Dq.resize(mesh.Pq.size());
  std::vector<double> vals, ders;
  for (int q = 0; q < nq; ++q) {
    lagrange_eval(mesh.gll, mesh.bary, mesh.quad.x[q], vals, ders);
    for (int k = 0; k <= N; ++k) {
      mesh.Pq[q * (N + 1) + k] = vals[k];
      mesh.Dq[q * (N + 1) + k] = ders[k];
    }
  }
  mesh.n_dof = E * N + 1;
  for (int e = 0; e <= E; ++e) {
    double bp = mesh.breakpoints[e];
    if (mesh.has_cloak && bp == mesh.R1) mesh.i1 = e * N;
    if (mesh.has_cloak && bp == mesh.R2) mesh.i2 = e * N;
    if (bp == R3) mesh.i3 = e * N;
  }
  if (mesh.i3 < 0 || (mesh.has_cloak && (mesh.i1 < 0 || mesh.i2 < 0)))
    throw std::runtime_error("make_mesh: interface breakpoint missing");
  return mesh;
}

namespace {

// weighted element integrals sum_q w_q f(r_q) phi_i phi_j (or phi_i' phi_j')
void assemble_element(const Mesh1D& mesh, int e,
                      const std::function<double(double)>& mass_w,
                      const std::function<double(double)>& stiff_w,
                      const std::function<double(double)>& loworder_w,
                      SymBanded& Mmat, SymBanded& Amat) {
  int N = mesh.N, nq = N + 2;
  double a = mesh.elem_left(e), b = mesh.elem_right(e);
  double jac = 0.5 * (b - a);
  for (int q = 0; q < nq; ++q) {
    double r = 0.5 * (a + b) + jac * mesh.quad.x[q];
    double wm = mesh.quad.w[q] * jac * mass_w(r);
    double ws = mesh.quad.w[q] * jac * stiff_w(r) / (jac * jac);
    double wl = mesh.quad.w[q] * jac * loworder_w(r);
    const double* P = mesh.Pq.data() + static_cast<std::size_t>(q) * (N + 1);
    const double* D = mesh.Dq.data() + static_cast<std::size_t>(q) * (N + 1);
    for (int i = 0; i <= N; ++i) {
      int gi = mesh.global_index(e, i);
      for (int j = i; j <= N; ++j) {
        int gj = mesh.global_index(e, j);
        Mmat.at(gi, gj) += wm * P[i] * P[j];
        Amat.at(gi, gj) += ws * D[i] * D[j] + wl * P[i] * P[j];
      }
    }
  }
}

}  // namespace

ModeSystem assemble(int l, const Mesh1D& mesh,
                    const std::optional<DrudeParams>& cloak, double c,
                    const NewmarkParams& nm) {
  if (l < 1) throw std::invalid_argument("assemble: l must be >= 1");
  nm.validate();
  if (cloak && !mesh.has_cloak)
    throw std::invalid_argument("assemble: cloak given but mesh has no layer");
  ModeSystem sys;
  sys.l = l;
  sys.c = c;
  sys.b = mesh.b;
  sys.mesh = &mesh;
  sys.nm = nm;
  double beta_l = static_cast<double>(l) * (l + 1);
  double eps_t = cloak ? cloak->epsilon_t() : 1.0;

  sys.M = SymBanded(mesh.n_dof, mesh.N);
  sys.A = SymBanded(mesh.n_dof, mesh.N);
  for (int e = 0; e < mesh.E; ++e) {
    bool in_cloak = mesh.elem_in_cloak(e);
    double wm = in_cloak ? eps_t : 1.0;
    double ws = in_cloak ? 1.0 / eps_t : 1.0;
    assemble_element(
        mesh, e, [&](double r) { return wm * r * r; },
        [&](double r) { return c * c * ws * r * r; },
        [&](double) { return c * c * beta_l; }, sys.M, sys.A);
  }

  // C corrections: c^2 b E_NN and the interface terms
  // +- c^2 ((eps - 1)/eps) R_i E_ii.  The 1/eps is required for the natural
  // conditions of the form to reproduce the derivative jumps
  // d_r v|cloak = eps d_r v|out + (eps - 1) v / r at R1 and R2.
  sys.c_idx.push_back(mesh.n_dof - 1);
  sys.c_coeff.push_back(c * c * mesh.b);
  if (cloak) {
    double jump = c * c * (eps_t - 1.0) / eps_t;
    sys.c_idx.push_back(mesh.i1);
    sys.c_coeff.push_back(jump * mesh.R1);
    sys.c_idx.push_back(mesh.i2);
    sys.c_coeff.push_back(-jump * mesh.R2);
  }
  sys.bB = c * mesh.b * mesh.b;
  sys.sigma = sigma_kernel(l, mesh.b, c);

  // constitutive tables on the cloak quadrature nodes
  if (cloak) {
    for (int k = 1; k <= 2; ++k) {
      DrudeNodeTable& tab = sys.drude[k - 1];
      for (int e = 0; e < mesh.E; ++e) {
        if (!mesh.elem_in_cloak(e)) continue;
        double a = mesh.elem_left(e), b2 = mesh.elem_right(e);
        double jac = 0.5 * (b2 - a);
        for (int q = 0; q < mesh.N + 2; ++q) {
          double r = 0.5 * (a + b2) + jac * mesh.quad.x[q];
          DrudeKernel dk = theta_kernel(*cloak, r, k);
          tab.qw.push_back(mesh.quad.w[q] * jac);
          tab.theta_w.push_back(dk.weight);
          tab.lam0.push_back(std::exp(cplx(0.0, 1.0) * dk.zeta0 * nm.dt));
          tab.lam1.push_back(std::exp(cplx(0.0, 1.0) * dk.zeta1 * nm.dt));
        }
      }
    }
  }

  // shell lift vectors over (R3, b): shape psi = (b - r)/(b - R3)
  sys.liftP.assign(mesh.n_dof, 0.0);
  sys.liftQ.assign(mesh.n_dof, 0.0);
  sys.liftR.assign(mesh.n_dof, 0.0);
  double bR3 = mesh.b - mesh.R3;
  for (int e = 0; e < mesh.E; ++e) {
    if (!mesh.elem_in_shell(e)) continue;
    double a = mesh.elem_left(e), b2 = mesh.elem_right(e);
    double jac = 0.5 * (b2 - a);
    for (int q = 0; q < mesh.N + 2; ++q) {
      double r = 0.5 * (a + b2) + jac * mesh.quad.x[q];
      double w = mesh.quad.w[q] * jac;
      double psi = (mesh.b - r) / bR3;
      const double* P = mesh.Pq.data() + static_cast<std::size_t>(q) * (mesh.N + 1);
      // loads pair against r^2 phi_i (the strong form is tested with r^2 phi)
      for (int i = 0; i <= mesh.N; ++i) {
        int gi = mesh.global_index(e, i);
        sys.liftP[gi] += w * r * r * psi * P[i];
        sys.liftQ[gi] += w * 2.0 * c * c * r / bR3 * P[i];
        sys.liftR[gi] += w * c * c * psi * P[i];
      }
    }
  }
  sys.lift_edge_R3 = c * c * mesh.R3 * mesh.R3;
  sys.lift_edge_b = c * c * mesh.b * mesh.b / bR3;

  finalize_operator(sys);
  sys.mass_lu.factor(sys.M, {}, {});
  return sys;
}

void finalize_operator(ModeSystem& sys) {
  const NewmarkParams& nm = sys.nm;
  // alpha scalars of the discrete sigma convolution
  sys.alpha1 = 0.0;
  sys.alpha2j.clear();
  cplx a2 = 0.0;
  if (sys.sigma) {
    cplx a1 = 0.0;
    for (std::size_t j = 0; j < sys.sigma->rate_poles.size(); ++j) {
      a1 += sys.sigma->weights[j];  // (c/b) z_j
      cplx a2j = sys.sigma->weights[j] * std::exp(sys.sigma->rate_poles[j] * nm.dt);
      sys.alpha2j.push_back(a2j);
      a2 += a2j;
    }
    sys.alpha1 = a1.real();
  }
  sys.alpha2 = a2;

  // operator M + (gamma dt - alpha1 c beta dt^3/(2b)) B + beta dt^2 C
  SymBanded op = sys.M;
  double bdt2 = nm.beta * nm.dt * nm.dt;
  for (int i = 0; i < op.n(); ++i)
    for (int j = i; j <= std::min(op.n() - 1, i + op.bandwidth()); ++j)
      op.at(i, j) += bdt2 * sys.A.at(i, j);
  std::vector<int> idx = sys.c_idx;
  std::vector<double> coeff;
  for (double v : sys.c_coeff) coeff.push_back(bdt2 * v);
  idx.push_back(op.n() - 1);
  coeff.push_back((nm.gamma * nm.dt -
                   sys.alpha1 * sys.c * nm.beta * nm.dt * nm.dt * nm.dt /
                       (2.0 * sys.b)) *
                  sys.bB);
  sys.newmark_lu.factor(op, idx, coeff);
}

ModeState make_mode_state(const ModeSystem& sys, int kdrude) {
  ModeState st;
  int n = sys.mesh ? sys.mesh->n_dof : sys.M.n();
  st.V.assign(n, cplx(0.0));
  st.Vd.assign(n, cplx(0.0));
  st.Vdd.assign(n, cplx(0.0));
  st.rhs.assign(n, cplx(0.0));
  st.vtilde.assign(n, cplx(0.0));
  st.nrbc = sys.sigma ? make_state(*sys.sigma, sys.nm.dt)
                      : make_state(std::vector<cplx>{}, sys.nm.dt);
  st.kdrude = kdrude;
  std::size_t nodes = sys.drude[kdrude].qw.size();
  st.F0.assign(nodes, cplx(0.0));
  st.F1.assign(nodes, cplx(0.0));
  st.v_nodes.assign(nodes, cplx(0.0));
  return st;
}

void lift_and_rhs(const ModeSystem& sys, const JumpData& data,
                  std::vector<cplx>& F) {
  const Mesh1D& mesh = *sys.mesh;
  double beta_l = static_cast<double>(sys.l) * (sys.l + 1);
  F.assign(mesh.n_dof, cplx(0.0));
  if (data.h == cplx(0.0) && data.dr_h == cplx(0.0) && data.ddt_h == cplx(0.0))
    return;
  for (int i = 0; i < mesh.n_dof; ++i)
    F[i] = data.ddt_h * sys.liftP[i] +
           data.h * (sys.liftQ[i] + beta_l * sys.liftR[i]);
  double bR3 = mesh.b - mesh.R3;
  F[mesh.i3] += (data.dr_h + data.h / bR3) * sys.lift_edge_R3;
  F[mesh.n_dof - 1] -= data.h * sys.lift_edge_b;
}

void add_volume_source(const ModeSystem& sys,
                       const std::function<cplx(double)>& f2,
                       std::vector<cplx>& F) {
  const Mesh1D& mesh = *sys.mesh;
  for (int e = 0; e < mesh.E; ++e) {
    double a = mesh.elem_left(e), b2 = mesh.elem_right(e);
    double jac = 0.5 * (b2 - a);
    for (int q = 0; q < mesh.N + 2; ++q) {
      double r = 0.5 * (a + b2) + jac * mesh.quad.x[q];
      cplx w = mesh.quad.w[q] * jac * r * r * f2(r);
      const double* P = mesh.Pq.data() + static_cast<std::size_t>(q) * (mesh.N + 1);
      for (int i = 0; i <= mesh.N; ++i)
        F[mesh.global_index(e, i)] += w * P[i];
    }
  }
}

void drude_load(const ModeSystem& sys, const ModeState& st,
                std::vector<cplx>& F) {
  const DrudeNodeTable& tab = sys.drude[st.kdrude];
  if (tab.qw.empty()) return;
  const Mesh1D& mesh = *sys.mesh;
  double beta_l = static_cast<double>(sys.l) * (sys.l + 1);
  double scale = beta_l * sys.c * sys.c;
  double half_dt = 0.5 * sys.nm.dt;
  std::size_t node = 0;
  for (int e = 0; e < mesh.E; ++e) {
    if (!mesh.elem_in_cloak(e)) continue;
    for (int q = 0; q < mesh.N + 2; ++q, ++node) {
      cplx conv = tab.lam0[node] * st.F0[node] - tab.lam1[node] * st.F1[node] +
                  half_dt * (tab.lam0[node] - tab.lam1[node]) * st.v_nodes[node];
      cplx coef = scale * tab.qw[node] * tab.theta_w[node] * conv;
      const double* P = mesh.Pq.data() + static_cast<std::size_t>(q) * (mesh.N + 1);
      for (int i = 0; i <= mesh.N; ++i)
        F[mesh.global_index(e, i)] -= coef * P[i];
    }
  }
}

void advance_drude(const ModeSystem& sys, ModeState& st) {
  const DrudeNodeTable& tab = sys.drude[st.kdrude];
  if (tab.qw.empty()) return;
  const Mesh1D& mesh = *sys.mesh;
  double half_dt = 0.5 * sys.nm.dt;
  std::size_t node = 0;
  for (int e = 0; e < mesh.E; ++e) {
    if (!mesh.elem_in_cloak(e)) continue;
    // project V^{n+1} onto the element quadrature nodes
    const cplx* loc = st.V.data() + mesh.global_index(e, 0);
    for (int q = 0; q < mesh.N + 2; ++q, ++node) {
      const double* P = mesh.Pq.data() + static_cast<std::size_t>(q) * (mesh.N + 1);
      cplx v_new = 0.0;
      for (int k = 0; k <= mesh.N; ++k) v_new += P[k] * loc[k];
      st.F0[node] = tab.lam0[node] * st.F0[node] +
                    half_dt * (v_new + tab.lam0[node] * st.v_nodes[node]);
      st.F1[node] = tab.lam1[node] * st.F1[node] +
                    half_dt * (v_new + tab.lam1[node] * st.v_nodes[node]);
      st.v_nodes[node] = v_new;
    }
  }
}

void initial_conditions(const ModeSystem& sys, ModeState& st,
                        const JumpData& at0, cplx dt_h0) {
  const Mesh1D& mesh = *sys.mesh;
  double bR3 = mesh.b - mesh.R3;
  // nodal interpolation of the lift shape (exact: linear on [R3, b])
  for (int e = 0; e < mesh.E; ++e) {
    if (!mesh.elem_in_shell(e)) continue;
    double a = mesh.elem_left(e), b2 = mesh.elem_right(e);
    for (int k = 0; k <= mesh.N; ++k) {
      double r = 0.5 * (a + b2) + 0.5 * (b2 - a) * mesh.gll[k];
      double shape = (mesh.b - r) / bR3;
      int gi = mesh.global_index(e, k);
      st.V[gi] = at0.h * shape;
      st.Vd[gi] = dt_h0 * shape;
    }
  }
  // Vdd from the governing equation at t = 0 (convolutions vanish)
  std::vector<cplx> F;
  lift_and_rhs(sys, at0, F);
  // F - B Vd - C V
  int nb = mesh.n_dof - 1;
  sys.A.multiply(st.V.data(), st.rhs.data());
  for (int i = 0; i < mesh.n_dof; ++i) F[i] -= st.rhs[i];
  for (std::size_t k = 0; k < sys.c_idx.size(); ++k)
    F[sys.c_idx[k]] -= sys.c_coeff[k] * st.V[sys.c_idx[k]];
  F[nb] -= sys.bB * st.Vd[nb];
  sys.mass_lu.solve(F.data(), 1);
  st.Vdd = F;
  // seed the cloak node values with the initial field (zero inside R2)
  std::size_t node = 0;
  const DrudeNodeTable& tab = sys.drude[st.kdrude];
  if (!tab.qw.empty()) {
    for (int e = 0; e < mesh.E; ++e) {
      if (!mesh.elem_in_cloak(e)) continue;
      const cplx* loc = st.V.data() + mesh.global_index(e, 0);
      for (int q = 0; q < mesh.N + 2; ++q, ++node) {
        const double* P = mesh.Pq.data() + static_cast<std::size_t>(q) * (mesh.N + 1);
        cplx v = 0.0;
        for (int k = 0; k <= mesh.N; ++k) v += P[k] * loc[k];
        st.v_nodes[node] = v;
      }
    }
  }
}

double mode_energy(const ModeSystem& sys, const ModeState& st) {
  std::vector<cplx> tmp(st.V.size());
  sys.M.multiply(st.Vd.data(), tmp.data());
  double e = 0.0;
  for (std::size_t i = 0; i < tmp.size(); ++i)
    e += (std::conj(st.Vd[i]) * tmp[i]).real();
  sys.A.multiply(st.V.data(), tmp.data());
  for (std::size_t i = 0; i < tmp.size(); ++i)
    e += (std::conj(st.V[i]) * tmp[i]).real();
  return e;
}

}  // namespace tdnrbc
