#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <functional>

#include "newmark.hpp"
#include "sem1d.hpp"

using namespace tdnrbc;

namespace {

// smooth compactly supported bump on (r0 - w, r0 + w)
double bump(double r, double r0, double w) {
  double s = (r - r0) / w;
  if (std::abs(s) >= 1.0) return 0.0;
  return std::exp(-s * s / (1.0 - s * s));
}

// dense direct-quadrature oracle of the mass/stiffness forms using an
// independent high-order rule and direct Lagrange evaluation
void dense_oracle(const Mesh1D& mesh, double c, int l, double eps_t,
                  Eigen::MatrixXd& M, Eigen::MatrixXd& A) {
  int n = mesh.n_dof;
  M = Eigen::MatrixXd::Zero(n, n);
  A = Eigen::MatrixXd::Zero(n, n);
  double beta_l = static_cast<double>(l) * (l + 1);
  QuadRule rule = gauss_legendre(3 * mesh.N + 4);
  std::vector<double> vals, ders;
  for (int e = 0; e < mesh.E; ++e) {
    double a = mesh.elem_left(e), b = mesh.elem_right(e);
    double jac = 0.5 * (b - a);
    bool cl = mesh.elem_in_cloak(e);
    double wm = cl ? eps_t : 1.0;
    double ws = cl ? 1.0 / eps_t : 1.0;
    for (std::size_t q = 0; q < rule.x.size(); ++q) {
      double r = 0.5 * (a + b) + jac * rule.x[q];
      lagrange_eval(mesh.gll, mesh.bary, rule.x[q], vals, ders);
      for (int i = 0; i <= mesh.N; ++i)
        for (int j = 0; j <= mesh.N; ++j) {
          int gi = mesh.global_index(e, i), gj = mesh.global_index(e, j);
          M(gi, gj) += rule.w[q] * jac * wm * r * r * vals[i] * vals[j];
          A(gi, gj) += rule.w[q] * jac * c * c *
                       (ws * r * r * ders[i] * ders[j] / (jac * jac) +
                        beta_l * vals[i] * vals[j]);
        }
    }
  }
}

// one-sided evaluation of value and radial derivative on a given element
void eval_on_element(const Mesh1D& mesh, const std::vector<cplx>& dof, int e,
                     double r, cplx* val, cplx* der) {
  double a = mesh.elem_left(e), b = mesh.elem_right(e);
  double x = 2.0 * (r - a) / (b - a) - 1.0;
  std::vector<double> vals, ders;
  lagrange_eval(mesh.gll, mesh.bary, x, vals, ders);
  *val = 0.0;
  *der = 0.0;
  for (int k = 0; k <= mesh.N; ++k) {
    cplx c = dof[mesh.global_index(e, k)];
    *val += vals[k] * c;
    *der += ders[k] * c * 2.0 / (b - a);
  }
}

}  // namespace

TEST_CASE("mesh construction honors interfaces") {
  Mesh1D mesh = make_mesh(20, 20, 1.0, 0.95, std::make_pair(0.15, 0.35));
  CHECK(mesh.n_dof == 20 * 20 + 1);
  CHECK(mesh.i1 >= 0);
  CHECK(mesh.i2 >= 0);
  CHECK(mesh.i3 >= 0);
  bool has_r1 = false, has_r2 = false, has_r3 = false;
  for (double bp : mesh.breakpoints) {
    if (bp == 0.15) has_r1 = true;
    if (bp == 0.35) has_r2 = true;
    if (bp == 0.95) has_r3 = true;
  }
  CHECK(has_r1);
  CHECK(has_r2);
  CHECK(has_r3);
  CHECK(mesh.breakpoints.front() == 0.0);
  CHECK(mesh.breakpoints.back() == 1.0);
  // vacuum mesh
  Mesh1D vac = make_mesh(8, 6, 2.0, 1.9, std::nullopt);
  CHECK(!vac.has_cloak);
  CHECK(vac.i3 >= 0);
  CHECK_THROWS(make_mesh(20, 20, 1.0, 0.95, std::make_pair(0.35, 0.15)));
}

TEST_CASE("assembled matrices match the dense quadrature oracle") {
  NewmarkParams nm;
  for (bool cloak : {false, true}) {
    Mesh1D mesh = cloak ? make_mesh(8, 7, 1.0, 0.95, std::make_pair(0.15, 0.35))
                        : make_mesh(6, 7, 1.0, 0.95, std::nullopt);
    std::optional<DrudeParams> params;
    double eps_t = 1.0;
    if (cloak) {
      params = DrudeParams{};
      eps_t = params->epsilon_t();
    }
    int l = 3;
    ModeSystem sys = assemble(l, mesh, params, 1.0, nm);
    const SymBanded& Mb = sys.M;
    const SymBanded& Ab = sys.A;
    Eigen::MatrixXd Md, Ad;
    dense_oracle(mesh, 1.0, l, eps_t, Md, Ad);
    double m_err = 0.0, a_err = 0.0;
    for (int i = 0; i < mesh.n_dof; ++i)
      for (int j = 0; j < mesh.n_dof; ++j) {
        m_err = std::max(m_err, std::abs(Mb.at(i, j) - Md(i, j)));
        a_err = std::max(a_err, std::abs(Ab.at(i, j) - Ad(i, j)));
      }
    CHECK(m_err <= 1e-12 * Md.norm());
    CHECK(a_err <= 1e-12 * Ad.norm());
  }
}

TEST_CASE("interface corrections carry the printed signs") {
  NewmarkParams nm;
  Mesh1D mesh = make_mesh(8, 6, 1.0, 0.95, std::make_pair(0.15, 0.35));
  DrudeParams p;
  ModeSystem sys = assemble(2, mesh, p, 1.0, nm);
  double eps = p.epsilon_t();
  REQUIRE(sys.c_idx.size() == 3);
  // boundary term c^2 b at (N, N)
  CHECK(sys.c_idx[0] == mesh.n_dof - 1);
  CHECK(sys.c_coeff[0] == doctest::Approx(1.0).epsilon(1e-14));
  // +c^2 ((eps-1)/eps) R1 at (i1, i1): positive interior correction
  CHECK(sys.c_idx[1] == mesh.i1);
  CHECK(sys.c_coeff[1] ==
        doctest::Approx((eps - 1.0) / eps * 0.15).epsilon(1e-14));
  CHECK(sys.c_coeff[1] > 0.0);
  // -c^2 ((eps-1)/eps) R2 at (i2, i2): negative outer correction
  CHECK(sys.c_idx[2] == mesh.i2);
  CHECK(sys.c_coeff[2] ==
        doctest::Approx(-(eps - 1.0) / eps * 0.35).epsilon(1e-14));
  CHECK(sys.c_coeff[2] < 0.0);
  CHECK(sys.bB == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("mass is positive definite, stiffness positive semidefinite") {
  NewmarkParams nm;
  Mesh1D mesh = make_mesh(8, 8, 1.0, 0.95, std::make_pair(0.15, 0.35));
  ModeSystem sys = assemble(1, mesh, DrudeParams{}, 1.0, nm);
  int n = mesh.n_dof;
  const SymBanded& Mb = sys.M;
  const SymBanded& Ab = sys.A;
  Eigen::MatrixXd M(n, n), A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      M(i, j) = Mb.at(i, j);
      A(i, j) = Ab.at(i, j);
    }
  Eigen::LLT<Eigen::MatrixXd> llt(M);
  CHECK(llt.info() == Eigen::Success);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  CHECK(es.eigenvalues().minCoeff() >= -1e-10 * A.norm());
  // symmetry is structural in the banded storage; dense copies agree
  CHECK((M - M.transpose()).norm() == 0.0);
  CHECK((A - A.transpose()).norm() == 0.0);
}

TEST_CASE("lift load vector matches a dense quadrature oracle") {
  NewmarkParams nm;
  Mesh1D mesh = make_mesh(7, 9, 2.0, 1.9, std::nullopt);  // b = 2 exercises the
  double b = mesh.b, R3 = mesh.R3, c = 1.3;               // non-unit-radius terms
  int l = 1;
  ModeSystem sys = assemble(l, mesh, std::nullopt, c, nm);
  JumpData data;
  data.h = cplx(0.7, -0.2);
  data.dr_h = cplx(-0.3, 0.5);
  data.ddt_h = cplx(1.1, 0.4);
  std::vector<cplx> F;
  lift_and_rhs(sys, data, F);

  // oracle: integrate f2~ against each basis function with a fine rule
  double beta_l = static_cast<double>(l) * (l + 1);
  QuadRule rule = gauss_legendre(3 * mesh.N + 6);
  std::vector<double> vals, ders;
  std::vector<cplx> Fo(mesh.n_dof, cplx(0.0));
  for (int e = 0; e < mesh.E; ++e) {
    if (!mesh.elem_in_shell(e)) continue;
    double a = mesh.elem_left(e), b2 = mesh.elem_right(e);
    double jac = 0.5 * (b2 - a);
    for (std::size_t q = 0; q < rule.x.size(); ++q) {
      double r = 0.5 * (a + b2) + jac * rule.x[q];
      double psi = (b - r) / (b - R3);
      cplx f2 = data.ddt_h * psi +
                (2.0 * c * c / (r * (b - r)) + c * c * beta_l / (r * r)) *
                    data.h * psi;
      lagrange_eval(mesh.gll, mesh.bary, rule.x[q], vals, ders);
      for (int i = 0; i <= mesh.N; ++i)
        Fo[mesh.global_index(e, i)] += rule.w[q] * jac * r * r * f2 * vals[i];
    }
  }
  Fo[mesh.i3] += (data.dr_h + data.h / (b - R3)) * c * c * R3 * R3;
  Fo[mesh.n_dof - 1] -= data.h / (b - R3) * c * c * b * b;
  double scale = 0.0, err = 0.0;
  for (int i = 0; i < mesh.n_dof; ++i) {
    scale = std::max(scale, std::abs(Fo[i]));
    err = std::max(err, std::abs(F[i] - Fo[i]));
  }
  CHECK(err <= 1e-12 * scale);
  // zero data -> zero load
  lift_and_rhs(sys, JumpData{}, F);
  for (const cplx& v : F) CHECK(v == cplx(0.0, 0.0));
}

TEST_CASE("manufactured vacuum solution: spectral convergence in N") {
  // v(r, t) = cos(w t) g(r) with g a smooth interior bump; the forcing
  // f2 = -w^2 cos g - c^2 cos (g'' + 2 g'/r) + c^2 beta_l cos g / r^2
  const double w = 6.0, c = 1.0;
  const int l = 2;
  const double beta_l = l * (l + 1.0);
  // entire in r, vanishing value and slope at r = b so the non-reflecting
  // boundary row is satisfied identically by the manufactured solution
  auto g = [](double r) {
    return r * r * (1 - r) * (1 - r) * std::sin(3 * kPi * r);
  };
  auto dg = [&](double r) {
    double h = 1e-5;
    return (-g(r + 2 * h) + 8 * g(r + h) - 8 * g(r - h) + g(r - 2 * h)) /
           (12 * h);
  };
  auto d2g = [&](double r) {
    double h = 1e-4;
    return (-g(r + 2 * h) + 16 * g(r + h) - 30 * g(r) + 16 * g(r - h) -
            g(r - 2 * h)) /
           (12 * h * h);
  };

  auto solve_err = [&](int N, double dt, double T) {
    Mesh1D mesh = make_mesh(6, N, 1.0, 0.95, std::nullopt);
    NewmarkParams nm;
    nm.dt = dt;
    ModeSystem sys = assemble(l, mesh, std::nullopt, c, nm);
    ModeState st = make_mode_state(sys, 0);
    // initial data v = g, v_t = 0
    for (int e = 0; e < mesh.E; ++e)
      for (int k = 0; k <= mesh.N; ++k) {
        double a = mesh.elem_left(e), b2 = mesh.elem_right(e);
        double r = 0.5 * (a + b2) + 0.5 * (b2 - a) * mesh.gll[k];
        st.V[mesh.global_index(e, k)] = g(r);
      }
    // Vdd(0) = M^{-1}(F(0) - C V(0))
    std::vector<cplx> F(mesh.n_dof, cplx(0.0));
    auto f2 = [&](double t) {
      return [&, t](double r) -> cplx {
        return std::cos(w * t) *
               (-w * w * g(r) - c * c * (d2g(r) + 2.0 * dg(r) / r) +
                c * c * beta_l * g(r) / (r * r));
      };
    };
    add_volume_source(sys, f2(0.0), F);
    sys.A.multiply(st.V.data(), st.rhs.data());
    for (int i = 0; i < mesh.n_dof; ++i) F[i] -= st.rhs[i];
    for (std::size_t k = 0; k < sys.c_idx.size(); ++k)
      F[sys.c_idx[k]] -= sys.c_coeff[k] * st.V[sys.c_idx[k]];
    sys.mass_lu.solve(F.data(), 1);
    st.Vdd = F;

    int steps = static_cast<int>(std::round(T / dt));
    std::vector<cplx> load(mesh.n_dof);
    for (int n = 0; n < steps; ++n) {
      load.assign(mesh.n_dof, cplx(0.0));
      add_volume_source(sys, f2((n + 1) * dt), load);
      newmark_step(sys, st, load);
    }
    // error against the exact solution at T
    double err = 0.0;
    for (double r : {0.3, 0.42, 0.55, 0.7}) {
      cplx v = mesh.eval(st.V, r, nullptr);
      err = std::max(err, std::abs(v - cplx(std::cos(w * T) * g(r), 0.0)));
    }
    return err;
  };

  SUBCASE("spatial error decays exponentially in N") {
    double T = 0.4, dt = 1e-4;
    double prev = -1.0;
    for (int N : {6, 8, 10, 12}) {
      double e = solve_err(N, dt, T);
      if (prev > 0.0 && prev > 1e-8)  // above the time-discretization floor
        CHECK(prev / e >= 5.0);
      prev = e;
    }
  }

  SUBCASE("temporal error is second order") {
    double T = 0.4;
    int N = 14;  // spatial error far below the temporal one
    double e1 = solve_err(N, 4e-3, T);
    double e2 = solve_err(N, 2e-3, T);
    double e3 = solve_err(N, 1e-3, T);
    CHECK(e1 / e2 >= 3.6);
    CHECK(e1 / e2 <= 4.4);
    CHECK(e2 / e3 >= 3.6);
    CHECK(e2 / e3 <= 4.4);
  }
}

TEST_CASE("outgoing pulse leaves the domain: NRBC transparency") {
  for (int l : {1, 5}) {
    Mesh1D mesh = make_mesh(10, 16, 1.0, 0.95, std::nullopt);
    NewmarkParams nm;
    nm.dt = 5e-4;
    ModeSystem sys = assemble(l, mesh, std::nullopt, 1.0, nm);
    ModeState st = make_mode_state(sys, 0);
    for (int e = 0; e < mesh.E; ++e)
      for (int k = 0; k <= mesh.N; ++k) {
        double a = mesh.elem_left(e), b2 = mesh.elem_right(e);
        double r = 0.5 * (a + b2) + 0.5 * (b2 - a) * mesh.gll[k];
        st.V[mesh.global_index(e, k)] = bump(r, 0.5, 0.18);
      }
    sys.A.multiply(st.V.data(), st.rhs.data());
    std::vector<cplx> F(mesh.n_dof);
    for (int i = 0; i < mesh.n_dof; ++i) F[i] = -st.rhs[i];
    for (std::size_t k = 0; k < sys.c_idx.size(); ++k)
      F[sys.c_idx[k]] -= sys.c_coeff[k] * st.V[sys.c_idx[k]];
    sys.mass_lu.solve(F.data(), 1);
    st.Vdd = F;

    double peak = 0.0;
    std::vector<cplx> zero(mesh.n_dof, cplx(0.0));
    int steps = 10000;  // t = 5: both pulse halves are long gone
    for (int n = 0; n < steps; ++n) {
      newmark_step(sys, st, zero);
      peak = std::max(peak, mode_energy(sys, st));
    }
    double final_e = mode_energy(sys, st);
    INFO("l = " << l << " energy ratio " << final_e / peak);
    CHECK(final_e <= 1e-6 * peak);
  }
}

TEST_CASE("discrete sigma convolution: alpha identity of the boundary row") {
  // the recursion-based value() must equal the alpha form used in the
  // Newmark matrix assembly, exactly up to roundoff
  int l = 4;
  double b = 1.0, c = 1.0, dt = 1e-3;
  KernelPtr sig = sigma_kernel(l, b, c);
  ConvolutionState st = make_state(*sig, dt);
  double alpha1 = 0.0;
  std::vector<cplx> a2j;
  cplx alpha2 = 0.0;
  for (std::size_t j = 0; j < sig->rate_poles.size(); ++j) {
    alpha1 += sig->weights[j].real();
    a2j.push_back(sig->weights[j] * std::exp(sig->rate_poles[j] * dt));
    alpha2 += a2j.back();
  }
  auto v_of = [](int n) { return cplx(std::sin(0.3 * n), std::cos(0.11 * n)); };
  for (int n = 0; n < 200; ++n) {
    cplx hist = 0.0;
    for (std::size_t j = 0; j < a2j.size(); ++j) hist += a2j[j] * st.accum[j];
    cplx alpha_form =
        0.5 * dt * alpha1 * v_of(n + 1) + 0.5 * dt * alpha2 * v_of(n) + hist;
    advance(st, v_of(n), v_of(n + 1));
    cplx recursive = value(*sig, st, v_of(n + 1));
    CHECK(std::abs(recursive - alpha_form) <=
          1e-13 * std::max(1.0, std::abs(recursive)));
  }
}

TEST_CASE("interface conditions at the cloak boundaries") {
  // drive the v-sequence with a synthetic smooth jump stream and verify the
  // Appendix-style matching: continuity of v and the weighted derivative
  // jump d_r v^cloak = eps d_r v^out + (eps - 1) v^out / r at R1 and R2
  DrudeParams p;
  p.omega_c = 10.0;
  p.gamma1 = p.gamma2 = 1e-3;
  Mesh1D mesh = make_mesh(10, 14, 1.0, 0.95, std::make_pair(p.R1, p.R2));
  NewmarkParams nm;
  nm.dt = 2e-4;
  ModeSystem sys = assemble(1, mesh, p, 1.0, nm);
  ModeState st = make_mode_state(sys, 0);
  double eps = p.epsilon_t();

  // infinitely smooth turn-on: a kinked drive would launch a low-regularity
  // front and destroy the pointwise spectral accuracy this test relies on
  auto h_scalar = [](double t) {
    double e = (t - 0.75) / 0.15;
    return std::exp(-e * e) * std::sin(10.0 * t);
  };
  auto data_of = [&](double t) {
    double d = 1e-4;
    cplx hdd((h_scalar(t + d) - 2.0 * h_scalar(t) + h_scalar(t - d)) / (d * d));
    return JumpData{cplx(h_scalar(t), 0.0), cplx(0.4 * h_scalar(t), 0.0), hdd};
  };

  initial_conditions(sys, st, data_of(0.0), cplx(0.0));
  std::vector<cplx> F(mesh.n_dof);
  double T = 1.5;
  int steps = static_cast<int>(std::round(T / nm.dt));
  for (int n = 0; n < steps; ++n) {
    lift_and_rhs(sys, data_of((n + 1) * nm.dt), F);
    drude_load(sys, st, F);
    newmark_step(sys, st, F);
    advance_drude(sys, st);
  }

  for (double R : {p.R1, p.R2}) {
    int e_right = mesh.element_of(R + 1e-12);
    int e_left = e_right - 1;
    cplx v_out, dv_out, v_cl, dv_cl;
    if (R == p.R1) {
      eval_on_element(mesh, st.V, e_left, R, &v_out, &dv_out);   // vacuum side
      eval_on_element(mesh, st.V, e_right, R, &v_cl, &dv_cl);    // cloak side
    } else {
      eval_on_element(mesh, st.V, e_left, R, &v_cl, &dv_cl);
      eval_on_element(mesh, st.V, e_right, R, &v_out, &dv_out);
    }
    // continuity is built into the C0 basis
    CHECK(std::abs(v_out - v_cl) <= 1e-13 * std::max(1.0, std::abs(v_out)));
    cplx lhs = dv_cl;
    cplx rhs = eps * dv_out + (eps - 1.0) * v_out / R;
    double scale = std::abs(lhs) + std::abs(rhs);
    INFO("R = " << R << " lhs " << std::abs(lhs) << " rhs " << std::abs(rhs));
    CHECK(std::abs(lhs - rhs) <= 1e-6 * scale);
  }
}

TEST_CASE("jump recovery across R3 with non-unit b") {
  // with lifting, v = v~ - h (b-r)/(b-R3) on (R3, b) must jump by exactly h
  // at R3; b = 2 makes this sensitive to the lift source coefficients
  Mesh1D mesh = make_mesh(8, 12, 2.0, 1.8, std::nullopt);
  NewmarkParams nm;
  nm.dt = 1e-3;
  ModeSystem sys = assemble(1, mesh, std::nullopt, 1.0, nm);
  ModeState st = make_mode_state(sys, 0);
  auto h_scalar = [](double t) {
    return (1.0 - std::exp(-8.0 * t)) * std::sin(4.0 * t);
  };
  auto data_of = [&](double t) {
    double d = 1e-4;
    cplx hdd((h_scalar(t + d) - 2 * h_scalar(t) + h_scalar(t - d)) / (d * d));
    return JumpData{cplx(h_scalar(t)), cplx(0.25 * h_scalar(t)), hdd};
  };
  initial_conditions(sys, st, data_of(0.0), cplx(0.0));
  std::vector<cplx> F(mesh.n_dof);
  double T = 3.0;
  int steps = static_cast<int>(std::round(T / nm.dt));
  for (int n = 0; n < steps; ++n) {
    lift_and_rhs(sys, data_of((n + 1) * nm.dt), F);
    newmark_step(sys, st, F);
  }
  // un-lift and compare the jump
  int e_right = mesh.element_of(mesh.R3 + 1e-12);
  cplx v2, d2, vt3, d3;
  eval_on_element(mesh, st.V, e_right - 1, mesh.R3, &v2, &d2);
  eval_on_element(mesh, st.V, e_right, mesh.R3, &vt3, &d3);
  cplx h_now = cplx(h_scalar(T));
  cplx v3 = vt3 - h_now;  // shape = 1 at R3
  CHECK(std::abs((v2 - v3) - h_now) <= 1e-6 * std::max(1.0, std::abs(h_now)));
}
