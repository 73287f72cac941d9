#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "convolve.hpp"
#include "drude.hpp"
#include "linband.hpp"
#include "nrbk.hpp"
#include "quadrature.hpp"
#include "util.hpp"

namespace tdnrbc {

struct NewmarkParams {
  double gamma = 0.5;
  double beta = 0.25;
  double dt = 1e-3;
  void validate() const;
};

// Interface-conforming spectral-element mesh of [0, b] with degree-N
// Lagrange basis on Gauss-Lobatto nodes per element and an (N+2)-point
// interior Gauss-Legendre rule for all weighted integrals.
struct Mesh1D {
  int E = 0;  // elements
  int N = 0;  // polynomial degree
  double b = 1.0;
  double R1 = 0.0, R2 = 0.0, R3 = 0.0;  // R1 == R2 means no cloak layer
  bool has_cloak = false;
  std::vector<double> breakpoints;  // E+1 ascending, includes interfaces

  std::vector<double> gll;    // reference element nodes, N+1
  std::vector<double> bary;   // barycentric weights on gll
  QuadRule quad;              // N+2 Gauss-Legendre points on [-1, 1]
  std::vector<double> Pq;     // basis values at quad points, (N+2) x (N+1)
  std::vector<double> Dq;     // basis derivatives (reference), same shape

  int i1 = -1, i2 = -1, i3 = -1;  // global indices of R1, R2, R3 nodes
  int n_dof = 0;                  // E N + 1; boundary DOF is n_dof - 1

  int global_index(int elem, int node) const { return elem * N + node; }
  int element_of(double r) const;
  double elem_left(int e) const { return breakpoints[e]; }
  double elem_right(int e) const { return breakpoints[e + 1]; }
  bool elem_in_cloak(int e) const;
  bool elem_in_shell(int e) const;  // inside (R3, b)

  // value / radial derivative of the expansion at radius r
  cplx eval(const std::vector<cplx>& dof, double r, cplx* deriv) const;
};

Mesh1D make_mesh(int E, int N, double b, double R3,
                 std::optional<std::pair<double, double>> cloak_radii);

// Per-node constitutive kernel table over the cloak quadrature nodes.
struct DrudeNodeTable {
  std::vector<double> qw;      // quadrature weight with element jacobian
  std::vector<cplx> theta_w;   // i omega_p^2 / (zeta0 - zeta1)
  std::vector<cplx> lam0, lam1;
};

// Immutable per-degree assembly shared by every m and both coefficient
// sequences of that degree: matrices, diagonal corrections, factorizations,
// boundary-kernel scalars and cloak tables.
struct ModeSystem {
  int l = 1;
  double c = 1.0, b = 1.0;
  const Mesh1D* mesh = nullptr;
  NewmarkParams nm;

  SymBanded M;  // mass (epsilon_t weighted inside the layer)
  SymBanded A;  // stiffness + beta_l term (1/epsilon_t weighted in layer)
  // C = A + sum of diagonal corrections below
  std::vector<int> c_idx;
  std::vector<double> c_coeff;

  double bB = 0.0;  // B = c b^2 E_NN
  KernelPtr sigma;
  double alpha1 = 0.0;        // (c/b) sum z_j
  std::vector<cplx> alpha2j;  // (c/b) z_j e^{c dt z_j / b}
  cplx alpha2 = 0.0;

  BandedLU newmark_lu;  // M + (gamma dt - alpha1 c beta dt^3/(2b)) B + beta dt^2 C
  BandedLU mass_lu;

  DrudeNodeTable drude[2];  // constitutive kernels k=1, k=2 (empty if vacuum)

  // shell lift vectors: F_lift = ddt_h * liftP + h * (liftQ + beta_l liftR)
  std::vector<double> liftP, liftQ, liftR;
  double lift_edge_R3 = 0.0;  // c^2 R3^2
  double lift_edge_b = 0.0;   // c^2 b^2 / (b - R3)
};

ModeSystem assemble(int l, const Mesh1D& mesh,
                    const std::optional<DrudeParams>& cloak, double c,
                    const NewmarkParams& nm);

// (Re)builds the factorized Newmark operator and boundary-kernel scalars
// from the current matrices; assemble() calls it, tests may too after
// constructing a system by hand.
void finalize_operator(ModeSystem& sys);

// Mutable per-(m, sequence) state.
struct ModeState {
  std::vector<cplx> V, Vd, Vdd;
  ConvolutionState nrbc;            // boundary accumulators on sigma poles
  int kdrude = 0;                   // 0: kernel theta_1, 1: theta_2
  std::vector<cplx> F0, F1;         // per-node constitutive accumulators
  std::vector<cplx> v_nodes;        // field values at cloak nodes at t_n
  std::vector<cplx> rhs, vtilde;    // scratch
  long step = 0;
};

ModeState make_mode_state(const ModeSystem& sys, int kdrude);

// Incident jump data at one time instant.
struct JumpData {
  cplx h = 0.0;
  cplx dr_h = 0.0;
  cplx ddt_h = 0.0;
};

// Load vector from the jump lifting at R3 plus an optional interior source.
void lift_and_rhs(const ModeSystem& sys, const JumpData& data,
                  std::vector<cplx>& F);

// Load vector of a radial source f2(r) over the whole interval (test use
// and manufactured solutions); adds into F.
void add_volume_source(const ModeSystem& sys,
                       const std::function<cplx(double)>& f2,
                       std::vector<cplx>& F);

// G^{n+1} from the constitutive convolution states at t_n; subtracts from F.
void drude_load(const ModeSystem& sys, const ModeState& st,
                std::vector<cplx>& F);

// Consistent initial data: V = h(0) shape, Vd = dt_h(0) shape,
// Vdd = M^{-1} (F(0) - B Vd - C V).
void initial_conditions(const ModeSystem& sys, ModeState& st,
                        const JumpData& at0, cplx dt_h0);

// After the Newmark solve produced V^{n+1}: advance the per-node
// constitutive accumulators with the trapezoidal rule.
void advance_drude(const ModeSystem& sys, ModeState& st);

// Discrete energy Vd^H M Vd + V^H A V (diagnostics and tests).
double mode_energy(const ModeSystem& sys, const ModeState& st);

}  // namespace tdnrbc
