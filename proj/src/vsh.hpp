#pragma once

#include <memory>
#include <vector>

#include "quadrature.hpp"
#include "util.hpp"

namespace tdnrbc {

// Gauss-Legendre colatitude x uniform longitude grid supporting exact
// quadrature of degree-L spherical harmonics: n_theta >= L+1, n_phi >= 2L+2.
struct SphereGrid {
  int n_theta = 0;
  int n_phi = 0;
  double radius = 1.0;
  std::vector<double> theta;     // colatitudes in (0, pi)
  std::vector<double> w_theta;   // Legendre weights in cos(theta), sum to 2
  std::vector<double> phi;       // uniform in [0, 2pi)

  int max_degree() const { return std::min(n_theta - 1, (n_phi - 2) / 2); }
  std::size_t size() const {
    return static_cast<std::size_t>(n_theta) * n_phi;
  }
  std::size_t index(int q, int p) const {
    return static_cast<std::size_t>(q) * n_phi + p;
  }
};

SphereGrid make_sphere_grid(int n_theta, int n_phi, double radius);

// 3-component complex field sampled on a SphereGrid, components in the
// local frame (e_r, e_theta, e_phi), flattened row-major over (theta, phi).
struct SphereField {
  std::vector<cplx> r, t, p;
  explicit SphereField(std::size_t n) : r(n), t(n), p(n) {}
};

// Coefficients of the divergence-free representation
//   u = u00 Y_0^0 e_r + sum_{l>=1,|m|<=l} { u_lm Phi_l^m + curl(v_lm Phi_l^m) }.
struct VshCoeffs {
  int L = 0;
  cplx u00 = 0.0;
  std::vector<cplx> u, v;  // packed over (l, m), l in [1, L], m in [-l, l]

  static std::size_t packed_size(int L) {
    return static_cast<std::size_t>(L) * (L + 2);
  }
  // index of (l, m) in the packed layout; l >= 1
  static std::size_t idx(int l, int m) {
    return static_cast<std::size_t>(l) * l - 1 + (m + l);
  }
};

// Triple of coefficient families for a general (not necessarily solenoidal)
// tangential+radial expansion: u^r_lm, u^(1)_lm (Psi), u^(2)_lm (Phi).
struct VshTriple {
  int L = 0;
  cplx u00 = 0.0;
  std::vector<cplx> r, psi, phi;
};

// Precomputed normalized associated Legendre tables on a grid's colatitudes
// plus derivative tables; shared read-only between transforms.
class VshBasis {
 public:
  VshBasis(const SphereGrid& grid, int L);

  int L() const { return L_; }
  const SphereGrid& grid() const { return grid_; }

  // P-bar_{lm}(cos theta_q) for m >= 0 and its theta-derivative
  double plm(int l, int m, int q) const { return p_[tab_idx(l, m)][q]; }
  double dplm(int l, int m, int q) const { return dp_[tab_idx(l, m)][q]; }

  // Forward scalar-like projections of a vector field (Y / Psi / Phi rows).
  VshTriple forward(const SphereField& f) const;

  // Solenoidal coefficients at the grid radius:
  //   u_lm = beta^-1 <f, Phi_lm>,  v_lm = (r/beta) <f, Y_lm>.
  VshCoeffs solenoidal_coeffs(const SphereField& f) const;

  // Evaluate the triple expansion back onto the grid.
  SphereField synthesize(const VshTriple& t) const;

 private:
  std::size_t tab_idx(int l, int m) const {
    return static_cast<std::size_t>(l) * (l + 1) / 2 + m;
  }
  int L_;
  SphereGrid grid_;
  std::vector<std::vector<double>> p_, dp_;
};

// Y_l^m and the vector basis (Y = Y e_r, Psi = grad_S Y, Phi = Psi x e_r)
// at a single point, components in the (e_r, e_theta, e_phi) frame.
struct VshPointBasis {
  cplx y[3];
  cplx psi[3];
  cplx phi[3];
};
VshPointBasis vsh_basis(int l, int m, double theta, double phi);

// Scalar Y_l^m value.
cplx sph_harmonic(int l, int m, double theta, double phi);

// Reconstruct the divergence-free field at one point from per-mode radial
// values {u_lm(r), v_lm(r), dv_lm(r)}; returns the Cartesian 3-vector.
struct RadialModeValues {
  int L = 0;
  cplx u00 = 0.0;
  std::vector<cplx> u, v, dv;  // packed as VshCoeffs
};
void reconstruct(const RadialModeValues& modes, double r, double theta,
                 double phi, cplx out[3]);

}  // namespace tdnrbc
