#pragma once

#include "nrbk.hpp"
#include "util.hpp"

namespace tdnrbc {

// Cloak material parameters.  epsilon_t is the constant transverse entry
// R2/(R2-R1) of the ideal cloak tensor; the radial entry epsilon_r(r) is
// mapped through the Drude model with plasma frequency
// omega_p^2(r) = omega_c (omega_c - i gamma) (1 - epsilon_r(r)).
struct DrudeParams {
  double omega_c = 40.0;
  double gamma1 = 1e-3;
  double gamma2 = 1e-3;
  double R1 = 0.15;
  double R2 = 0.35;

  double epsilon_t() const { return R2 / (R2 - R1); }
  void validate() const;
};

// Two-pole constitutive kernel
//   theta_k(r, t) = i omega_p^2 / (zeta0 - zeta1) (e^{i zeta0 t} - e^{i zeta1 t})
// packaged as an ExpSumKernel with poles {i zeta0, i zeta1} and opposite
// weights (so theta_k(r, 0) = 0 structurally).
struct DrudeKernel {
  double r = 0.0;
  int k = 1;
  cplx zeta0, zeta1;
  cplx weight;  // i omega_p^2 / (zeta0 - zeta1)
  ExpSumKernel kernel;
};

// Radial profile of the ideal cloak: (R2/(R2-R1)) ((r-R1)/r)^2.
double epsilon_r(const DrudeParams& params, double r);

// Roots of z^2 - i gamma_k z - omega_p^2(r) = 0 with Im > 0 certified.
void zeta_roots(const DrudeParams& params, double r, int k, cplx* zeta0,
                cplx* zeta1);

DrudeKernel theta_kernel(const DrudeParams& params, double r, int k);

}  // namespace tdnrbc
