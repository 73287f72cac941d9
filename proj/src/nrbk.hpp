#pragma once

#include <memory>
#include <vector>

#include "specfun.hpp"
#include "util.hpp"

namespace tdnrbc {

// Temporal kernel  sum_j w_j e^{p_j t} + delta_coeff * delta(t).
// rate_poles and weights carry the physical (c/b) scaling; the delta part is
// dimensionless and acts by pointwise multiplication under convolution.
struct ExpSumKernel {
  int l = 0;
  double b = 1.0;
  double c = 1.0;
  std::vector<cplx> rate_poles;  // (c/b) z_j, Re < 0
  std::vector<cplx> weights;
  cplx delta_coeff = 0.0;

  // smooth part sum_j w_j e^{p_j t}
  cplx smooth_at(double t) const {
    cplx acc = 0.0;
    for (std::size_t j = 0; j < rate_poles.size(); ++j)
      acc += weights[j] * std::exp(rate_poles[j] * t);
    return acc;
  }
};

using KernelPtr = std::shared_ptr<const ExpSumKernel>;

// sigma_l(t) = (c/b) sum_j z_j e^{(c/b) z_j t}  over the zeros of K_{l+1/2}.
KernelPtr sigma_kernel(int l, double b, double c);

// rho_l(t) = (c/b) sum_j z~_j^3/(beta_l + z~_j^2) e^{(c/b) z~_j t}
//            + delta(t) sum_j z~_j^2/(beta_l + z~_j^2)
// over the zeros of (1/2) K_{l+1/2} + z K'_{l+1/2}.
KernelPtr rho_kernel(int l, double b, double c);

// omega_l(t) = (b/c)(sigma_l'(t) + sigma_l(0) delta(t))
//            = (c/b) sum_j z_j^2 e^{(c/b) z_j t} + delta(t) sum_j z_j.
KernelPtr omega_kernel(int l, double b, double c);

// Cross-validation of rho_l against the sigma-only route with
// phi(t) = sin^6(8t): computes (rho_l * psi_l)(t) both through rho_kernel
// and through the identity using only sigma poles, with every convolution
// in closed form, and returns the relative differences at the given times.
std::vector<double> kernel_crosscheck(int l, double b, double c,
                                      const std::vector<double>& times);

}  // namespace tdnrbc
