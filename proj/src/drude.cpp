#include "drude.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tdnrbc {

void DrudeParams::validate() const {
  if (!(0.0 < R1 && R1 < R2))
    throw std::invalid_argument("DrudeParams: need 0 < R1 < R2");
  if (gamma1 == 0.0 || gamma2 == 0.0)
    throw std::invalid_argument("DrudeParams: collision frequencies must be nonzero");
  if (!(omega_c > 0.0))
    throw std::invalid_argument("DrudeParams: omega_c must be positive");
}

double epsilon_r(const DrudeParams& params, double r) {
  if (r < params.R1 || r > params.R2)
    throw std::domain_error("epsilon_r: r outside the cloaking layer");
  double f = (r - params.R1) / r;
  return params.epsilon_t() * f * f;
}

void zeta_roots(const DrudeParams& params, double r, int k, cplx* zeta0,
                cplx* zeta1) {
  if (k != 1 && k != 2) throw std::invalid_argument("zeta_roots: k must be 1 or 2");
  if (r <= params.R1)
    throw std::domain_error(
        "zeta_roots: r = R1 excluded (epsilon = 0 gives Im zeta = 0 exactly)");
  double gamma = (k == 1) ? params.gamma1 : params.gamma2;
  double eps = epsilon_r(params, r);
  double omc = params.omega_c;
  // xi + i eta = omega_p^2 - gamma^2/4
  double xi = omc * omc * (1.0 - eps) - 0.25 * gamma * gamma;
  double eta = -gamma * omc * (1.0 - eps);
  double mod = std::hypot(xi, eta);
  // sqrt(mod - xi) cancels badly when |eta| << xi; use a*b = |eta|/2 instead
  double a, bb;
  if (xi >= 0.0) {
    a = std::sqrt(0.5 * (mod + xi));
    bb = 0.5 * std::abs(eta) / a;
  } else {
    bb = std::sqrt(0.5 * (mod - xi));
    a = 0.5 * std::abs(eta) / bb;
  }
  *zeta0 = cplx(-a, 0.5 * gamma + bb);
  *zeta1 = cplx(a, 0.5 * gamma - bb);
  if (!(zeta0->imag() > 0.0) || !(zeta1->imag() > 0.0))
    throw std::runtime_error(
        "zeta_roots: nonpositive imaginary part at r = " + std::to_string(r) +
        " (model violation)");
}

DrudeKernel theta_kernel(const DrudeParams& params, double r, int k) {
  DrudeKernel out;
  out.r = r;
  out.k = k;
  zeta_roots(params, r, k, &out.zeta0, &out.zeta1);
  double gamma = (k == 1) ? params.gamma1 : params.gamma2;
  cplx omega_p2 =
      params.omega_c * cplx(params.omega_c, -gamma) * (1.0 - epsilon_r(params, r));
  cplx diff = out.zeta0 - out.zeta1;
  if (std::abs(diff) < 1e-10 * std::abs(out.zeta0))
    throw std::runtime_error("theta_kernel: confluent roots at r = " +
                             std::to_string(r));
  out.weight = cplx(0.0, 1.0) * omega_p2 / diff;
  out.kernel.l = 0;
  out.kernel.rate_poles = {cplx(0.0, 1.0) * out.zeta0,
                           cplx(0.0, 1.0) * out.zeta1};
  out.kernel.weights = {out.weight, -out.weight};
  out.kernel.delta_coeff = 0.0;
  return out;
}

}  // namespace tdnrbc
