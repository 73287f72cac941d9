#include "nrbk.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace tdnrbc {

namespace {

KernelPtr cache_lookup(int l, double b, double c, int which,
                       KernelPtr (*build)(int, double, double)) {
  static std::map<std::tuple<int, double, double, int>, KernelPtr> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_tuple(l, b, c, which);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build(l, b, c)).first;
  return it->second;
}

void require_params(int l, double b, double c, const char* who) {
  if (l < 1) throw std::invalid_argument(std::string(who) + ": l must be >= 1");
  if (!(b > 0.0) || !(c > 0.0))
    throw std::invalid_argument(std::string(who) + ": need b > 0 and c > 0");
}

KernelPtr build_sigma(int l, double b, double c) {
  const PoleSet& zs = k_zeros(l);
  auto k = std::make_shared<ExpSumKernel>();
  k->l = l;
  k->b = b;
  k->c = c;
  double s = c / b;
  for (const cplx& z : zs.poles) {
    k->rate_poles.push_back(s * z);
    k->weights.push_back(s * z);
  }
  k->delta_coeff = 0.0;
  return k;
}

KernelPtr build_rho(int l, double b, double c) {
  const PoleSet& zs = combined_zeros(l);
  auto k = std::make_shared<ExpSumKernel>();
  k->l = l;
  k->b = b;
  k->c = c;
  double s = c / b;
  double beta = static_cast<double>(l) * (l + 1);
  cplx delta = 0.0;
  for (const cplx& z : zs.poles) {
    cplx den = beta + z * z;
    if (std::abs(den) < 1e-10)
      throw std::runtime_error("rho_kernel: weight denominator nearly singular at l = " +
                               std::to_string(l));
    k->rate_poles.push_back(s * z);
    k->weights.push_back(s * z * z * z / den);
    delta += z * z / den;
  }
  k->delta_coeff = delta;
  return k;
}

KernelPtr build_omega(int l, double b, double c) {
  const PoleSet& zs = k_zeros(l);
  auto k = std::make_shared<ExpSumKernel>();
  k->l = l;
  k->b = b;
  k->c = c;
  double s = c / b;
  cplx delta = 0.0;
  for (const cplx& z : zs.poles) {
    k->rate_poles.push_back(s * z);
    k->weights.push_back(s * z * z);
    delta += z;
  }
  k->delta_coeff = delta;
  return k;
}

// Finite mixture of complex exponentials sum_m g_m e^{s_m t}; closed under
// the convolutions appearing in the cross-check.
struct ExpMix {
  std::vector<cplx> amp;
  std::vector<cplx> expo;

  void add(cplx a, cplx s) {
    for (std::size_t m = 0; m < expo.size(); ++m) {
      if (expo[m] == s) {
        amp[m] += a;
        return;
      }
    }
    amp.push_back(a);
    expo.push_back(s);
  }
  cplx at(double t) const {
    cplx acc = 0.0;
    for (std::size_t m = 0; m < amp.size(); ++m)
      acc += amp[m] * std::exp(expo[m] * t);
    return acc;
  }
};

// (e^{pt} * f)(t) for f given as a mixture: each term contributes
// (e^{s t} - e^{p t}) / (s - p).
ExpMix conv_exp(cplx p, const ExpMix& f) {
  ExpMix out;
  for (std::size_t m = 0; m < f.amp.size(); ++m) {
    cplx den = f.expo[m] - p;
    out.add(f.amp[m] / den, f.expo[m]);
    out.add(-f.amp[m] / den, p);
  }
  return out;
}

void accumulate(ExpMix& into, const ExpMix& f, cplx a = 1.0) {
  for (std::size_t m = 0; m < f.amp.size(); ++m) into.add(a * f.amp[m], f.expo[m]);
}

}  // namespace

KernelPtr sigma_kernel(int l, double b, double c) {
  require_params(l, b, c, "sigma_kernel");
  return cache_lookup(l, b, c, 0, build_sigma);
}

KernelPtr rho_kernel(int l, double b, double c) {
  require_params(l, b, c, "rho_kernel");
  return cache_lookup(l, b, c, 1, build_rho);
}

KernelPtr omega_kernel(int l, double b, double c) {
  require_params(l, b, c, "omega_kernel");
  return cache_lookup(l, b, c, 2, build_omega);
}

std::vector<double> kernel_crosscheck(int l, double b, double c,
                                      const std::vector<double>& times) {
  require_params(l, b, c, "kernel_crosscheck");
  const PoleSet& kz = k_zeros(l);
  KernelPtr rho = rho_kernel(l, b, c);
  const double s = c / b;

  // phi(t) = sin^6(8t) expanded into complex exponentials e^{i 8(2j-6) t}
  ExpMix phi;
  const double binom6[7] = {1, 6, 15, 20, 15, 6, 1};
  for (int j = 0; j <= 6; ++j) {
    double sign = (j % 2 == 0) ? -1.0 : 1.0;
    phi.add(cplx(sign * binom6[j] / 64.0, 0.0), cplx(0.0, 8.0 * (2 * j - 6)));
  }
  ExpMix dphi;  // phi'
  for (std::size_t m = 0; m < phi.amp.size(); ++m)
    dphi.add(phi.amp[m] * phi.expo[m], phi.expo[m]);

  // psi_l = sigma_l * phi - (b/c) phi'
  ExpMix psi;
  for (const cplx& z : kz.poles) accumulate(psi, conv_exp(s * z, phi), s * z);
  accumulate(psi, dphi, cplx(-b / c, 0.0));

  // route 1: rho_l * psi_l through the rho kernel
  ExpMix f1;
  for (std::size_t j = 0; j < rho->rate_poles.size(); ++j)
    accumulate(f1, conv_exp(rho->rate_poles[j], psi), rho->weights[j]);
  accumulate(f1, psi, rho->delta_coeff);

  // route 2: the same convolution using only the sigma poles:
  //   (c/b) sum_j z_j^2 (e^{(c/b) z_j t} * phi) + phi(t) sum_j z_j
  ExpMix f2;
  cplx zsum = 0.0;
  for (const cplx& z : kz.poles) {
    accumulate(f2, conv_exp(s * z, phi), s * z * z);
    zsum += z;
  }
  accumulate(f2, phi, zsum);

  std::vector<double> errs;
  errs.reserve(times.size());
  for (double t : times) {
    cplx a = f1.at(t);
    cplx ref = f2.at(t);
    double denom = std::abs(ref);
    if (denom < 1e-300)
      throw std::domain_error("kernel_crosscheck: reference value underflow");
    errs.push_back(std::abs(a - ref) / denom);
  }
  return errs;
}

}  // namespace tdnrbc
