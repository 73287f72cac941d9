#include "incident.hpp"

#include <cmath>
#include <stdexcept>

namespace tdnrbc {

double IncidentWave::value(double x, double t) const {
  if (type == Type::Monochromatic) {
    return (1.0 - std::exp(-10.0 * t)) * std::cos(k * x - omega * t);
  }
  double s = x - t;
  double g = std::exp(-(s + t_c) * (s + t_c) / q);
  return std::cos(k * s) * g;
}

double IncidentWave::dx(double x, double t) const {
  if (type == Type::Monochromatic) {
    return -k * (1.0 - std::exp(-10.0 * t)) * std::sin(k * x - omega * t);
  }
  double s = x - t;
  double g = std::exp(-(s + t_c) * (s + t_c) / q);
  double gp = -2.0 * (s + t_c) / q * g;
  return -k * std::sin(k * s) * g + std::cos(k * s) * gp;
}

double IncidentWave::dt(double x, double t) const {
  if (type == Type::Monochromatic) {
    double e = std::exp(-10.0 * t);
    return 10.0 * e * std::cos(k * x - omega * t) +
           (1.0 - e) * omega * std::sin(k * x - omega * t);
  }
  return -dx(x, t);  // pulse depends on x - t only
}

double IncidentWave::dtt(double x, double t) const {
  if (type == Type::Monochromatic) {
    double e = std::exp(-10.0 * t);
    double c = std::cos(k * x - omega * t), s = std::sin(k * x - omega * t);
    return -100.0 * e * c + 20.0 * e * omega * s - (1.0 - e) * omega * omega * c;
  }
  double s = x - t;
  double g = std::exp(-(s + t_c) * (s + t_c) / q);
  double gp = -2.0 * (s + t_c) / q * g;
  double gpp = (-2.0 / q + 4.0 * (s + t_c) * (s + t_c) / (q * q)) * g;
  return -k * k * std::cos(k * s) * g - 2.0 * k * std::sin(k * s) * gp +
         std::cos(k * s) * gpp;
}

IncidentExpander::IncidentExpander(const IncidentWave& wave, double R3, int L)
    : wave_(wave), R3_(R3), L_(L) {
  grid_ = make_sphere_grid(L + 1, 2 * L + 2, R3);
  basis_ = std::make_unique<VshBasis>(grid_, L);
  x_.resize(grid_.size());
  cos_theta_.resize(grid_.size());
  for (int qi = 0; qi < grid_.n_theta; ++qi)
    for (int p = 0; p < grid_.n_phi; ++p) {
      std::size_t idx = grid_.index(qi, p);
      x_[idx] = R3 * std::sin(grid_.theta[qi]) * std::cos(grid_.phi[p]);
      cos_theta_[idx] = std::cos(grid_.theta[qi]);
    }
}

void IncidentExpander::project(const std::vector<double>& w,
                               std::vector<cplx>& h_like,
                               std::vector<cplx>& g_like) const {
  const SphereGrid& g = grid_;
  const int L = L_;
  const double A = wave_.amplitude;
  const double beta0 = 2.0 * kPi / g.n_phi;
  h_like.assign(VshCoeffs::packed_size(L), cplx(0.0));
  g_like.assign(VshCoeffs::packed_size(L), cplx(0.0));

  // phase table e^{-i 2 pi j / n_phi}
  std::vector<cplx> phase(g.n_phi);
  for (int j = 0; j < g.n_phi; ++j)
    phase[j] = std::exp(cplx(0.0, -2.0 * kPi * j / g.n_phi));

  // per-m phi transforms of w and w cos(theta); real input gives the
  // negative-m coefficients by conjugation
  std::vector<cplx> hat_w(g.n_theta), hat_wc(g.n_theta);
  for (int m = 0; m <= L; ++m) {
    for (int qi = 0; qi < g.n_theta; ++qi) {
      cplx aw = 0.0, awc = 0.0;
      const double ct = std::cos(g.theta[qi]);
      const double* row = w.data() + g.index(qi, 0);
      int idx = 0;
      for (int p = 0; p < g.n_phi; ++p) {
        cplx ph = phase[idx];
        aw += row[p] * ph;
        awc += row[p] * ct * ph;
        idx += m;
        if (idx >= g.n_phi) idx -= g.n_phi;
      }
      hat_w[qi] = beta0 * aw;
      hat_wc[qi] = beta0 * awc;
    }
    for (int l = std::max(1, m); l <= L; ++l) {
      double beta_l = static_cast<double>(l) * (l + 1);
      cplx tc = 0.0, tp = 0.0;
      for (int qi = 0; qi < g.n_theta; ++qi) {
        double wp = g.w_theta[qi] * basis_->plm(l, m, qi);
        tc += wp * hat_wc[qi];
        tp += wp * hat_w[qi];
      }
      // h-type: (R3 A / beta) <., Y>;  g-type: (i m A / beta) <., Y>
      cplx hval = (R3_ * A / beta_l) * tc;
      cplx gval = cplx(0.0, m * A / beta_l) * tp;
      h_like[VshCoeffs::idx(l, m)] = hval;
      g_like[VshCoeffs::idx(l, m)] = gval;
      if (m > 0) {
        double sgn = (m % 2 == 0) ? 1.0 : -1.0;
        h_like[VshCoeffs::idx(l, -m)] = sgn * std::conj(hval);
        g_like[VshCoeffs::idx(l, -m)] = sgn * std::conj(gval);
      }
    }
  }
}

void IncidentExpander::at(double t, IncidentStreams& out) const {
  const std::size_t n = grid_.size();
  std::vector<double> f(n), fr(n), ftt(n);
  for (int qi = 0; qi < grid_.n_theta; ++qi)
    for (int p = 0; p < grid_.n_phi; ++p) {
      std::size_t idx = grid_.index(qi, p);
      double x = x_[idx];
      double xr = x / R3_;  // dx/dr at fixed angles
      f[idx] = wave_.value(x, t);
      fr[idx] = wave_.dx(x, t) * xr;
      ftt[idx] = wave_.dtt(x, t);
    }
  project(f, out.h, out.g);
  project(fr, out.dr_h, out.dr_g);
  project(ftt, out.dtt_h, out.dtt_g);
  // d_r of the curl coefficient picks up the extra h / r term:
  // v = (r / beta) <D, Y>  =>  d_r v = v / r + (r / beta) <d_r D, Y>
  for (std::size_t k = 0; k < out.h.size(); ++k)
    out.dr_h[k] += out.h[k] / R3_;
}

void IncidentExpander::time_derivative(double t, std::vector<cplx>& dt_g,
                                       std::vector<cplx>& dt_h) const {
  const std::size_t n = grid_.size();
  std::vector<double> ft(n);
  for (int qi = 0; qi < grid_.n_theta; ++qi)
    for (int p = 0; p < grid_.n_phi; ++p) {
      std::size_t idx = grid_.index(qi, p);
      ft[idx] = wave_.dt(x_[idx], t);
    }
  project(ft, dt_h, dt_g);
}

}  // namespace tdnrbc
