#include "vsh.hpp"

#include <cmath>
#include <stdexcept>

namespace tdnrbc {

namespace {

// Orthonormal-on-the-sphere normalization: Y_l^m = pbar_lm(theta) e^{im phi}
// with <Y_l^m, Y_l'^m'>_S = delta.  pbar carries the 1/sqrt(2 pi) factor and
// the Condon-Shortley phase; rows for m >= 0 only, negative m by conjugation
// Y_l^{-m} = (-1)^m conj(Y_l^m).
double pbar_start() { return 1.0 / std::sqrt(4.0 * kPi); }

// One upward l-ladder at fixed m and theta; emit(l, p, dp_dtheta).
template <typename F>
void plm_ladder(int m, int L, double theta, F&& emit) {
  double x = std::cos(theta);
  double s = std::sin(theta);
  // seed pbar_mm
  double pmm = pbar_start();
  for (int k = 1; k <= m; ++k)
    pmm *= -std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * s;
  double dmm = m == 0 ? 0.0 : m * (x / s) * pmm;
  emit(m, pmm, dmm);
  if (m == L) return;
  double pprev = pmm;
  double pcur = std::sqrt(2.0 * m + 3.0) * x * pmm;
  double dcur = (( m + 1.0) * x * pcur -
                 std::sqrt((2.0 * m + 3.0) / (2.0 * m + 1.0) *
                           ((m + 1.0) * (m + 1.0) - m * m)) *
                     pprev) /
                s;
  emit(m + 1, pcur, dcur);
  for (int l = m + 2; l <= L; ++l) {
    double a = std::sqrt((4.0 * l * l - 1.0) /
                         (static_cast<double>(l) * l - static_cast<double>(m) * m));
    double b = std::sqrt((2.0 * l + 1.0) / (2.0 * l - 3.0) *
                         ((l - 1.0) * (l - 1.0) - static_cast<double>(m) * m) /
                         (static_cast<double>(l) * l - static_cast<double>(m) * m));
    double pnext = a * x * pcur - b * pprev;
    pprev = pcur;
    pcur = pnext;
    double dnext =
        (l * x * pcur - std::sqrt((2.0 * l + 1.0) / (2.0 * l - 1.0) *
                                  (static_cast<double>(l) * l -
                                   static_cast<double>(m) * m)) *
                            pprev) /
        s;
    emit(l, pcur, dnext);
  }
}

inline double cs_sign(int m) { return (m < 0 && (m & 1)) ? -1.0 : 1.0; }

}  // namespace

SphereGrid make_sphere_grid(int n_theta, int n_phi, double radius) {
  if (n_theta < 1 || n_phi < 2)
    throw std::invalid_argument("make_sphere_grid: grid too small");
  SphereGrid g;
  g.n_theta = n_theta;
  g.n_phi = n_phi;
  g.radius = radius;
  QuadRule rule = gauss_legendre(n_theta);
  g.theta.resize(n_theta);
  g.w_theta.resize(n_theta);
  for (int q = 0; q < n_theta; ++q) {
    // descending in cos(theta): theta ascending in (0, pi)
    g.theta[q] = std::acos(rule.x[n_theta - 1 - q]);
    g.w_theta[q] = rule.w[n_theta - 1 - q];
  }
  g.phi.resize(n_phi);
  for (int p = 0; p < n_phi; ++p) g.phi[p] = 2.0 * kPi * p / n_phi;
  return g;
}

VshBasis::VshBasis(const SphereGrid& grid, int L) : L_(L), grid_(grid) {
  if (grid.max_degree() < L)
    throw std::invalid_argument(
        "VshBasis: grid resolution insufficient for requested degree");
  std::size_t rows = static_cast<std::size_t>(L + 1) * (L + 2) / 2;
  p_.assign(rows, std::vector<double>(grid.n_theta));
  dp_.assign(rows, std::vector<double>(grid.n_theta));
  for (int q = 0; q < grid.n_theta; ++q) {
    for (int m = 0; m <= L; ++m) {
      plm_ladder(m, L, grid.theta[q], [&](int l, double p, double dp) {
        p_[tab_idx(l, m)][q] = p;
        dp_[tab_idx(l, m)][q] = dp;
      });
    }
  }
}

namespace {

// phi-direction DFT: hat_X[m + L][q] = (2 pi / n_phi) sum_p X(q, p) e^{-im phi_p}
std::vector<std::vector<cplx>> phi_dft(const SphereGrid& g,
                                       const std::vector<cplx>& samples,
                                       int L) {
  std::vector<std::vector<cplx>> hat(2 * L + 1,
                                     std::vector<cplx>(g.n_theta, cplx(0.0)));
  double scale = 2.0 * kPi / g.n_phi;
  for (int m = -L; m <= L; ++m) {
    cplx step = std::exp(cplx(0.0, -m * 2.0 * kPi / g.n_phi));
    for (int q = 0; q < g.n_theta; ++q) {
      cplx acc = 0.0;
      cplx ph = 1.0;
      const cplx* row = samples.data() + g.index(q, 0);
      for (int p = 0; p < g.n_phi; ++p) {
        acc += row[p] * ph;
        ph *= step;
      }
      hat[m + L][q] = scale * acc;
    }
  }
  return hat;
}

}  // namespace

VshTriple VshBasis::forward(const SphereField& f) const {
  const SphereGrid& g = grid_;
  auto fr = phi_dft(g, f.r, L_);
  auto ft = phi_dft(g, f.t, L_);
  auto fp = phi_dft(g, f.p, L_);

  VshTriple out;
  out.L = L_;
  out.r.assign(VshCoeffs::packed_size(L_), cplx(0.0));
  out.psi.assign(VshCoeffs::packed_size(L_), cplx(0.0));
  out.phi.assign(VshCoeffs::packed_size(L_), cplx(0.0));

  // monopole: <f, Y_0^0 e_r>
  cplx acc00 = 0.0;
  for (int q = 0; q < g.n_theta; ++q)
    acc00 += g.w_theta[q] * p_[tab_idx(0, 0)][q] * fr[L_][q];
  out.u00 = acc00;

  for (int l = 1; l <= L_; ++l) {
    double beta = static_cast<double>(l) * (l + 1);
    for (int m = -l; m <= l; ++m) {
      int ma = std::abs(m);
      double sign = cs_sign(m);
      const std::vector<double>& pl = p_[tab_idx(l, ma)];
      const std::vector<double>& dl = dp_[tab_idx(l, ma)];
      cplx cy = 0.0, cpsi = 0.0, cphi = 0.0;
      const std::vector<cplx>& frm = fr[m + L_];
      const std::vector<cplx>& ftm = ft[m + L_];
      const std::vector<cplx>& fpm = fp[m + L_];
      for (int q = 0; q < g.n_theta; ++q) {
        double w = g.w_theta[q];
        double rho = sign * pl[q];
        double drho = sign * dl[q];
        double inv_s = 1.0 / std::sin(grid_.theta[q]);
        cplx im_rho(0.0, m * rho * inv_s);
        cy += w * rho * frm[q];
        // <f, Psi> row: f_t conj(d_theta Y) + f_p conj(i m Y / sin)
        cpsi += w * (drho * ftm[q] - im_rho * fpm[q]);
        // <f, Phi> row: f_t conj(i m Y / sin) - f_p conj(d_theta Y)
        cphi += w * (-im_rho * ftm[q] - drho * fpm[q]);
      }
      std::size_t k = VshCoeffs::idx(l, m);
      out.r[k] = cy;
      out.psi[k] = cpsi / beta;
      out.phi[k] = cphi / beta;
    }
  }
  return out;
}

VshCoeffs VshBasis::solenoidal_coeffs(const SphereField& f) const {
  VshTriple t = forward(f);
  VshCoeffs c;
  c.L = L_;
  c.u00 = t.u00;
  c.u.assign(VshCoeffs::packed_size(L_), cplx(0.0));
  c.v.assign(VshCoeffs::packed_size(L_), cplx(0.0));
  for (int l = 1; l <= L_; ++l) {
    for (int m = -l; m <= l; ++m) {
      std::size_t k = VshCoeffs::idx(l, m);
      c.u[k] = t.phi[k];
      c.v[k] = grid_.radius * t.r[k] / (static_cast<double>(l) * (l + 1));
    }
  }
  return c;
}

SphereField VshBasis::synthesize(const VshTriple& t) const {
  const SphereGrid& g = grid_;
  SphereField f(g.size());
  // per-m theta profiles, then the phi phases
  for (int q = 0; q < g.n_theta; ++q) {
    double inv_s = 1.0 / std::sin(g.theta[q]);
    std::vector<cplx> ar(2 * L_ + 1, cplx(0.0)), at(2 * L_ + 1, cplx(0.0)),
        ap(2 * L_ + 1, cplx(0.0));
    ar[L_] += t.u00 * p_[tab_idx(0, 0)][q];
    for (int l = 1; l <= L_; ++l) {
      for (int m = -l; m <= l; ++m) {
        int ma = std::abs(m);
        double rho = cs_sign(m) * p_[tab_idx(l, ma)][q];
        double drho = cs_sign(m) * dp_[tab_idx(l, ma)][q];
        cplx im_rho(0.0, m * rho * inv_s);
        std::size_t k = VshCoeffs::idx(l, m);
        ar[m + L_] += t.r[k] * rho;
        at[m + L_] += t.psi[k] * drho + t.phi[k] * im_rho;
        ap[m + L_] += t.psi[k] * im_rho - t.phi[k] * drho;
      }
    }
    for (int p = 0; p < g.n_phi; ++p) {
      cplx accr = 0.0, acct = 0.0, accp = 0.0;
      for (int m = -L_; m <= L_; ++m) {
        cplx ph = std::exp(cplx(0.0, m * g.phi[p]));
        accr += ar[m + L_] * ph;
        acct += at[m + L_] * ph;
        accp += ap[m + L_] * ph;
      }
      std::size_t k = g.index(q, p);
      f.r[k] = accr;
      f.t[k] = acct;
      f.p[k] = accp;
    }
  }
  return f;
}

cplx sph_harmonic(int l, int m, double theta, double phi) {
  int ma = std::abs(m);
  if (ma > l) throw std::invalid_argument("sph_harmonic: |m| > l");
  double val = 0.0;
  plm_ladder(ma, l, theta, [&](int ll, double p, double) {
    if (ll == l) val = p;
  });
  return cs_sign(m) * val * std::exp(cplx(0.0, m * phi));
}

VshPointBasis vsh_basis(int l, int m, double theta, double phi) {
  if (theta <= 0.0 || theta >= kPi)
    throw std::domain_error("vsh_basis: theta must lie strictly in (0, pi)");
  int ma = std::abs(m);
  if (ma > l || l < 0) throw std::invalid_argument("vsh_basis: need |m| <= l");
  double pv = 0.0, dv = 0.0;
  plm_ladder(ma, l, theta, [&](int ll, double p, double dp) {
    if (ll == l) {
      pv = p;
      dv = dp;
    }
  });
  cplx ph = cs_sign(m) * std::exp(cplx(0.0, m * phi));
  cplx y = pv * ph;
  cplx dy = dv * ph;
  cplx imy_s = cplx(0.0, m) * y / std::sin(theta);
  VshPointBasis out{};
  out.y[0] = y;
  out.psi[1] = dy;
  out.psi[2] = imy_s;
  out.phi[1] = imy_s;
  out.phi[2] = -dy;
  return out;
}

void reconstruct(const RadialModeValues& modes, double r, double theta,
                 double phi, cplx out[3]) {
  // local-frame components
  cplx fr = 0.0, ft = 0.0, fp = 0.0;
  double inv_s = 1.0 / std::sin(theta);
  int L = modes.L;
  fr += modes.u00 / std::sqrt(4.0 * kPi);
  for (int ma = 0; ma <= L; ++ma) {
    plm_ladder(ma, L, theta, [&](int l, double p, double dp) {
      if (l < 1) return;
      double beta = static_cast<double>(l) * (l + 1);
      for (int sgn : {1, -1}) {
        if (ma == 0 && sgn < 0) continue;
        int m = sgn * ma;
        cplx ph = cs_sign(m) * std::exp(cplx(0.0, m * phi));
        cplx y = p * ph;
        cplx dy = dp * ph;
        cplx imy_s = cplx(0.0, m) * y * inv_s;
        std::size_t k = VshCoeffs::idx(l, m);
        cplx psi_coef = modes.dv[k] + modes.v[k] / r;  // d_r v + v / r
        fr += (beta / r) * modes.v[k] * y;
        ft += psi_coef * dy + modes.u[k] * imy_s;
        fp += psi_coef * imy_s - modes.u[k] * dy;
      }
    });
  }
  // rotate (e_r, e_theta, e_phi) -> Cartesian
  double st = std::sin(theta), ct = std::cos(theta);
  double cp = std::cos(phi), sp = std::sin(phi);
  out[0] = fr * (st * cp) + ft * (ct * cp) + fp * (-sp);
  out[1] = fr * (st * sp) + ft * (ct * sp) + fp * (cp);
  out[2] = fr * ct + ft * (-st);
}

}  // namespace tdnrbc
