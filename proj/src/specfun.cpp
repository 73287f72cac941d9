#include "specfun.hpp"

#include <mpfr.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace tdnrbc {

namespace {

// Coefficients c_k = (l+k)! / (2^k k! (l-k)!) of the terminating series
// k_l(z) = (pi/2) e^{-z} sum_k c_k z^{-(k+1)}, built by the stable ratio
// recurrence to avoid factorial overflow.  Double-double carries enough
// precision that the root residual certificate below is meaningful.
std::vector<dd> series_coeffs_dd(int l) {
  std::vector<dd> c(l + 1);
  c[0] = dd(1.0);
  for (int k = 0; k < l; ++k) {
    c[k + 1] = c[k] * dd(static_cast<double>(l + k + 1)) *
               dd(static_cast<double>(l - k)) / dd(2.0 * (k + 1));
  }
  return c;
}

// Numerator polynomial coefficients by ascending degree, double-double.
std::vector<dd> poly_coeffs_dd(int l, ZeroKind kind) {
  std::vector<dd> c = series_coeffs_dd(l);
  if (kind == ZeroKind::KZeros) {
    std::vector<dd> a(l + 1);
    for (int k = 0; k <= l; ++k) a[l - k] = c[k];
    return a;
  }
  // (z + l) P_l - z P_l': coefficient of z^{l+1-j} is c_j + (j-1) c_{j-1}
  std::vector<dd> a(l + 2);
  for (int j = 0; j <= l + 1; ++j) {
    dd v(0.0);
    if (j <= l) v = v + c[j];
    if (j >= 1 && j - 1 <= l) v = v + dd(static_cast<double>(j - 1)) * c[j - 1];
    a[l + 1 - j] = v;
  }
  return a;
}

void horner_ddc(const std::vector<dd>& coeffs, cplx z, cplx* p, cplx* dp) {
  int n = static_cast<int>(coeffs.size()) - 1;
  ddc acc{coeffs[n], dd(0.0)};
  ddc zz(z);
  cplx dacc = 0.0;
  for (int j = n - 1; j >= 0; --j) {
    dacc = dacc * z + acc.value();
    acc = acc * zz + ddc{coeffs[j], dd(0.0)};
  }
  *p = acc.value();
  *dp = dacc;
}

}  // namespace

BesselPoly bessel_poly(int l, ZeroKind kind) {
  if (l < 0) throw std::invalid_argument("bessel_poly: l must be >= 0");
  std::vector<dd> a = poly_coeffs_dd(l, kind);
  BesselPoly poly;
  poly.l = l;
  poly.kind = kind;
  poly.coeffs.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) poly.coeffs[i] = a[i].value();
  return poly;
}

cplx eval_kl(int l, cplx z) {
  if (l < 0) throw std::invalid_argument("eval_kl: l must be >= 0");
  if (z == cplx(0.0, 0.0)) throw std::domain_error("eval_kl: z = 0");
  if (z.real() < -700.0)
    throw std::overflow_error("eval_kl: e^{-z} overflows for Re(z) < -700");
  std::vector<dd> c = series_coeffs_dd(l);
  cplx zinv = 1.0 / z;
  cplx sum = 0.0;
  cplx zk = zinv;
  for (int k = 0; k <= l; ++k) {
    sum += c[k].value() * zk;
    zk *= zinv;
  }
  return (kPi / 2.0) * std::exp(-z) * sum;
}

cplx eval_kl_prime(int l, cplx z) {
  if (l < 0) throw std::invalid_argument("eval_kl_prime: l must be >= 0");
  if (z == cplx(0.0, 0.0)) throw std::domain_error("eval_kl_prime: z = 0");
  if (z.real() < -700.0)
    throw std::overflow_error("eval_kl_prime: e^{-z} overflows");
  std::vector<dd> c = series_coeffs_dd(l);
  cplx zinv = 1.0 / z;
  cplx sum = 0.0;
  cplx zk = zinv;
  for (int k = 0; k <= l; ++k) {
    // d/dz [e^{-z} z^{-(k+1)}] = e^{-z} (-z^{-(k+1)} - (k+1) z^{-(k+2)})
    sum += c[k].value() * (-zk - static_cast<double>(k + 1) * zk * zinv);
    zk *= zinv;
  }
  return (kPi / 2.0) * std::exp(-z) * sum;
}

void horner_dd(const std::vector<double>& coeffs, cplx z, cplx* p, cplx* dp) {
  std::vector<dd> a(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) a[i] = dd(coeffs[i]);
  horner_ddc(a, z, p, dp);
}

namespace {

// LAPACK-style radix-2 balancing of a square matrix (similarity transform
// only, eigenvalues unchanged).
void balance(Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  const double radix = 2.0;
  bool done = false;
  while (!done) {
    done = true;
    for (int i = 0; i < n; ++i) {
      double r = 0.0, c = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix, f = 1.0, s = c + r;
      while (c < g) {
        f *= radix;
        c *= radix * radix;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= radix * radix;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
}

// Starting values: eigenvalues of the balanced companion matrix of the
// variable-scaled polynomial q(w) = p(s w) / s^n.  The scaling keeps the
// coefficient spread manageable for degrees up to ~50.
std::vector<cplx> companion_starts(const std::vector<dd>& coeffs) {
  int n = static_cast<int>(coeffs.size()) - 1;
  // Scale by the geometric mean of the root moduli, |a_0/a_n|^{1/n}, so the
  // scaled roots straddle the unit circle and the scaled coefficients stay
  // well inside double range.
  double lc0 = std::log(std::abs(coeffs[0].value()));
  double s = std::max(1.0, std::exp(lc0 / n));
  std::vector<double> scaled(n + 1);
  double sk = 1.0;
  for (int k = 0; k <= n; ++k) {
    scaled[n - k] = coeffs[n - k].value() / sk;  // divide z^{n-k} term by s^k
    sk *= s;
  }
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -scaled[i] / scaled[n];
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  balance(comp);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(comp, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("companion_starts: QR iteration failed");
  std::vector<cplx> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = s * cplx(solver.eigenvalues()[i]);
  return ev;
}

// Evaluate the K-type numerator P_l (and derivatives) by the upward
// recurrence P_{l+1} = (2l+1) P_l + z^2 P_{l-1}, inherited from the Bessel
// relation K_{nu+1} = K_{nu-1} + (2 nu / z) K_nu.  K is the dominant solution
// as the order grows, so the upward sweep is stable for every z != 0; unlike
// monomial-basis Horner it has no cancellation floor inside the eye-shaped
// root region.
// Evaluate the K-type numerator P_l (and derivative) by the upward
// recurrence P_{l+1} = (2l+1) P_l + z^2 P_{l-1}, inherited from the Bessel
// relation K_{nu+1} = K_{nu-1} + (2 nu / z) K_nu.  Adequate for localizing
// the roots; the certificate below needs more precision.
void eval_numerator(int l, ZeroKind kind, cplx z, cplx* p, cplx* dp) {
  cplx p0 = 1.0, dp0 = 0.0, d2p0 = 0.0;      // P_0 = 1
  cplx p1 = z + 1.0, dp1 = 1.0, d2p1 = 0.0;  // P_1 = z + 1
  cplx z2 = z * z;
  for (int j = 1; j < l; ++j) {
    double a = 2.0 * j + 1.0;
    cplx p2 = a * p1 + z2 * p0;
    cplx dp2 = a * dp1 + z2 * dp0 + 2.0 * z * p0;
    cplx d2p2 = a * d2p1 + z2 * d2p0 + 4.0 * z * dp0 + 2.0 * p0;
    p0 = p1;
    dp0 = dp1;
    d2p0 = d2p1;
    p1 = p2;
    dp1 = dp2;
    d2p1 = d2p2;
  }
  if (kind == ZeroKind::KZeros) {
    *p = l == 0 ? p0 : p1;
    *dp = l == 0 ? dp0 : dp1;
    return;
  }
  // R_l = (z + l) P_l - z P_l'
  cplx zl = z + static_cast<double>(l);
  *p = zl * p1 - z * dp1;
  *dp = p1 + (zl - 1.0) * dp1 - z * d2p1;
}

// High-precision polish and residual certificate.  Inside the eye-shaped
// root region the numerator value is smaller than its coefficient terms by
// a factor of order e^{2|Re z|} (~1e22 at l = 50), which is beyond any
// double-double scheme, so the final Newton steps and the certified
// residual run at 320-bit precision with the exact integer coefficients.
class MpPoly {
 public:
  explicit MpPoly(int l, ZeroKind kind, mpfr_prec_t prec = 320) : prec_(prec) {
    // c_{k+1} = c_k (l+k+1)(l-k) / (2(k+1)); all quantities stay integral
    // and fit well inside 320 bits for l <= 50.
    std::vector<MpVal> c(l + 1);
    for (auto& v : c) v.init(prec_);
    mpfr_set_ui(c[0].x, 1, MPFR_RNDN);
    for (int k = 0; k < l; ++k) {
      mpfr_mul_ui(c[k + 1].x, c[k].x,
                  static_cast<unsigned long>(l + k + 1) *
                      static_cast<unsigned long>(l - k),
                  MPFR_RNDN);
      mpfr_div_ui(c[k + 1].x, c[k + 1].x, 2ul * (k + 1), MPFR_RNDN);
    }
    int deg = (kind == ZeroKind::KZeros) ? l : l + 1;
    coeffs_.resize(deg + 1);
    for (auto& v : coeffs_) v.init(prec_);
    if (kind == ZeroKind::KZeros) {
      for (int k = 0; k <= l; ++k)
        mpfr_set(coeffs_[l - k].x, c[k].x, MPFR_RNDN);
    } else {
      // coefficient of z^{l+1-j} is c_j + (j-1) c_{j-1}
      MpVal tmp;
      tmp.init(prec_);
      for (int j = 0; j <= l + 1; ++j) {
        mpfr_set_ui(tmp.x, 0, MPFR_RNDN);
        if (j <= l) mpfr_add(tmp.x, tmp.x, c[j].x, MPFR_RNDN);
        if (j >= 1 && j - 1 <= l) {
          MpVal t2;
          t2.init(prec_);
          mpfr_mul_ui(t2.x, c[j - 1].x, static_cast<unsigned long>(j - 1),
                      MPFR_RNDN);
          mpfr_add(tmp.x, tmp.x, t2.x, MPFR_RNDN);
        }
        mpfr_set(coeffs_[l + 1 - j].x, tmp.x, MPFR_RNDN);
      }
    }
  }

  // Newton increment p(z)/p'(z) rounded to double.
  cplx newton_step(cplx z) const {
    mpfr_t zr, zi, pr, pi, dr, di, t1, t2, t3, t4, den;
    mpfr_inits2(prec_, zr, zi, pr, pi, dr, di, t1, t2, t3, t4, den,
                static_cast<mpfr_ptr>(nullptr));
    mpfr_set_d(zr, z.real(), MPFR_RNDN);
    mpfr_set_d(zi, z.imag(), MPFR_RNDN);
    eval(zr, zi, pr, pi, dr, di, t1, t2, t3, t4);
    mpfr_mul(t1, dr, dr, MPFR_RNDN);
    mpfr_mul(t2, di, di, MPFR_RNDN);
    mpfr_add(den, t1, t2, MPFR_RNDN);
    cplx step(0.0, 0.0);
    if (!mpfr_zero_p(den)) {
      mpfr_mul(t1, pr, dr, MPFR_RNDN);
      mpfr_mul(t2, pi, di, MPFR_RNDN);
      mpfr_add(t1, t1, t2, MPFR_RNDN);
      mpfr_div(t1, t1, den, MPFR_RNDN);
      mpfr_mul(t2, pi, dr, MPFR_RNDN);
      mpfr_mul(t3, pr, di, MPFR_RNDN);
      mpfr_sub(t2, t2, t3, MPFR_RNDN);
      mpfr_div(t2, t2, den, MPFR_RNDN);
      step = cplx(mpfr_get_d(t1, MPFR_RNDN), mpfr_get_d(t2, MPFR_RNDN));
    }
    mpfr_clears(zr, zi, pr, pi, dr, di, t1, t2, t3, t4, den,
                static_cast<mpfr_ptr>(nullptr));
    return step;
  }

  // Newton refinement from a double start; returns the polished root and
  // its certified relative residual |P(z)| / (|P'(z)| |z|).
  cplx polish(cplx z0, double* residual) const {
    mpfr_prec_t p = prec_;
    mpfr_t zr, zi, pr, pi, dr, di, t1, t2, t3, t4, den;
    mpfr_inits2(p, zr, zi, pr, pi, dr, di, t1, t2, t3, t4, den,
                static_cast<mpfr_ptr>(nullptr));
    mpfr_set_d(zr, z0.real(), MPFR_RNDN);
    mpfr_set_d(zi, z0.imag(), MPFR_RNDN);
    for (int it = 0; it < 12; ++it) {
      eval(zr, zi, pr, pi, dr, di, t1, t2, t3, t4);
      // step = p / dp
      mpfr_mul(t1, dr, dr, MPFR_RNDN);
      mpfr_mul(t2, di, di, MPFR_RNDN);
      mpfr_add(den, t1, t2, MPFR_RNDN);
      if (mpfr_zero_p(den)) break;
      mpfr_mul(t1, pr, dr, MPFR_RNDN);
      mpfr_mul(t2, pi, di, MPFR_RNDN);
      mpfr_add(t1, t1, t2, MPFR_RNDN);
      mpfr_div(t1, t1, den, MPFR_RNDN);  // Re step
      mpfr_mul(t2, pi, dr, MPFR_RNDN);
      mpfr_mul(t3, pr, di, MPFR_RNDN);
      mpfr_sub(t2, t2, t3, MPFR_RNDN);
      mpfr_div(t2, t2, den, MPFR_RNDN);  // Im step
      mpfr_sub(zr, zr, t1, MPFR_RNDN);
      mpfr_sub(zi, zi, t2, MPFR_RNDN);
      // stop once the step is far below double resolution
      mpfr_mul(t1, t1, t1, MPFR_RNDN);
      mpfr_mul(t2, t2, t2, MPFR_RNDN);
      mpfr_add(t1, t1, t2, MPFR_RNDN);
      mpfr_mul(t3, zr, zr, MPFR_RNDN);
      mpfr_mul(t4, zi, zi, MPFR_RNDN);
      mpfr_add(t3, t3, t4, MPFR_RNDN);
      mpfr_div(t1, t1, t3, MPFR_RNDN);
      if (mpfr_get_d(t1, MPFR_RNDN) < 1e-80) break;
    }
    cplx z(mpfr_get_d(zr, MPFR_RNDN), mpfr_get_d(zi, MPFR_RNDN));
    // certificate at the double-rounded pole actually stored
    mpfr_set_d(zr, z.real(), MPFR_RNDN);
    mpfr_set_d(zi, z.imag(), MPFR_RNDN);
    eval(zr, zi, pr, pi, dr, di, t1, t2, t3, t4);
    mpfr_mul(t1, pr, pr, MPFR_RNDN);
    mpfr_mul(t2, pi, pi, MPFR_RNDN);
    mpfr_add(t1, t1, t2, MPFR_RNDN);
    mpfr_sqrt(t1, t1, MPFR_RNDN);  // |P|
    mpfr_mul(t2, dr, dr, MPFR_RNDN);
    mpfr_mul(t3, di, di, MPFR_RNDN);
    mpfr_add(t2, t2, t3, MPFR_RNDN);
    mpfr_sqrt(t2, t2, MPFR_RNDN);  // |P'|
    mpfr_mul(t3, zr, zr, MPFR_RNDN);
    mpfr_mul(t4, zi, zi, MPFR_RNDN);
    mpfr_add(t3, t3, t4, MPFR_RNDN);
    mpfr_sqrt(t3, t3, MPFR_RNDN);  // |z|
    mpfr_mul(t2, t2, t3, MPFR_RNDN);
    mpfr_div(t1, t1, t2, MPFR_RNDN);
    *residual = mpfr_get_d(t1, MPFR_RNDN);
    mpfr_clears(zr, zi, pr, pi, dr, di, t1, t2, t3, t4, den,
                static_cast<mpfr_ptr>(nullptr));
    return z;
  }

 private:
  struct MpVal {
    mpfr_t x;
    bool live = false;
    void init(mpfr_prec_t p) {
      mpfr_init2(x, p);
      live = true;
    }
    MpVal() = default;
    MpVal(const MpVal&) = delete;
    MpVal& operator=(const MpVal&) = delete;
    MpVal(MpVal&& o) noexcept {
      if (o.live) {
        x[0] = o.x[0];
        live = true;
        o.live = false;
      }
    }
    ~MpVal() {
      if (live) mpfr_clear(x);
    }
  };

  // Horner for value and derivative at z = zr + i zi (t1..t4 scratch).
  void eval(mpfr_t zr, mpfr_t zi, mpfr_t pr, mpfr_t pi, mpfr_t dr, mpfr_t di,
            mpfr_t t1, mpfr_t t2, mpfr_t t3, mpfr_t t4) const {
    int n = static_cast<int>(coeffs_.size()) - 1;
    mpfr_set(pr, coeffs_[n].x, MPFR_RNDN);
    mpfr_set_ui(pi, 0, MPFR_RNDN);
    mpfr_set_ui(dr, 0, MPFR_RNDN);
    mpfr_set_ui(di, 0, MPFR_RNDN);
    for (int j = n - 1; j >= 0; --j) {
      // d = d*z + p
      mpfr_mul(t1, dr, zr, MPFR_RNDN);
      mpfr_mul(t2, di, zi, MPFR_RNDN);
      mpfr_sub(t1, t1, t2, MPFR_RNDN);
      mpfr_mul(t3, dr, zi, MPFR_RNDN);
      mpfr_mul(t4, di, zr, MPFR_RNDN);
      mpfr_add(t3, t3, t4, MPFR_RNDN);
      mpfr_add(dr, t1, pr, MPFR_RNDN);
      mpfr_add(di, t3, pi, MPFR_RNDN);
      // p = p*z + a_j
      mpfr_mul(t1, pr, zr, MPFR_RNDN);
      mpfr_mul(t2, pi, zi, MPFR_RNDN);
      mpfr_sub(t1, t1, t2, MPFR_RNDN);
      mpfr_mul(t3, pr, zi, MPFR_RNDN);
      mpfr_mul(t4, pi, zr, MPFR_RNDN);
      mpfr_add(t3, t3, t4, MPFR_RNDN);
      mpfr_add(pr, t1, coeffs_[j].x, MPFR_RNDN);
      mpfr_set(pi, t3, MPFR_RNDN);
    }
  }

  mpfr_prec_t prec_;
  std::vector<MpVal> coeffs_;
};

// Aberth-Ehrlich simultaneous Newton iteration: the pairwise repulsion term
// prevents two approximations from collapsing into one basin, so all roots
// are found even from mediocre companion starts.  State stays in double;
// the Newton increments come from the high-precision evaluator because the
// working-precision numerator value is pure noise near the inner roots.
std::vector<cplx> aberth(const MpPoly& poly, std::vector<cplx> z) {
  const int n = static_cast<int>(z.size());
  for (int it = 0; it < 60; ++it) {
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      cplx newton = poly.newton_step(z[i]);
      cplx repel = 0.0;
      for (int j = 0; j < n; ++j)
        if (j != i) repel += 1.0 / (z[i] - z[j]);
      cplx w = newton / (1.0 - newton * repel);
      z[i] -= w;
      worst = std::max(worst, std::abs(w) / std::max(std::abs(z[i]), 1e-300));
    }
    if (worst <= 1e-12) break;
  }
  return z;
}

PoleSet compute_zeros(int l, ZeroKind kind) {
  std::vector<dd> coeffs = poly_coeffs_dd(l, kind);
  const int degree = static_cast<int>(coeffs.size()) - 1;
  MpPoly locator(l, kind, 192);
  std::vector<cplx> located = aberth(locator, companion_starts(coeffs));
  MpPoly poly(l, kind);

  // Polish each located root at high precision, then enforce exact conjugate
  // closure: keep the Im > 0 member of each pair and mirror it; snap
  // near-real roots onto the axis.
  std::vector<cplx> final_roots;
  std::vector<double> final_res;
  for (const cplx& z0 : located) {
    if (z0.imag() < -1e-9 * std::max(1.0, std::abs(z0.real()))) continue;
    double res = 0.0;
    cplx z = poly.polish(z0, &res);
    if (std::abs(z.imag()) <= 1e-9 * std::max(1.0, std::abs(z.real()))) {
      // restart on the axis; real coefficients keep the iteration there
      z = poly.polish(cplx(z.real(), 0.0), &res);
      final_roots.push_back(cplx(z.real(), 0.0));
      final_res.push_back(res);
    } else {
      if (z.imag() < 0.0) z = std::conj(z);
      final_roots.push_back(z);
      final_res.push_back(res);
      final_roots.push_back(std::conj(z));
      final_res.push_back(res);
    }
  }
  if (static_cast<int>(final_roots.size()) != degree)
    throw std::runtime_error("compute_zeros: root count mismatch at l = " +
                             std::to_string(l));

  std::vector<std::size_t> order(final_roots.size());
  for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (final_roots[a].real() != final_roots[b].real())
      return final_roots[a].real() < final_roots[b].real();
    return final_roots[a].imag() < final_roots[b].imag();
  });

  PoleSet set;
  set.l = l;
  set.kind = kind;
  set.poles.resize(degree);
  set.residuals.resize(degree);
  for (int j = 0; j < degree; ++j) {
    set.poles[j] = final_roots[order[j]];
    set.residuals[j] = final_res[order[j]];
  }
  for (int j = 1; j < degree; ++j)
    if (std::abs(set.poles[j] - set.poles[j - 1]) <=
        1e-8 * std::abs(set.poles[j]))
      throw std::runtime_error("compute_zeros: duplicate root at l = " +
                               std::to_string(l));
  for (int j = 0; j < degree; ++j) {
    if (!(set.residuals[j] <= 1e-12))
      throw std::runtime_error("compute_zeros: residual " +
                               std::to_string(set.residuals[j]) +
                               " above tolerance at l = " + std::to_string(l));
    if (!(set.poles[j].real() < 0.0))
      throw std::runtime_error(
          "compute_zeros: nonnegative real part at l = " + std::to_string(l));
  }
  return set;
}

const PoleSet& cached_zeros(int l, ZeroKind kind) {
  static std::map<std::pair<int, int>, std::unique_ptr<PoleSet>> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_pair(l, static_cast<int>(kind));
  auto it = cache.find(key);
  if (it == cache.end()) {
    auto set = std::make_unique<PoleSet>(compute_zeros(l, kind));
    it = cache.emplace(key, std::move(set)).first;
  }
  return *it->second;
}

}  // namespace

const PoleSet& k_zeros(int l) {
  if (l < 1) throw std::invalid_argument("k_zeros: l must be >= 1");
  return cached_zeros(l, ZeroKind::KZeros);
}

const PoleSet& combined_zeros(int l) {
  if (l < 1) throw std::invalid_argument("combined_zeros: l must be >= 1");
  return cached_zeros(l, ZeroKind::CombinedZeros);
}

}  // namespace tdnrbc
