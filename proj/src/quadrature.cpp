#include "quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include "util.hpp"

namespace tdnrbc {

void legendre_eval(int n, double x, double* p, double* dp) {
  double p0 = 1.0, p1 = x;
  if (n == 0) {
    *p = 1.0;
    *dp = 0.0;
    return;
  }
  for (int k = 2; k <= n; ++k) {
    double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  *p = p1;
  // (1-x^2) P_n' = n (P_{n-1} - x P_n)
  *dp = n * (p0 - x * p1) / (1.0 - x * x);
}

QuadRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  QuadRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  for (int i = 0; i < n; ++i) {
    // Chebyshev-based initial guess, then Newton on P_n.
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double p, dp;
    for (int it = 0; it < 100; ++it) {
      legendre_eval(n, x, &p, &dp);
      double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    legendre_eval(n, x, &p, &dp);
    rule.x[n - 1 - i] = x;
    rule.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

QuadRule gauss_lobatto(int n) {
  if (n < 2) throw std::invalid_argument("gauss_lobatto: n must be >= 2");
  QuadRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  int m = n - 1;  // interior nodes are roots of P'_m
  rule.x[0] = -1.0;
  rule.x[m] = 1.0;
  double wend = 2.0 / (m * (m + 1.0));
  rule.w[0] = rule.w[m] = wend;
  for (int i = 1; i < m; ++i) {
    // Roots of P'_m interleave Chebyshev-Gauss-Lobatto points.
    double x = std::cos(kPi * i / m);
    for (int it = 0; it < 100; ++it) {
      double p, dp;
      legendre_eval(m, x, &p, &dp);
      // Newton on P'_m using the ODE (1-x^2) P'' = 2x P' - m(m+1) P
      double d2p = (2.0 * x * dp - m * (m + 1.0) * p) / (1.0 - x * x);
      double dx = dp / d2p;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double p, dp;
    legendre_eval(m, x, &p, &dp);
    rule.x[m - i] = x;
    rule.w[m - i] = wend / (p * p);
  }
  return rule;
}

std::vector<double> barycentric_weights(const std::vector<double>& nodes) {
  std::size_t n = nodes.size();
  std::vector<double> w(n, 1.0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k)
      if (k != j) w[j] /= (nodes[j] - nodes[k]);
  return w;
}

void lagrange_eval(const std::vector<double>& nodes,
                   const std::vector<double>& bary, double x,
                   std::vector<double>& values, std::vector<double>& derivs) {
  std::size_t n = nodes.size();
  values.assign(n, 0.0);
  derivs.assign(n, 0.0);
  // If x coincides with a node the cardinal values are trivial and the
  // derivative follows from the differentiation-matrix formula.
  for (std::size_t j = 0; j < n; ++j) {
    if (x == nodes[j]) {
      values[j] = 1.0;
      double diag = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == j) continue;
        derivs[k] = (bary[k] / bary[j]) / (nodes[j] - nodes[k]);
        diag -= derivs[k];
      }
      derivs[j] = diag;
      return;
    }
  }
  // General point: l(x) = prod(x - x_k), phi_j = l(x) b_j / (x - x_j).
  double l = 1.0, dl = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    dl = dl * (x - nodes[k]) + l;
    l *= (x - nodes[k]);
  }
  for (std::size_t j = 0; j < n; ++j) {
    double d = x - nodes[j];
    values[j] = l * bary[j] / d;
    derivs[j] = (dl * bary[j] - values[j]) / d;
  }
}

}  // namespace tdnrbc
