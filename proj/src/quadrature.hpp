#pragma once

#include <vector>

namespace tdnrbc {

struct QuadRule {
  std::vector<double> x;  // nodes on [-1, 1], ascending
  std::vector<double> w;  // weights, sum to 2
};

// Legendre P_n(x) and derivative by the three-term recurrence.
void legendre_eval(int n, double x, double* p, double* dp);

// n-point Gauss-Legendre rule (interior nodes, exact to degree 2n-1).
QuadRule gauss_legendre(int n);

// n-point Gauss-Lobatto-Legendre rule (includes +-1, exact to degree 2n-3).
QuadRule gauss_lobatto(int n);

// Barycentric weights for Lagrange interpolation on the given nodes.
std::vector<double> barycentric_weights(const std::vector<double>& nodes);

// Values of all Lagrange cardinal functions (and derivatives) at point x.
void lagrange_eval(const std::vector<double>& nodes,
                   const std::vector<double>& bary, double x,
                   std::vector<double>& values, std::vector<double>& derivs);

}  // namespace tdnrbc
