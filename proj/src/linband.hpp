#pragma once

#include <vector>

#include "util.hpp"

namespace tdnrbc {

// Symmetric banded matrix, upper storage: entry (i, j) with j >= i,
// j - i <= bw lives at band[(j - i) * n + i].
class SymBanded {
 public:
  SymBanded() = default;
  SymBanded(int n, int bw) : n_(n), bw_(bw), a_((bw + 1) * n, 0.0) {}

  int n() const { return n_; }
  int bandwidth() const { return bw_; }

  double& at(int i, int j) {
    if (j < i) std::swap(i, j);
    return a_[static_cast<std::size_t>(j - i) * n_ + i];
  }
  double at(int i, int j) const {
    if (j < i) std::swap(i, j);
    if (j - i > bw_) return 0.0;
    return a_[static_cast<std::size_t>(j - i) * n_ + i];
  }

  // y = A x for complex x (two real sweeps share the band walk)
  void multiply(const cplx* x, cplx* y) const;
  void multiply_real(const double* x, double* y) const;

  // dense copy, for oracle comparisons in tests
  std::vector<double> dense() const;

 private:
  int n_ = 0, bw_ = 0;
  std::vector<double> a_;
};

// LU factorization of a general banded matrix (LAPACK dgbtrf/dgbtrs storage)
// built from a symmetric banded matrix plus rank-one corrections.
class BandedLU {
 public:
  BandedLU() = default;
  // factor A (symmetric banded) after adding the diagonal "bumps"
  // sum_k coeff[k] * E_{idx[k], idx[k]}
  void factor(const SymBanded& a, const std::vector<int>& bump_idx,
              const std::vector<double>& bump_coeff);

  // in-place solve for nrhs right-hand sides stored column-major (ld = n)
  void solve(double* rhs, int nrhs) const;
  void solve(cplx* rhs, int nrhs) const;

 private:
  int n_ = 0, kl_ = 0, ku_ = 0;
  std::vector<double> ab_;  // LAPACK band storage, ldab = 2 kl + ku + 1
  std::vector<int> ipiv_;
};

}  // namespace tdnrbc
