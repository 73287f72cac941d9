#include "linband.hpp"

#include <stdexcept>

extern "C" {
void dgbtrf_(const int* m, const int* n, const int* kl, const int* ku,
             double* ab, const int* ldab, int* ipiv, int* info);
void dgbtrs_(const char* trans, const int* n, const int* kl, const int* ku,
             const int* nrhs, const double* ab, const int* ldab,
             const int* ipiv, double* b, const int* ldb, int* info);
}

namespace tdnrbc {

void SymBanded::multiply_real(const double* x, double* y) const {
  for (int i = 0; i < n_; ++i) y[i] = 0.0;
  for (int d = 0; d <= bw_; ++d) {
    const double* band = a_.data() + static_cast<std::size_t>(d) * n_;
    if (d == 0) {
      for (int i = 0; i < n_; ++i) y[i] += band[i] * x[i];
    } else {
      for (int i = 0; i + d < n_; ++i) {
        y[i] += band[i] * x[i + d];
        y[i + d] += band[i] * x[i];
      }
    }
  }
}

void SymBanded::multiply(const cplx* x, cplx* y) const {
  for (int i = 0; i < n_; ++i) y[i] = cplx(0.0, 0.0);
  for (int d = 0; d <= bw_; ++d) {
    const double* band = a_.data() + static_cast<std::size_t>(d) * n_;
    if (d == 0) {
      for (int i = 0; i < n_; ++i) y[i] += band[i] * x[i];
    } else {
      for (int i = 0; i + d < n_; ++i) {
        y[i] += band[i] * x[i + d];
        y[i + d] += band[i] * x[i];
      }
    }
  }
}

std::vector<double> SymBanded::dense() const {
  std::vector<double> out(static_cast<std::size_t>(n_) * n_, 0.0);
  for (int i = 0; i < n_; ++i)
    for (int j = std::max(0, i - bw_); j <= std::min(n_ - 1, i + bw_); ++j)
      out[static_cast<std::size_t>(i) * n_ + j] = at(i, j);
  return out;
}

void BandedLU::factor(const SymBanded& a, const std::vector<int>& bump_idx,
                      const std::vector<double>& bump_coeff) {
  n_ = a.n();
  kl_ = ku_ = a.bandwidth();
  int ldab = 2 * kl_ + ku_ + 1;
  ab_.assign(static_cast<std::size_t>(ldab) * n_, 0.0);
  // A(i, j) goes to ab[kl + ku + i - j, j] (0-based LAPACK band layout)
  for (int j = 0; j < n_; ++j)
    for (int i = std::max(0, j - ku_); i <= std::min(n_ - 1, j + kl_); ++i)
      ab_[static_cast<std::size_t>(j) * ldab + (kl_ + ku_ + i - j)] = a.at(i, j);
  for (std::size_t k = 0; k < bump_idx.size(); ++k) {
    int i = bump_idx[k];
    ab_[static_cast<std::size_t>(i) * ldab + (kl_ + ku_)] += bump_coeff[k];
  }
  ipiv_.assign(n_, 0);
  int info = 0;
  dgbtrf_(&n_, &n_, &kl_, &ku_, ab_.data(), &ldab, ipiv_.data(), &info);
  if (info != 0)
    throw std::runtime_error("BandedLU: dgbtrf failed, info = " +
                             std::to_string(info));
}

void BandedLU::solve(double* rhs, int nrhs) const {
  if (n_ == 0) throw std::logic_error("BandedLU: not factored");
  int ldab = 2 * kl_ + ku_ + 1;
  int info = 0;
  char trans = 'N';
  dgbtrs_(&trans, &n_, &kl_, &ku_, &nrhs, ab_.data(), &ldab, ipiv_.data(), rhs,
          &n_, &info);
  if (info != 0)
    throw std::runtime_error("BandedLU: dgbtrs failed, info = " +
                             std::to_string(info));
}

void BandedLU::solve(cplx* rhs, int nrhs) const {
  // complex columns are interleaved (re, im) pairs; LAPACK sees 2 nrhs real
  // columns only if the layout is column-major real — repack instead
  std::vector<double> work(static_cast<std::size_t>(n_) * 2 * nrhs);
  for (int c = 0; c < nrhs; ++c)
    for (int i = 0; i < n_; ++i) {
      work[static_cast<std::size_t>(2 * c) * n_ + i] = rhs[c * n_ + i].real();
      work[static_cast<std::size_t>(2 * c + 1) * n_ + i] = rhs[c * n_ + i].imag();
    }
  solve(work.data(), 2 * nrhs);
  for (int c = 0; c < nrhs; ++c)
    for (int i = 0; i < n_; ++i)
      rhs[c * n_ + i] = cplx(work[static_cast<std::size_t>(2 * c) * n_ + i],
                             work[static_cast<std::size_t>(2 * c + 1) * n_ + i]);
}

}  // namespace tdnrbc
