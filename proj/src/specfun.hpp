#pragma once

#include <memory>
#include <vector>

#include "util.hpp"

namespace tdnrbc {

enum class ZeroKind { KZeros, CombinedZeros };

// Numerator polynomial of the modified spherical Bessel combination, with
// real coefficients stored by ascending degree:
//   KZeros:        k_l(z) * (2/pi) e^z z^{l+1}            (degree l, monic)
//   CombinedZeros: (k_l + z k_l') * (-2/pi) e^z z^{l+1}   (degree l+1, monic)
struct BesselPoly {
  int l = 0;
  ZeroKind kind = ZeroKind::KZeros;
  std::vector<double> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

BesselPoly bessel_poly(int l, ZeroKind kind);

// Polynomial evaluation in double-double arithmetic; p and dp are the
// compensated value and the (plain double) derivative.
void horner_dd(const std::vector<double>& coeffs, cplx z, cplx* p, cplx* dp);

struct PoleSet {
  int l = 0;
  ZeroKind kind = ZeroKind::KZeros;
  std::vector<cplx> poles;        // sorted by (Re, Im); conjugate-closed
  std::vector<double> residuals;  // |P(z)| / (|P'(z)| |z|) per pole
};

// Modified spherical Bessel function k_l(z) = sqrt(pi/(2z)) K_{l+1/2}(z),
// evaluated by the terminating series.  Throws on z = 0 and on arguments
// whose e^{-z} factor overflows.
cplx eval_kl(int l, cplx z);
cplx eval_kl_prime(int l, cplx z);

// Zeros of K_{l+1/2}(z), l of them (l >= 1).
const PoleSet& k_zeros(int l);

// Zeros of (1/2) K_{l+1/2}(z) + z K'_{l+1/2}(z), l+1 of them (l >= 1).
const PoleSet& combined_zeros(int l);

}  // namespace tdnrbc
