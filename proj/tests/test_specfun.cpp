#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <complex>

#include "oracles.hpp"
#include "specfun.hpp"

using namespace tdnrbc;

namespace {
double rel_err(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }
}  // namespace

TEST_CASE("bessel polynomial coefficients") {
  // l = 1: z + 1,  l = 2: z^2 + 3z + 3
  BesselPoly p1 = bessel_poly(1, ZeroKind::KZeros);
  CHECK(p1.degree() == 1);
  CHECK(p1.coeffs[0] == 1.0);
  CHECK(p1.coeffs[1] == 1.0);
  BesselPoly p2 = bessel_poly(2, ZeroKind::KZeros);
  CHECK(p2.coeffs[0] == 3.0);
  CHECK(p2.coeffs[1] == 3.0);
  CHECK(p2.coeffs[2] == 1.0);
  // combined, l = 1: z^2 + z + 1
  BesselPoly q1 = bessel_poly(1, ZeroKind::CombinedZeros);
  CHECK(q1.degree() == 2);
  CHECK(q1.coeffs[0] == 1.0);
  CHECK(q1.coeffs[1] == 1.0);
  CHECK(q1.coeffs[2] == 1.0);
  // leading coefficient is 1 for every degree
  for (int l = 1; l <= 50; ++l) {
    CHECK(bessel_poly(l, ZeroKind::KZeros).coeffs.back() == 1.0);
    CHECK(bessel_poly(l, ZeroKind::CombinedZeros).coeffs.back() == 1.0);
  }
}

TEST_CASE("eval_kl closed forms and reference values") {
  // k_0(1) = (pi/2) e^{-1}
  CHECK(rel_err(eval_kl(0, 1.0), cplx(kPi / 2 * std::exp(-1.0))) < 1e-15);
  CHECK(std::abs(eval_kl(0, 1.0).real() - 0.5778636748954609) < 1e-15);
  // k_1(1) = 2 k_0(1)
  CHECK(rel_err(eval_kl(1, 1.0), 2.0 * eval_kl(0, 1.0)) < 1e-15);
  // quad-precision series oracle across the stated domain
  CHECK(rel_err(eval_kl(10, cplx(2.5, 1.0)), oracles::kl_reference(10, {2.5, 1.0})) <
        1e-12);
  for (int l : {0, 1, 5, 20, 50}) {
    for (cplx z : {cplx(0.5, 0.0), cplx(3.0, 2.0), cplx(50.0, 0.0), cplx(7.0, -9.0)}) {
      CHECK(rel_err(eval_kl(l, z), oracles::kl_reference(l, z)) < 1e-13);
    }
  }
  CHECK_THROWS_AS(eval_kl(3, cplx(0.0, 0.0)), std::domain_error);
  CHECK_THROWS_AS(eval_kl(3, cplx(-800.0, 0.0)), std::overflow_error);
}

TEST_CASE("polynomial matches eval_kl on the stated domain") {
  // k_l via the polynomial representation: k_l = (pi/2) e^{-z} P_l(z) / z^{l+1}
  for (int l : {1, 3, 10, 25, 50}) {
    BesselPoly poly = bessel_poly(l, ZeroKind::KZeros);
    for (cplx z : {cplx(0.5, 0.0), cplx(1.0, 3.0), cplx(20.0, -5.0), cplx(50.0, 0.0)}) {
      cplx p, dp;
      horner_dd(poly.coeffs, z, &p, &dp);
      cplx via_poly = kPi / 2.0 * std::exp(-z) * p / std::pow(z, l + 1);
      CHECK(rel_err(via_poly, eval_kl(l, z)) < 1e-13);
    }
  }
}

TEST_CASE("k_zeros closed forms") {
  const PoleSet& z1 = k_zeros(1);
  REQUIRE(z1.poles.size() == 1);
  CHECK(std::abs(z1.poles[0] - cplx(-1.0, 0.0)) < 1e-14);

  const PoleSet& z2 = k_zeros(2);
  REQUIRE(z2.poles.size() == 2);
  double s3 = std::sqrt(3.0);
  CHECK(std::abs(z2.poles[0] - cplx(-1.5, -s3 / 2)) < 1e-14);
  CHECK(std::abs(z2.poles[1] - cplx(-1.5, s3 / 2)) < 1e-14);
}

TEST_CASE("combined_zeros closed forms") {
  const PoleSet& z1 = combined_zeros(1);
  REQUIRE(z1.poles.size() == 2);
  double s3 = std::sqrt(3.0);
  CHECK(std::abs(z1.poles[0] - cplx(-0.5, -s3 / 2)) < 1e-14);
  CHECK(std::abs(z1.poles[1] - cplx(-0.5, s3 / 2)) < 1e-14);
  for (const cplx& z : z1.poles) CHECK(z.real() == doctest::Approx(-0.5));
  CHECK_THROWS(combined_zeros(0));
}

TEST_CASE("combined zeros annihilate k_l + z k_l'") {
  // small degrees: double evaluation of the series is accurate enough
  for (int l : {1, 5}) {
    const PoleSet& zs = combined_zeros(l);
    REQUIRE(static_cast<int>(zs.poles.size()) == l + 1);
    for (const cplx& z : zs.poles) {
      cplx kl = eval_kl(l, z);
      cplx klp = eval_kl_prime(l, z);
      // residual relative to the magnitudes that cancel at the zero
      double denom = std::abs(kl) + std::abs(z * klp);
      CHECK(std::abs(kl + z * klp) / denom < 1e-12);
    }
  }
  // larger degrees: the series evaluation itself cancels heavily inside the
  // root region, so the check runs against the quad-precision oracle
  for (int l : {12, 30}) {
    const PoleSet& zs = combined_zeros(l);
    for (const cplx& z : zs.poles) {
      cplx kl = oracles::kl_reference(l, z);
      cplx klp = oracles::kl_prime_reference(l, z);
      double denom = std::abs(kl) + std::abs(z * klp);
      CHECK(std::abs(kl + z * klp) / denom < 1e-12);
    }
  }
}

TEST_CASE("pole set invariants for l <= 50") {
  auto t0 = std::chrono::steady_clock::now();
  for (int l = 1; l <= 50; ++l) {
    const PoleSet& kz = k_zeros(l);
    const PoleSet& cz = combined_zeros(l);
    CHECK(static_cast<int>(kz.poles.size()) == l);
    CHECK(static_cast<int>(cz.poles.size()) == l + 1);
    for (const PoleSet* set : {&kz, &cz}) {
      for (std::size_t j = 0; j < set->poles.size(); ++j) {
        const cplx& z = set->poles[j];
        CHECK(z.real() < 0.0);
        CHECK(set->residuals[j] <= 1e-12);
        if (z.imag() != 0.0) {
          // conjugate partner must be present bit-exactly
          bool found = false;
          for (const cplx& w : set->poles)
            if (w == std::conj(z)) found = true;
          CHECK(found);
        }
      }
      // deterministic ordering
      for (std::size_t j = 1; j < set->poles.size(); ++j) {
        bool ordered = set->poles[j - 1].real() < set->poles[j].real() ||
                       (set->poles[j - 1].real() == set->poles[j].real() &&
                        set->poles[j - 1].imag() < set->poles[j].imag());
        CHECK(ordered);
      }
    }
    // the two families are disjoint: combined poly never vanishes at k-zeros
    BesselPoly comb = bessel_poly(l, ZeroKind::CombinedZeros);
    for (const cplx& z : kz.poles) {
      cplx p, dp;
      horner_dd(comb.coeffs, z, &p, &dp);
      CHECK(std::abs(p) / (std::abs(dp) * std::abs(z)) > 1e-6);
    }
  }
  double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(elapsed < 5.0);
}

TEST_CASE("l = 40 distribution bounds") {
  const PoleSet& zs = k_zeros(40);
  double max_im = 0.0, min_re = 0.0;
  for (const cplx& z : zs.poles) {
    max_im = std::max(max_im, std::abs(z.imag()));
    min_re = std::min(min_re, z.real());
  }
  CHECK(max_im < 41.0);
  CHECK(min_re > -27.2);
}

TEST_CASE("pole tables are deterministic across invocations") {
  const PoleSet& a = k_zeros(17);
  const PoleSet& b = k_zeros(17);
  REQUIRE(a.poles.size() == b.poles.size());
  for (std::size_t j = 0; j < a.poles.size(); ++j) CHECK(a.poles[j] == b.poles[j]);
}
