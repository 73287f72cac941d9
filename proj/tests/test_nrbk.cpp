#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>

#include "nrbk.hpp"

using namespace tdnrbc;

TEST_CASE("sigma_1 is a single decaying exponential") {
  double b = 2.0, c = 3.0;
  KernelPtr k = sigma_kernel(1, b, c);
  REQUIRE(k->rate_poles.size() == 1);
  CHECK(std::abs(k->rate_poles[0] - cplx(-c / b, 0.0)) < 1e-14);
  CHECK(std::abs(k->weights[0] - cplx(-c / b, 0.0)) < 1e-14);
  CHECK(k->delta_coeff == cplx(0.0, 0.0));
  // sigma_1(t) = -(c/b) e^{-ct/b}
  for (double t : {0.0, 0.3, 1.7}) {
    cplx v = k->smooth_at(t);
    CHECK(std::abs(v - cplx(-c / b * std::exp(-c * t / b), 0.0)) < 1e-14);
  }
}

TEST_CASE("sigma_2 conjugate pair gives a real kernel") {
  double b = 3.0, c = 5.0;
  KernelPtr k = sigma_kernel(2, b, c);
  REQUIRE(k->rate_poles.size() == 2);
  double s3 = std::sqrt(3.0);
  CHECK(std::abs(k->rate_poles[0] - (c / b) * cplx(-1.5, -s3 / 2)) < 1e-13);
  CHECK(std::abs(k->rate_poles[1] - (c / b) * cplx(-1.5, s3 / 2)) < 1e-13);
  for (double t = 0.0; t <= 4.0; t += 0.25) {
    cplx v = k->smooth_at(t);
    CHECK(std::abs(v.imag()) <= 1e-13 * std::max(1.0, std::abs(v.real())));
  }
}

TEST_CASE("sigma at t=0 equals (c/b) * sum of zeros, a real number") {
  for (int l : {1, 4, 9, 23}) {
    double b = 1.5, c = 2.0;
    KernelPtr k = sigma_kernel(l, b, c);
    cplx zsum = 0.0;
    for (const cplx& z : k_zeros(l).poles) zsum += z;
    cplx v = k->smooth_at(0.0);
    CHECK(std::abs(v - (c / b) * zsum) < 1e-12 * std::abs(v));
    CHECK(std::abs(v.imag()) <= 1e-13 * std::abs(v.real()));
  }
}

TEST_CASE("rho_1 closed form") {
  double b = 3.0, c = 5.0;
  KernelPtr k = rho_kernel(1, b, c);
  REQUIRE(k->rate_poles.size() == 2);
  double s3 = std::sqrt(3.0);
  // poles (c/b)(-1 +- i sqrt3)/2, weights (c/b)(3 -+ i sqrt3)/6, delta 0
  CHECK(std::abs(k->rate_poles[0] - (c / b) * cplx(-0.5, -s3 / 2)) < 1e-13);
  CHECK(std::abs(k->rate_poles[1] - (c / b) * cplx(-0.5, s3 / 2)) < 1e-13);
  CHECK(std::abs(k->weights[1] - (c / b) * cplx(0.5, s3 / 6)) < 1e-13);
  CHECK(std::abs(k->weights[0] - (c / b) * cplx(0.5, -s3 / 6)) < 1e-13);
  CHECK(std::abs(k->delta_coeff) < 1e-13);
  // smooth part at t = 0 sums the weights: (c/b)
  CHECK(std::abs(k->smooth_at(0.0) - cplx(c / b, 0.0)) < 1e-13);
}

TEST_CASE("rho delta coefficient is real for all l") {
  for (int l : {1, 2, 7, 20, 40}) {
    KernelPtr k = rho_kernel(l, 3.0, 5.0);
    CHECK(std::abs(k->delta_coeff.imag()) <= 1e-13);
  }
}

TEST_CASE("omega_1 closed form") {
  double b = 2.0, c = 1.0;
  KernelPtr k = omega_kernel(1, b, c);
  REQUIRE(k->rate_poles.size() == 1);
  // z = -1: single term (c/b) e^{-(c/b)t} with delta -1
  CHECK(std::abs(k->weights[0] - cplx(c / b, 0.0)) < 1e-14);
  CHECK(std::abs(k->delta_coeff - cplx(-1.0, 0.0)) < 1e-14);
}

TEST_CASE("omega relates to sigma pole-by-pole") {
  double b = 3.0, c = 5.0;
  for (int l = 1; l <= 40; ++l) {
    KernelPtr sig = sigma_kernel(l, b, c);
    KernelPtr omg = omega_kernel(l, b, c);
    REQUIRE(sig->rate_poles.size() == omg->rate_poles.size());
    for (std::size_t j = 0; j < sig->rate_poles.size(); ++j) {
      CHECK(omg->rate_poles[j] == sig->rate_poles[j]);
      // omega weight = (b/c) * pole * sigma weight
      cplx expect = (b / c) * sig->rate_poles[j] * sig->weights[j];
      CHECK(std::abs(omg->weights[j] - expect) <=
            1e-13 * std::max(1.0, std::abs(expect)));
    }
    // omega delta = (b/c) sigma(0)
    cplx expect_delta = (b / c) * sig->smooth_at(0.0);
    CHECK(std::abs(omg->delta_coeff - expect_delta) <=
          1e-13 * std::max(1.0, std::abs(expect_delta)));
  }
}

TEST_CASE("kernel realness and late-time decay") {
  double b = 3.0, c = 5.0;
  for (int l : {1, 2, 5, 10}) {
    for (auto maker : {sigma_kernel, rho_kernel, omega_kernel}) {
      KernelPtr k = maker(l, b, c);
      double max_re = -1e300;
      for (const cplx& p : k->rate_poles) max_re = std::max(max_re, p.real());
      double v0 = std::abs(k->smooth_at(0.0));
      double sup = 0.0;
      for (double t = 0.0; t <= 20.0 * b / c; t += 0.05) {
        cplx v = k->smooth_at(t);
        CHECK(std::abs(v.imag()) <= 1e-12 * std::max(1.0, std::abs(v.real())));
        sup = std::max(sup, std::abs(v));
      }
      CHECK(std::isfinite(sup));
      double t_late = 20.0 / std::abs(max_re);
      CHECK(std::abs(k->smooth_at(t_late)) <= 1e-6 * v0);
    }
  }
}

TEST_CASE("Table 1 reproduction") {
  auto t0 = std::chrono::steady_clock::now();
  const double b = 3.0, c = 5.0;
  const std::vector<double> times = {1.0, 2.0, 4.0, 10.0};
  for (int l : {1, 5, 10, 15, 30, 50}) {
    std::vector<double> errs = kernel_crosscheck(l, b, c, times);
    REQUIRE(errs.size() == times.size());
    for (std::size_t i = 0; i < errs.size(); ++i) {
      INFO("l = " << l << ", t = " << times[i]);
      CHECK(errs[i] <= 1e-12);
    }
  }
  // spot values from the published table are slightly tighter
  CHECK(kernel_crosscheck(1, b, c, {1.0})[0] <= 1e-13);
  CHECK(kernel_crosscheck(50, b, c, {10.0})[0] <= 1e-13);
  CHECK(kernel_crosscheck(10, b, c, {4.0})[0] <= 1e-12);
  double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(elapsed < 1.0);
}

TEST_CASE("kernel cache returns the same object") {
  KernelPtr a = sigma_kernel(7, 3.0, 5.0);
  KernelPtr b = sigma_kernel(7, 3.0, 5.0);
  CHECK(a.get() == b.get());
  KernelPtr c = sigma_kernel(7, 3.0, 4.0);
  CHECK(a.get() != c.get());
}

TEST_CASE("parameter validation") {
  CHECK_THROWS(sigma_kernel(0, 1.0, 1.0));
  CHECK_THROWS(rho_kernel(3, -1.0, 1.0));
  CHECK_THROWS(omega_kernel(3, 1.0, 0.0));
}
