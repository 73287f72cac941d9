#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "convolve.hpp"
#include "nrbk.hpp"
#include "oracles.hpp"

using namespace tdnrbc;

TEST_CASE("trapezoid of a constant over one step") {
  ConvolutionState st = make_state(std::vector<cplx>{cplx(0.0, 0.0)}, 0.25);
  advance(st, 1.0, 1.0);
  CHECK(st.accum[0] == cplx(0.25, 0.0));
  CHECK(st.t_current == 0.25);
}

TEST_CASE("real pole against closed form, second order") {
  // f(t) = int_0^t e^{p(t-tau)} dtau = (e^{pt} - 1)/p
  const cplx p(-1.7, 0.0);
  const double t_end = 2.0;
  auto run = [&](double dt) {
    ConvolutionState st = make_state(std::vector<cplx>{p}, dt);
    int n = static_cast<int>(std::round(t_end / dt));
    for (int i = 0; i < n; ++i) advance(st, 1.0, 1.0);
    cplx exact = (std::exp(p * t_end) - 1.0) / p;
    return std::abs(st.accum[0] - exact);
  };
  double e1 = run(0.02), e2 = run(0.01), e3 = run(0.005);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
  CHECK(e2 / e3 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("conjugate pole pair with real signal stays conjugate") {
  cplx p(-0.4, 2.1);
  ConvolutionState st = make_state(std::vector<cplx>{p, std::conj(p)}, 1e-2);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  double g_prev = dist(rng);
  for (int i = 0; i < 500; ++i) {
    double g_next = dist(rng);
    advance(st, g_prev, g_next);
    g_prev = g_next;
    CHECK(st.accum[1] == std::conj(st.accum[0]));
  }
}

TEST_CASE("value() of sigma_1 against the convolution integral") {
  // sigma_1 * g with g(t) = t, b = c = 1:
  //   -int_0^1 e^{-(1-tau)} tau dtau = -(t - 1 + e^{-t})|_{t=1} = -e^{-1}
  KernelPtr k = sigma_kernel(1, 1.0, 1.0);
  // independent oracle: Simpson quadrature of the convolution integral
  cplx oracle = oracles::simpson(
      [](double tau) { return std::exp(-(1.0 - tau)) * tau * (-1.0); }, 0.0,
      1.0, 2000);
  CHECK(std::abs(oracle - cplx(-std::exp(-1.0), 0.0)) < 1e-12);

  double dt = 1e-3;
  ConvolutionState st = make_state(*k, dt);
  int n = static_cast<int>(std::round(1.0 / dt));
  for (int i = 0; i < n; ++i) advance(st, i * dt, (i + 1) * dt);
  cplx v = value(*k, st, 1.0);
  CHECK(std::abs(v - oracle) < 1e-4);
}

TEST_CASE("zero signal gives exactly zero") {
  KernelPtr k = rho_kernel(3, 3.0, 5.0);
  ConvolutionState st = make_state(*k, 1e-2);
  for (int i = 0; i < 100; ++i) advance(st, 0.0, 0.0);
  CHECK(value(*k, st, 0.0) == cplx(0.0, 0.0));
}

TEST_CASE("rho_1 * psi_1 recursive evaluation matches the closed-form route") {
  // The crosscheck computes both routes in closed form; the recursive
  // evaluation must land on the same value up to O(dt^2).
  const double b = 3.0, c = 5.0, t_end = 1.0;
  std::vector<double> err = kernel_crosscheck(1, b, c, {t_end});
  CHECK(err[0] <= 1e-13);
}

TEST_CASE("advance and value are linear in the signal") {
  KernelPtr k = sigma_kernel(4, 2.0, 3.0);
  double dt = 0.05;
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  int n = 40;
  std::vector<cplx> g1(n + 1), g2(n + 1);
  for (auto& v : g1) v = cplx(dist(rng), dist(rng));
  for (auto& v : g2) v = cplx(dist(rng), dist(rng));
  cplx a(1.3, -0.2), bb(-0.7, 0.45);

  auto run = [&](const std::vector<cplx>& g) {
    ConvolutionState st = make_state(*k, dt);
    for (int i = 0; i < n; ++i) advance(st, g[i], g[i + 1]);
    return value(*k, st, g[n]);
  };
  std::vector<cplx> gc(n + 1);
  for (int i = 0; i <= n; ++i) gc[i] = a * g1[i] + bb * g2[i];
  cplx lhs = run(gc);
  cplx rhs = a * run(g1) + bb * run(g2);
  CHECK(std::abs(lhs - rhs) <= 1e-13 * std::max(1.0, std::abs(rhs)));
}

TEST_CASE("state size never grows") {
  KernelPtr k = sigma_kernel(6, 3.0, 5.0);
  ConvolutionState st = make_state(*k, 1e-3);
  std::size_t poles = st.accum.size();
  for (int i = 0; i < 10000; ++i) advance(st, std::sin(1e-3 * i), std::sin(1e-3 * (i + 1)));
  CHECK(st.accum.size() == poles);
  CHECK(st.poles.size() == poles);
}

TEST_CASE("pole mismatch is a hard error") {
  KernelPtr k4 = sigma_kernel(4, 2.0, 3.0);
  KernelPtr k5 = sigma_kernel(5, 2.0, 3.0);
  ConvolutionState st = make_state(*k4, 0.1);
  advance(st, 1.0, 1.0);
  CHECK_THROWS_AS(value(*k5, st, 1.0), std::invalid_argument);
  KernelPtr k4b = sigma_kernel(4, 2.0, 4.0);
  CHECK_THROWS_AS(value(*k4b, st, 1.0), std::invalid_argument);
}
