#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace tdnrbc {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Double-double value (Dekker/Knuth error-free transformations).  Used where
// a polynomial must be evaluated to better than working precision, e.g. the
// Newton polish of Bessel-polynomial roots.
struct dd {
  double hi = 0.0;
  double lo = 0.0;

  dd() = default;
  dd(double h) : hi(h), lo(0.0) {}
  dd(double h, double l) : hi(h), lo(l) {}

  static dd two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
  }
  static dd two_prod(double a, double b) {
    double p = a * b;
    double err = std::fma(a, b, -p);
    return {p, err};
  }

  friend dd operator+(dd a, dd b) {
    dd s = two_sum(a.hi, b.hi);
    s.lo += a.lo + b.lo;
    double hi = s.hi + s.lo;
    return {hi, s.lo - (hi - s.hi)};
  }
  friend dd operator-(dd a, dd b) { return a + dd{-b.hi, -b.lo}; }
  friend dd operator*(dd a, dd b) {
    dd p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    double hi = p.hi + p.lo;
    return {hi, p.lo - (hi - p.hi)};
  }
  friend dd operator/(dd a, dd b) {
    double q0 = a.hi / b.hi;
    dd r = a - b * dd(q0);
    double q1 = r.hi / b.hi;
    dd q = two_sum(q0, q1);
    return q;
  }
  double value() const { return hi + lo; }
};

// Complex value with double-double components.
struct ddc {
  dd re, im;
  ddc() = default;
  ddc(dd r, dd i) : re(r), im(i) {}
  ddc(cplx z) : re(z.real()), im(z.imag()) {}
  friend ddc operator+(ddc a, ddc b) { return {a.re + b.re, a.im + b.im}; }
  friend ddc operator-(ddc a, ddc b) { return {a.re - b.re, a.im - b.im}; }
  friend ddc operator*(ddc a, ddc b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  cplx value() const { return {re.value(), im.value()}; }
};

// Static-partition parallel loop.  Work items are assigned round-robin so the
// result of each item never depends on the thread count; reductions are done
// by the caller in index order.
inline void parallel_for(std::size_t n, int threads,
                         const std::function<void(std::size_t)>& body) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  int nt = static_cast<int>(std::min<std::size_t>(threads, n));
  std::vector<std::thread> pool;
  pool.reserve(nt);
  std::exception_ptr first_error;
  std::mutex err_mutex;
  for (int t = 0; t < nt; ++t) {
    pool.emplace_back([&, t]() {
      try {
        for (std::size_t i = t; i < n; i += nt) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

inline int default_threads() {
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

// FNV-1a, used for pole-table checksums in the run manifest.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace tdnrbc
