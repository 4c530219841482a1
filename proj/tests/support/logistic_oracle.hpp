#pragma once

// Test-only oracle: the period-doubling scaling ratio measured on the
// logistic family f_mu(x) = 1 - mu x^2, independently of any renormalization
// code. mu_n is the superstable parameter of period 2^n (the critical point
// is periodic); d_n = f_{mu_n}^{2^{n-1}}(0) is the closest-return distance,
// and |d_{n+1}/d_n| converges to the universal |sigma|.

#include <cmath>
#include <cstdint>
#include <vector>

namespace oracle {

inline double logistic_iterate_at_zero(double mu, std::uint64_t iters) {
  double x = 0.0;
  for (std::uint64_t i = 0; i < iters; ++i) x = 1.0 - mu * x * x;
  return x;
}

// Superstable parameters mu_1..mu_nmax by bisection of f^{2^n}(0) = 0 on
// (mu_{n-1}, mu_limit). Each bracket contains exactly one new superstable
// parameter.
inline std::vector<double> superstable_parameters(int nmax) {
  std::vector<double> mus;
  double lo_base = 0.5;
  const double hi_base = 1.4011552;
  for (int n = 1; n <= nmax; ++n) {
    const std::uint64_t iters = std::uint64_t{1} << n;
    double lo = lo_base + 1e-9, hi = hi_base;
    double flo = logistic_iterate_at_zero(lo, iters);
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = logistic_iterate_at_zero(mid, iters);
      if ((flo < 0) == (fm < 0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    mus.push_back(0.5 * (lo + hi));
    lo_base = mus.back();
  }
  return mus;
}

// |sigma| estimated from the last pair of closest returns.
inline double sigma_magnitude(int nmax = 9) {
  const auto mus = superstable_parameters(nmax);
  std::vector<double> d;
  for (int n = 1; n <= nmax; ++n)
    d.push_back(logistic_iterate_at_zero(mus[n - 1], std::uint64_t{1} << (n - 1)));
  return std::abs(d[nmax - 1] / d[nmax - 2]);
}

}  // namespace oracle
