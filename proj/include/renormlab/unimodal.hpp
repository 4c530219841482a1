#pragma once

#include <functional>
#include <vector>

#include "renormlab/jet.hpp"

namespace renormlab {

struct Interval {
  double lo = 0.0, hi = 0.0;
  double length() const { return hi - lo; }
  bool contains(double x, double tol = 0.0) const { return x >= lo - tol && x <= hi + tol; }
};

// Unimodal map on I = [-1,1] as a polynomial with a single interior critical
// point. User-facing maps and the fixed-point solver work with the even
// subfamily f(x) = sum_j c_j x^{2j} (critical point pinned at 0, f(0) = 1);
// maps produced by renormalizing a perturbed Henon-like map pick up odd
// O(eps) terms and a critical point near but not at 0, so the general form is
// carried too.
class UnimodalMap {
 public:
  // Even-polynomial constructor: coefficients of x^{2j}.
  explicit UnimodalMap(std::vector<double> even_coeffs);

  // General polynomial in the monomial basis x^j.
  static UnimodalMap from_full(std::vector<double> coeffs);

  // Plain evaluation, no domain check (the polynomial extends past I and the
  // renormalization plumbing relies on that).
  double operator()(double x) const;
  double deriv(double x) const;
  Jet eval(const Jet& x) const;

  // Checked evaluation for the public API: |x| <= 1 + 1e-9.
  double eval_checked(double x) const;

  // Monomial coefficients of x^j, j = 0..degree.
  const std::vector<double>& coeffs() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_even() const { return even_; }

  double critical_point() const { return crit_; }
  double critical_value() const { return (*this)(crit_); }

  // Largest x up to which f is strictly monotone on [critical_point(), x].
  double monotone_limit() const { return xmax_; }

  // Solve f(x) = y on the monotone branch right (+1) or left (-1) of the
  // critical point, by bracketed bisection refined by Newton. Throws
  // DomainError when y is outside the branch range (beyond 1e-9).
  double inverse_branch(double y, int branch = +1) const;

  // Newton-only inverse from a seed; falls back to the bracketed solve.
  double inverse_plus_seeded(double y, double x0) const;

  Jet inverse_branch(const Jet& y, int branch = +1) const;

  // Structural checks: f(I) within I (tol 1e-12 on a 1024 grid), a single
  // interior critical point, and (when strict) f(0) = 1 with even symmetry.
  void check_invariants(bool strict_normalization = true) const;

 private:
  UnimodalMap() = default;
  void init();

  std::vector<double> coeffs_;
  bool even_ = true;
  double crit_ = 0.0;
  double xmax_ = 1.0;
};

// Period-doubling renormalizability. Returns the smallest trapping interval
// J around the critical point when it exists.
struct Renormalizability {
  bool ok = false;
  Interval J;
};
Renormalizability renormalizable(const UnimodalMap& f);

// One renormalization step on the even family: sigma0 = f(1) and
// Rf(x) = f(f(sigma0 x))/sigma0, refit to the even-polynomial basis by least
// squares on a Chebyshev grid with the constant term pinned so Rf(0) = 1
// exactly. The composition leaves the truncated space, so low-degree inputs
// are refit at degree 14.
struct Renorm1dResult {
  UnimodalMap map;
  double sigma0 = 0.0;
  double refit_residual = 0.0;
};
Renorm1dResult renormalize1d(const UnimodalMap& f, double max_refit_residual = 1e-8,
                             int refit_degree = 0);

// Fit an even polynomial of the given degree (top power of x) to g on a
// Chebyshev grid in x^2. When pin_constant is set the constant coefficient is
// fixed at 1 and only the higher coefficients are fit.
std::vector<double> fit_even_polynomial(const std::function<double(double)>& g, int degree,
                                        bool pin_constant, double* residual_out = nullptr);

// General least-squares polynomial fit on a Chebyshev grid over [-1, 1],
// returning monomial coefficients of x^j, j = 0..degree.
std::vector<double> fit_polynomial(const std::function<double(double)>& g, int degree,
                                   double* residual_out = nullptr);

struct FixedPointResult {
  UnimodalMap fstar;
  double sigma = 0.0;     // signed scaling, f*(1), in (-1, 0)
  double residual = 0.0;  // sup-norm of Rf* - f* on a 256 grid
  int iterations = 0;
};

// Newton solve of the fixed-point equation f(x) = f(f(sigma0 x))/sigma0 with
// sigma0 = f(1), collocated at Chebyshev nodes. degree is the top even power.
FixedPointResult solve_fixed_point(int degree, double tol, int max_iters = 50);

}  // namespace renormlab
