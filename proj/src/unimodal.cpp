#include "renormlab/unimodal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "renormlab/errors.hpp"

namespace renormlab {

namespace {

// Solve the dense system a x = b in long double with partial pivoting.
// Sizes here are tiny (collocation order), so this is plenty.
std::vector<double> solve_dense(std::vector<std::vector<long double>> a,
                                std::vector<long double> b) {
  const int n = static_cast<int>(b.size());
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    std::swap(a[col], a[piv]);
    std::swap(b[col], b[piv]);
    if (a[col][col] == 0.0L) throw SolverError("singular linear system");
    for (int r = col + 1; r < n; ++r) {
      const long double m = a[r][col] / a[col][col];
      for (int c = col; c < n; ++c) a[r][c] -= m * a[col][c];
      b[r] -= m * b[col];
    }
  }
  std::vector<double> x(n);
  for (int r = n - 1; r >= 0; --r) {
    long double s = b[r];
    for (int c = r + 1; c < n; ++c) s -= a[r][c] * static_cast<long double>(x[c]);
    x[r] = static_cast<double>(s / a[r][r]);
  }
  return x;
}

// Coefficients (in the variable u) of the shifted Chebyshev T_j(2u - 1).
std::vector<std::vector<double>> shifted_chebyshev(int jmax) {
  std::vector<std::vector<double>> t(jmax + 1);
  t[0] = {1.0};
  if (jmax >= 1) t[1] = {-1.0, 2.0};
  for (int j = 2; j <= jmax; ++j) {
    std::vector<double> cur(t[j - 1].size() + 1, 0.0);
    for (std::size_t i = 0; i < t[j - 1].size(); ++i) {
      cur[i + 1] += 4.0 * t[j - 1][i];
      cur[i] -= 2.0 * t[j - 1][i];
    }
    for (std::size_t i = 0; i < t[j - 2].size(); ++i) cur[i] -= t[j - 2][i];
    t[j] = std::move(cur);
  }
  return t;
}

// Coefficients (monomial) of the plain Chebyshev T_j(x).
std::vector<std::vector<double>> chebyshev(int jmax) {
  std::vector<std::vector<double>> t(jmax + 1);
  t[0] = {1.0};
  if (jmax >= 1) t[1] = {0.0, 1.0};
  for (int j = 2; j <= jmax; ++j) {
    std::vector<double> cur(t[j - 1].size() + 1, 0.0);
    for (std::size_t i = 0; i < t[j - 1].size(); ++i) cur[i + 1] += 2.0 * t[j - 1][i];
    for (std::size_t i = 0; i < t[j - 2].size(); ++i) cur[i] -= t[j - 2][i];
    t[j] = std::move(cur);
  }
  return t;
}

double eval_poly(const std::vector<double>& coeffs, double x) {
  double r = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) r = r * x + *it;
  return r;
}

// Generic least squares in a given polynomial basis, returning monomial
// coefficients.
std::vector<double> least_squares_poly(const std::function<double(double)>& target,
                                       const std::vector<double>& xs,
                                       const std::vector<std::vector<double>>& basis,
                                       double* residual_out) {
  const int nb = static_cast<int>(basis.size());
  const int nn = static_cast<int>(xs.size());
  std::vector<std::vector<double>> bvals(nb, std::vector<double>(nn));
  std::vector<double> t(nn);
  for (int i = 0; i < nn; ++i) t[i] = target(xs[i]);
  for (int a = 0; a < nb; ++a)
    for (int i = 0; i < nn; ++i) bvals[a][i] = eval_poly(basis[a], xs[i]);

  std::vector<std::vector<long double>> gram(nb, std::vector<long double>(nb, 0.0L));
  std::vector<long double> rhs(nb, 0.0L);
  for (int a = 0; a < nb; ++a) {
    for (int i = 0; i < nn; ++i) rhs[a] += static_cast<long double>(bvals[a][i]) * t[i];
    for (int b = 0; b <= a; ++b) {
      long double s = 0.0L;
      for (int i = 0; i < nn; ++i) s += static_cast<long double>(bvals[a][i]) * bvals[b][i];
      gram[a][b] = gram[b][a] = s;
    }
  }
  const auto bc = solve_dense(std::move(gram), std::move(rhs));

  std::size_t deg = 0;
  for (const auto& b : basis) deg = std::max(deg, b.size());
  std::vector<double> mono(deg, 0.0);
  for (int a = 0; a < nb; ++a)
    for (std::size_t i = 0; i < basis[a].size(); ++i) mono[i] += bc[a] * basis[a][i];

  if (residual_out) {
    double r = 0.0;
    for (int i = 0; i < nn; ++i) r = std::max(r, std::abs(eval_poly(mono, xs[i]) - t[i]));
    *residual_out = r;
  }
  return mono;
}

}  // namespace

UnimodalMap::UnimodalMap(std::vector<double> even_coeffs) {
  if (even_coeffs.empty()) throw ConfigError("unimodal map needs at least one coefficient");
  coeffs_.assign(2 * even_coeffs.size() - 1, 0.0);
  for (std::size_t j = 0; j < even_coeffs.size(); ++j) coeffs_[2 * j] = even_coeffs[j];
  even_ = true;
  init();
}

UnimodalMap UnimodalMap::from_full(std::vector<double> coeffs) {
  if (coeffs.empty()) throw ConfigError("unimodal map needs at least one coefficient");
  UnimodalMap f;
  f.coeffs_ = std::move(coeffs);
  f.even_ = true;
  for (std::size_t j = 1; j < f.coeffs_.size(); j += 2)
    if (f.coeffs_[j] != 0.0) f.even_ = false;
  f.init();
  return f;
}

void UnimodalMap::init() {
  // Critical point: for the even family it is 0; otherwise bracket f' on
  // [-0.4, 0.4] and bisect, then polish by Newton on f'.
  crit_ = 0.0;
  if (!even_) {
    double lo = -0.4, hi = 0.4;
    double dlo = deriv(lo), dhi = deriv(hi);
    if (!(dlo > 0.0 && dhi < 0.0))
      throw SolverError("could not bracket the critical point in [-0.4, 0.4]");
    for (int i = 0; i < 60; ++i) {
      const double mid = 0.5 * (lo + hi);
      ((deriv(mid) > 0.0) ? lo : hi) = mid;
    }
    crit_ = 0.5 * (lo + hi);
  }
  // Extent of the monotone branch past x = 1.
  xmax_ = std::max(1.0, crit_ + 0.5);
  while (xmax_ < 1.6 && deriv(xmax_ + 1e-3) < 0.0) xmax_ += 1e-3;
}

double UnimodalMap::operator()(double x) const { return eval_poly(coeffs_, x); }

double UnimodalMap::deriv(double x) const {
  double r = 0.0;
  for (std::size_t k = coeffs_.size(); k-- > 1;)
    r = r * x + static_cast<double>(k) * coeffs_[k];
  return r;
}

Jet UnimodalMap::eval(const Jet& x) const { return apply_unary(x, (*this)(x.v), deriv(x.v)); }

double UnimodalMap::eval_checked(double x) const {
  if (std::abs(x) > 1.0 + 1e-9) {
    std::ostringstream os;
    os << "unimodal map evaluated outside I: x = " << x;
    throw DomainError(os.str());
  }
  return (*this)(x);
}

double UnimodalMap::inverse_branch(double y, int branch) const {
  // Right branch: f decreasing on [crit, xmax]. Left branch: f increasing on
  // [-xmax_l, crit] (for the even family the mirror of the right one).
  double a = crit_, b = xmax_;
  if (branch < 0) {
    b = crit_;
    a = -xmax_;
    while (a < crit_ - 0.5 && deriv(a) <= 0.0) a += 1e-3;  // guard odd maps
  }
  const double fa = (*this)(a), fb = (*this)(b);
  const double fhi = std::max(fa, fb), flo = std::min(fa, fb);
  if (y > fhi + 1e-9 || y < flo - 1e-9) {
    std::ostringstream os;
    os << "no inverse on branch: y = " << y << " outside [" << flo << ", " << fhi << "]";
    throw DomainError(os.str());
  }
  const double yc = std::clamp(y, flo, fhi);
  double lo = a, hi = b;  // invariant f(lo) >= yc >= f(hi)
  if (branch < 0) std::swap(lo, hi);
  for (int i = 0; i < 14; ++i) {
    const double mid = 0.5 * (lo + hi);
    (((*this)(mid) >= yc) ? lo : hi) = mid;
  }
  double x = 0.5 * (lo + hi);
  const double xa = std::min(lo, hi), xb = std::max(lo, hi);
  for (int i = 0; i < 30; ++i) {
    const double r = (*this)(x) - yc;
    if (std::abs(r) < 1e-13 * std::max(1.0, std::abs(yc))) break;
    const double d = deriv(x);
    if (d == 0.0) break;
    x = std::clamp(x - r / d, xa, xb);
  }
  if (std::abs((*this)(x) - yc) > 1e-12) throw SolverError("inverse branch failed to refine");
  return x;
}

double UnimodalMap::inverse_plus_seeded(double y, double x0) const {
  double x = std::clamp(x0, crit_, xmax_);
  for (int i = 0; i < 14; ++i) {
    const double r = (*this)(x) - y;
    if (std::abs(r) < 1e-14 * std::max(1.0, std::abs(y))) return x;
    const double d = deriv(x);
    if (d == 0.0) break;
    const double xn = x - r / d;
    if (!(xn >= crit_ - 0.1 && xn <= xmax_ + 0.1)) break;
    x = std::clamp(xn, crit_, xmax_);
  }
  if (std::abs((*this)(x) - y) < 1e-13 * std::max(1.0, std::abs(y))) return x;
  return inverse_branch(y, +1);
}

Jet UnimodalMap::inverse_branch(const Jet& y, int branch) const {
  const double x = inverse_branch(y.v, branch);
  const double d = deriv(x);
  if (d == 0.0) throw SolverError("inverse branch derivative vanishes");
  return apply_unary(y, x, 1.0 / d);
}

void UnimodalMap::check_invariants(bool strict_normalization) const {
  if (strict_normalization) {
    if (std::abs(coeffs_[0] - 1.0) > 1e-12) throw Error("unimodal map not normalized: f(0) != 1");
    if (!even_) throw Error("normalized unimodal maps are even");
  }
  for (int i = 0; i < 1024; ++i) {
    const double x = -1.0 + 2.0 * i / 1023.0;
    const double v = (*this)(x);
    if (v < -1.0 - 1e-12 || v > 1.0 + 1e-12)
      throw Error("unimodal map does not map I into I");
  }
  int sign_changes = 0;
  double prev = deriv(-1.0 + 1e-6);
  for (int i = 1; i < 2048; ++i) {
    const double x = -1.0 + 1e-6 + (2.0 - 2e-6) * i / 2047.0;
    const double d = deriv(x);
    if (prev != 0.0 && d != 0.0 && (prev < 0.0) != (d < 0.0)) ++sign_changes;
    if (d != 0.0) prev = d;
  }
  if (sign_changes != 1) throw Error("unimodal map must have exactly one interior critical point");
}

Renormalizability renormalizable(const UnimodalMap& f) {
  Renormalizability out;
  const double c = f.critical_point();
  const double a = f(f(c));  // second iterate of the critical point
  if (a >= c - 1e-12 || a <= -1.0) return out;
  // Right endpoint: the point on the other branch with the same f-value.
  double ar = 0.0;
  try {
    ar = f.inverse_branch(f(a), +1);
  } catch (const Error&) {
    return out;
  }
  const Interval J{a, ar};
  // f^2(J) must stay inside J.
  for (int i = 0; i <= 256; ++i) {
    const double x = J.lo + J.length() * i / 256.0;
    if (!J.contains(f(f(x)), 1e-9)) return out;
  }
  // The cycle {J, f(J)} must be disjoint: min of f over J sits above J.
  double fmin = 1e300;
  for (int i = 0; i <= 64; ++i) fmin = std::min(fmin, f(J.lo + J.length() * i / 64.0));
  if (fmin <= J.hi + 1e-12) return out;
  out.ok = true;
  out.J = J;
  return out;
}

std::vector<double> fit_even_polynomial(const std::function<double(double)>& g, int degree,
                                        bool pin_constant, double* residual_out) {
  if (degree < 2 || degree % 2 != 0) throw ConfigError("even polynomial degree required");
  const int m = degree / 2;
  const int nnodes = 4 * degree;
  const auto cheb = shifted_chebyshev(m);

  std::vector<double> us(nnodes);
  for (int i = 0; i < nnodes; ++i)
    us[i] = 0.5 + 0.5 * std::cos(M_PI * (2.0 * i + 1.0) / (2.0 * nnodes));

  // Basis in u = x^2; with the constant pinned each element vanishes at 0.
  std::vector<std::vector<double>> basis;
  for (int j = pin_constant ? 1 : 0; j <= m; ++j) {
    auto b = cheb[j];
    if (pin_constant) b[0] -= (j % 2 == 0 ? 1.0 : -1.0);  // subtract T_j(-1)
    basis.push_back(std::move(b));
  }
  auto target = [&](double u) { return g(std::sqrt(u)) - (pin_constant ? 1.0 : 0.0); };
  double res = 0.0;
  auto mono_u = least_squares_poly(target, us, basis, &res);
  if (residual_out) *residual_out = res;

  mono_u.resize(m + 1, 0.0);
  if (pin_constant) mono_u[0] += 1.0;
  return mono_u;  // coefficients of u^j = x^{2j}
}

std::vector<double> fit_polynomial(const std::function<double(double)>& g, int degree,
                                   double* residual_out) {
  if (degree < 1) throw ConfigError("polynomial degree must be positive");
  const int nnodes = 4 * degree;
  const auto cheb = chebyshev(degree);
  std::vector<double> xs(nnodes);
  for (int i = 0; i < nnodes; ++i) xs[i] = std::cos(M_PI * (2.0 * i + 1.0) / (2.0 * nnodes));
  auto mono = least_squares_poly(g, xs, cheb, residual_out);
  mono.resize(degree + 1, 0.0);
  return mono;
}

Renorm1dResult renormalize1d(const UnimodalMap& f, double max_refit_residual,
                             int refit_degree) {
  const auto r = renormalizable(f);
  if (!r.ok) throw DomainError("map is not period-doubling renormalizable");
  const double sigma0 = f(1.0);
  auto g = [&](double x) { return f(f(sigma0 * x)) / sigma0; };
  double residual = 0.0;
  if (refit_degree <= 0) refit_degree = std::max(f.degree(), 14);
  if (refit_degree % 2 != 0) ++refit_degree;
  auto c = fit_even_polynomial(g, refit_degree, /*pin_constant=*/true, &residual);
  if (residual > max_refit_residual) {
    std::ostringstream os;
    os << "renormalization refit residual " << residual << " exceeds " << max_refit_residual
       << " (insufficient degree)";
    throw SolverError(os.str());
  }
  return {UnimodalMap(std::move(c)), sigma0, residual};
}

FixedPointResult solve_fixed_point(int degree, double tol, int max_iters) {
  if (degree < 2 || degree % 2 != 0) throw ConfigError("fixed point degree must be even and >= 2");
  const int m = degree / 2;

  std::vector<double> c(m, 0.0);  // c_1..c_m in x^{2j}, with c_0 = 1 implied
  c[0] = -1.52;
  if (m > 1) c[1] = 0.10;

  auto make_map = [&](const std::vector<double>& cc) {
    std::vector<double> full(m + 1);
    full[0] = 1.0;
    std::copy(cc.begin(), cc.end(), full.begin() + 1);
    return UnimodalMap(std::move(full));
  };

  std::vector<double> nodes(m);
  for (int i = 0; i < m; ++i) nodes[i] = std::cos(M_PI * (2.0 * i + 1.0) / (4.0 * m));

  auto residual_vec = [&](const std::vector<double>& cc) {
    const UnimodalMap f = make_map(cc);
    const double s = f(1.0);
    std::vector<double> r(m);
    if (std::abs(s) < 1e-6 || std::abs(s) >= 1.0) {
      std::fill(r.begin(), r.end(), 1e6);
      return r;
    }
    for (int i = 0; i < m; ++i) r[i] = f(f(s * nodes[i])) / s - f(nodes[i]);
    return r;
  };
  auto sup_norm = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double e : v) s = std::max(s, std::abs(e));
    return s;
  };
  auto grid_residual = [&](const UnimodalMap& f) {
    const double s = f(1.0);
    double r = 0.0;
    for (int i = 0; i < 256; ++i) {
      const double x = -1.0 + 2.0 * i / 255.0;
      r = std::max(r, std::abs(f(f(s * x)) / s - f(x)));
    }
    return r;
  };

  int it = 0;
  for (; it < max_iters; ++it) {
    const UnimodalMap f = make_map(c);
    const double gres = grid_residual(f);
    if (gres <= tol) {
      f.check_invariants();
      const double sigma = f(1.0);
      if (!(sigma > -1.0 && sigma < 0.0))
        throw SolverError("fixed point solve converged to invalid scaling");
      return {f, sigma, gres, it};
    }

    const auto g0 = residual_vec(c);
    const double n0 = sup_norm(g0);

    // Finite-difference Jacobian: the system is tiny.
    std::vector<std::vector<long double>> jac(m, std::vector<long double>(m));
    for (int j = 0; j < m; ++j) {
      const double h = 1e-7 * std::max(1.0, std::abs(c[j]));
      auto cpert = c;
      cpert[j] += h;
      const auto gp = residual_vec(cpert);
      for (int i = 0; i < m; ++i) jac[i][j] = (gp[i] - g0[i]) / h;
    }
    std::vector<long double> rhs(m);
    for (int i = 0; i < m; ++i) rhs[i] = -g0[i];
    const auto step = solve_dense(std::move(jac), std::move(rhs));

    double lambda = 1.0;
    bool improved = false;
    for (int halving = 0; halving < 25; ++halving) {
      auto trial = c;
      for (int j = 0; j < m; ++j) trial[j] += lambda * step[j];
      if (sup_norm(residual_vec(trial)) < n0) {
        c = trial;
        improved = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!improved) {
      std::ostringstream os;
      os << "fixed point Newton stalled at residual " << gres << " (degree " << degree << ")";
      throw SolverError(os.str());
    }
  }
  std::ostringstream os;
  os << "fixed point Newton did not reach tol " << tol << " in " << max_iters << " iterations";
  throw SolverError(os.str());
}

}  // namespace renormlab
