#include "renormlab/renorm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "renormlab/errors.hpp"

namespace renormlab {

Horizontal::Horizontal(const HenonMap3& F, StraighteningSolve opts)
    : f_(F.f()), eps_(F.eps()), delta_(F.delta()), opts_(opts) {}

Jet Horizontal::shift(const Jet& y) const {
  const Jet fy_inv = f_.inverse_branch(y, +1);
  return delta_({y, fy_inv, Jet{0.0}});
}

JetPoint Horizontal::forward(const JetPoint& w) const {
  return {f_.eval(w[0]) - eps_(w), w[1], w[2] - shift(w[1])};
}

JetPoint Horizontal::inverse(const JetPoint& w) const {
  const Jet zeta = w[2] + shift(w[1]);

  // Value phase on plain doubles.
  const double x = w[0].v, y = w[1].v, zt = zeta.v;
  const double fhi = f_.critical_value();
  const double flo = f_(f_.monotone_limit());
  auto clamp_arg = [&](double a) { return std::clamp(a, flo, fhi); };

  double g = f_.inverse_branch(clamp_arg(x), +1);
  double prev_step = 1.0;
  for (int it = 0; it < opts_.max_iters; ++it) {
    const double arg = x + eps_.value({g, y, zt});
    const double gn = f_.inverse_plus_seeded(clamp_arg(arg), g);
    const double step = std::abs(gn - g);
    g = gn;
    if (step < opts_.tolerance * std::max(1.0, std::abs(g))) break;
    // Deep-level fields carry the inner solves' noise floor; stop once the
    // steps stagnate there and let the residual check decide.
    if (step < 1e-9 && step >= 0.5 * prev_step) break;
    prev_step = step;
  }
  const double resid = std::abs(f_(g) - eps_.value({g, y, zt}) - x);
  if (resid > 100.0 * opts_.tolerance) {
    std::ostringstream os;
    os << "straightening solve did not contract (residual " << resid << ")";
    throw SolverError(os.str());
  }

  // Implicit differentiation at the converged point:
  //   (f'(g) - d_x eps) dg = dx + d_y eps dy + d_z eps dzeta.
  const Jet epsj = eps_(seed({g, y, zt}));
  const double denom = f_.deriv(g) - epsj.g[0];
  Jet out;
  out.v = g;
  for (int i = 0; i < 3; ++i)
    out.g[i] = (w[0].g[i] + epsj.g[1] * w[1].g[i] + epsj.g[2] * zeta.g[i]) / denom;
  return {out, w[1], zeta};
}

Vec3 Horizontal::phi_inv_partials_formula(const Vec3& w) const {
  const JetPoint hi = inverse(seed_value(w));
  const Vec3 p = value_of(hi);  // (phi_inv, y, z + p(y))
  const Jet epsj = eps_.jet(p);
  const double dinv = 1.0 / f_.deriv(p.x);  // (f^{-1})' at x + eps o H^{-1}(w)
  const double dx = dinv / (1.0 - dinv * epsj.g[0]);
  const double q = shift(Jet{w.y, 1.0, 0.0, 0.0}).g[0];
  return {dx, dx * (epsj.g[1] + epsj.g[2] * q), dx * epsj.g[2]};
}

Map3 Horizontal::forward_map() const {
  Horizontal self = *this;
  return Map3{[self](const JetPoint& w) { return self.forward(w); }};
}

Map3 Horizontal::inverse_map() const {
  Horizontal self = *this;
  return Map3{[self](const JetPoint& w) { return self.inverse(w); }};
}

Map3 prerenormalize(const HenonMap3& F, StraighteningSolve opts) {
  const Horizontal h(F, opts);
  return Map3{[h, F](const JetPoint& w) {
    return h.forward(F(F(h.inverse(w))));
  }};
}

namespace {

JetPoint scale_point(const JetPoint& w, double s) {
  return {w[0] * s, w[1] * s, w[2] * s};
}

}  // namespace

RenormStep renormalize(const HenonMap3& F, double slice_y, StraighteningSolve opts) {
  const auto ren = renormalizable(F.f());
  if (!ren.ok) throw DomainError("1d part of the map is not renormalizable");

  const Horizontal h(F, opts);

  // The dilation constant is fixed by the normalization pi_x RF(0,0,0) = 1,
  // i.e. sigma0 = pi_x (H o F^2 o H^{-1})(0,0,0). For the degenerate map this
  // is exactly f(1); with perturbations it carries the O(eps) correction that
  // keeps the critical value of the renormalized map at 1.
  const JetPoint origin = seed_value({0.0, 0.0, 0.0});
  const double sigma0 = h.forward(F(F(h.inverse(origin))))[0].v;
  if (!(sigma0 > -1.0 && sigma0 < -0.05))
    throw SolverError("scaling sigma0 outside (-1, -0.05)");

  // pi_x RF(w) = [ f(f(sigma x) - eps(u1)) - eps(u2) ] / sigma with
  // u1 = F(H^{-1}(sigma w)), u2 = F(u1); pi_z RF(w) = [delta(u1) - p(pi_x u1)]
  // / sigma. Both come from one pass below; the wrapper keeps the second
  // coordinate structurally equal to x.
  const UnimodalMap f = F.f();
  HenonMap3 Fcopy = F;

  auto rf_full = [h, Fcopy, sigma0](const JetPoint& w) -> JetPoint {
    const JetPoint u0 = h.inverse(scale_point(w, sigma0));
    const JetPoint u1 = Fcopy(u0);
    const JetPoint u2 = Fcopy(u1);
    const JetPoint hu = h.forward(u2);
    return {hu[0] / sigma0, w[0], hu[2] / sigma0};
  };

  // 1d part: fit the x-slice through (y, z) = (slice_y, 0). The slice is not
  // even (the perturbation feeds an O(eps) odd component into the profile),
  // so the fit is a general polynomial; only the fixed point is symmetric.
  auto slice = [&](double x) -> double {
    const JetPoint out = rf_full(seed_value({x, slice_y, 0.0}));
    return out[0].v;
  };
  double refit_residual = 0.0;
  auto f1_coeffs = fit_polynomial(slice, f.degree(), &refit_residual);
  UnimodalMap f1 = UnimodalMap::from_full(std::move(f1_coeffs));

  ScalarField3 eps1{[rf_full, f1](const JetPoint& w) -> Jet {
                      const JetPoint out = rf_full(w);
                      return f1.eval(w[0]) - out[0];
                    },
                    0.0};
  ScalarField3 delta1{[h, Fcopy, sigma0](const JetPoint& w) -> Jet {
                        const JetPoint u0 = h.inverse(scale_point(w, sigma0));
                        const JetPoint u1 = Fcopy(u0);
                        // pi_z PRF = delta(u1) - p(pi_y F(u1)), and pi_y of
                        // F(u1) is pi_x(u1) bit-exactly.
                        return (Fcopy.delta()(u1) - h.shift(u1[0])) / sigma0;
                      },
                      0.0};

  // Norms drive the box height and the degeneracy cutoff. Sample on the
  // standard slab first, then on the final box.
  Box3 box = Box3::standard(0.05);
  double dn = sample_norm(delta1, box, 5);
  box = Box3::standard(default_half_height(dn));
  dn = sample_norm(delta1, box, 5);
  const double en = sample_norm(eps1, box, 5);
  eps1.set_norm_bound(en);
  delta1.set_norm_bound(dn);

  // Below the underflow floor the fields are numerically zero; install exact
  // zeros so deep cascades collapse to the degenerate map instead of paying
  // for compositions that evaluate to 0.
  if (en < 1e-300 && dn < 1e-300) {
    HenonMap3 degen{f1, ScalarField3::zero(), ScalarField3::zero(), Box3::standard(0.05)};
    return {std::move(degen), sigma0, slice_y, refit_residual, 0.0, 0.0};
  }

  HenonMap3 out{f1, std::move(eps1), std::move(delta1), box};
  out.set_fused_evaluator([rf_full, f1](const JetPoint& w) -> JetPoint {
    JetPoint o = rf_full(w);
    // Same split as the stored fields: f1 - (f1 - pi_x RF) cancels exactly.
    const Jet e1 = f1.eval(w[0]) - o[0];
    return {f1.eval(w[0]) - e1, w[0], o[2]};
  });
  return {std::move(out), sigma0, slice_y, refit_residual, en, dn};
}

double RenormCascade::sigma(int k) const {
  if (k < 0 || k >= depth()) throw ConfigError("sigma index out of range");
  return levels_[k].sigma;
}

const RenormCascade::Level& RenormCascade::at(int k) const {
  if (k < 0 || k >= static_cast<int>(levels_.size()))
    throw ConfigError("cascade level out of range");
  return levels_[k];
}

Map3 RenormCascade::psi_v(int k) const {
  if (k < 1 || k > depth()) throw ConfigError("psi index out of range");
  const auto h = at(k - 1).horiz;
  const double s = at(k - 1).sigma;
  return Map3{[h, s](const JetPoint& w) { return h->inverse(scale_point(w, s)); }};
}

Map3 RenormCascade::psi_c(int k) const {
  if (k < 1 || k > depth()) throw ConfigError("psi index out of range");
  const auto h = at(k - 1).horiz;
  const double s = at(k - 1).sigma;
  const HenonMap3 F = at(k - 1).map;
  return Map3{[h, s, F](const JetPoint& w) { return F(h->inverse(scale_point(w, s))); }};
}

RenormCascade cascade(const HenonMap3& F, int levels, int depth_budget,
                      StraighteningSolve opts) {
  if (levels < 0) throw ConfigError("cascade depth must be nonnegative");
  if (levels > depth_budget) {
    std::ostringstream os;
    os << "cascade depth " << levels << " exceeds the budget " << depth_budget;
    throw ConfigError(os.str());
  }
  std::vector<RenormCascade::Level> ls;
  ls.reserve(levels + 1);

  const Vec3 base_proxy{F.f()(0.0), 0.0, F.delta().value({F.f()(0.0), 0.0, 0.0})};
  ls.push_back({F, std::make_shared<Horizontal>(F, opts), 0.0, base_proxy,
                F.eps().norm_bound(), F.delta().norm_bound(), 0.0});

  for (int k = 0; k < levels; ++k) {
    try {
      auto& cur = ls.back();
      // Tip proxy for the next level: psi_v^{k+1}(tau_{k+1}) = tau_k, so
      // tau_{k+1} = Lambda_k H_k(tau_k). The provisional scaling f(f(0)) is
      // good enough to pick the slice; renormalize() then fixes sigma from
      // the normalization of the origin.
      const Vec3 hproxy = value_of(cur.horiz->forward(seed_value(cur.tip_proxy)));
      const double sigma_guess = cur.map.f()(cur.map.f()(0.0));
      double slice_guess = 0.0;
      if (sigma_guess > -1.0 && sigma_guess < -0.05) slice_guess = hproxy.y / sigma_guess;

      RenormStep step = renormalize(cur.map, slice_guess, opts);
      cur.sigma = step.sigma0;
      Vec3 next_proxy = (1.0 / cur.sigma) * hproxy;
      if (!step.map.box().contains(next_proxy, 0.2)) next_proxy = step.map.box().center();
      ls.push_back({std::move(step.map), nullptr, 0.0, next_proxy, step.eps_norm,
                    step.delta_norm, step.slice_y});
      ls.back().horiz = std::make_shared<Horizontal>(ls.back().map, opts);
    } catch (const Error& e) {
      std::ostringstream os;
      os << "cascade failed at level " << (k + 1) << ": " << e.what();
      throw SolverError(os.str());
    }
  }
  return RenormCascade(std::move(ls));
}

Map3 psi_word(const RenormCascade& c, int k, const Word& word) {
  const int len = word.length();
  if (k + len > c.depth()) throw ConfigError("word extends past the cascade depth");
  if (len == 0) return Map3::identity();
  std::vector<Map3> maps;
  maps.reserve(len);
  for (int i = 0; i < len; ++i) maps.push_back(c.psi(k + 1 + i, word.letter(i) == 1));
  return Map3{[maps](const JetPoint& w) {
    JetPoint out = w;
    for (auto it = maps.rbegin(); it != maps.rend(); ++it) out = (*it)(out);
    return out;
  }};
}

}  // namespace renormlab
