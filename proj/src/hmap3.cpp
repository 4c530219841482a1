#include "renormlab/hmap3.hpp"

#include <cmath>
#include <sstream>

#include "renormlab/errors.hpp"

namespace renormlab {

HenonMap3::HenonMap3(UnimodalMap f, ScalarField3 eps, ScalarField3 delta, Box3 box)
    : f_(std::move(f)), eps_(std::move(eps)), delta_(std::move(delta)), box_(box) {}

JetPoint HenonMap3::operator()(const JetPoint& w) const {
  if (fused_) return (*fused_)(w);
  return {f_.eval(w[0]) - eps_(w), w[0], delta_(w)};
}

Vec3 HenonMap3::eval_map(const Vec3& w) const {
  if (!box_.contains(w)) {
    std::ostringstream os;
    os << "point (" << w.x << ", " << w.y << ", " << w.z << ") outside the box";
    throw DomainError(os.str());
  }
  return value_of((*this)(seed_value(w)));
}

std::pair<Mat3, double> HenonMap3::jacobian(const Vec3& w) const {
  JetPoint out = (*this)(seed(w));
  Mat3 d = jacobian_of(out);
  return {d, det(d)};
}

Map3 HenonMap3::as_map3() const {
  HenonMap3 self = *this;
  return Map3{[self](const JetPoint& w) { return self(w); }};
}

double HenonMap3::class_n_residual(const Vec3& w) const {
  const Vec3 fw = value_of((*this)(seed_value(w)));
  if (!box_.contains(fw))
    throw DomainError("image point left the box while evaluating the class residual");
  const Jet d_at_fw = delta_.jet(fw);
  const Jet d_at_w = delta_.jet(w);
  return d_at_fw.g[1] + d_at_fw.g[2] * d_at_w.g[0];
}

double sample_norm(const ScalarField3& field, const Box3& box, int n) {
  double r = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Vec3 w{box.lo.x + (box.hi.x - box.lo.x) * i / (n - 1.0),
               box.lo.y + (box.hi.y - box.lo.y) * j / (n - 1.0),
               box.lo.z + (box.hi.z - box.lo.z) * k / (n - 1.0)};
        r = std::max(r, std::abs(field.value(w)));
      }
  return r;
}

double default_half_height(double delta_norm) { return std::max(4.0 * delta_norm, 0.05); }

HenonMap3 make_degenerate(UnimodalMap f) {
  return {std::move(f), ScalarField3::zero(), ScalarField3::zero(), Box3::standard(0.05)};
}

HenonMap3 make_trivial_extension(UnimodalMap f, ScalarField3 eps_xy, double b,
                                 double eps_budget) {
  if (eps_xy.norm_bound() > eps_budget || std::abs(b) > eps_budget)
    throw ConfigError("trivial extension exceeds the perturbation budget");
  ScalarField3 delta{[b](const JetPoint& w) { return b * w[2]; }, 0.0};
  Box3 box = Box3::standard(default_half_height(0.0));
  delta.set_norm_bound(std::abs(b) * box.hi.z);
  box = Box3::standard(default_half_height(delta.norm_bound()));
  delta.set_norm_bound(std::abs(b) * box.hi.z);
  return {std::move(f), std::move(eps_xy), std::move(delta), box};
}

HenonMap3 make_example_class_map(const ScalarField1& eta, double C, UnimodalMap f,
                                 ScalarField3 eps, double eps_budget) {
  if (std::max(eta.norm_bound(), std::abs(C)) > eps_budget)
    throw ConfigError("example map exceeds the perturbation budget");
  ScalarField3 delta{[eta, C](const JetPoint& w) { return eta(C * w[1] - w[2]) + C * w[0]; },
                     eta.norm_bound() + std::abs(C)};
  Box3 box = Box3::standard(default_half_height(delta.norm_bound()));
  HenonMap3 F{std::move(f), std::move(eps), std::move(delta), box};
  // The class equation holds by construction; sample it as a guard.
  for (int i = 0; i < 100; ++i) {
    const double s = i / 99.0;
    Vec3 w{-0.8 + 1.6 * s, 0.8 - 1.6 * s, box.lo.z + (box.hi.z - box.lo.z) * s};
    Vec3 fw = value_of(F(seed_value(w)));
    if (box.contains(fw, 1e-6)) {
      if (std::abs(F.class_n_residual(w)) > 1e-12)
        throw Error("example map failed its class identity");
    }
  }
  return F;
}

HenonMap3 conjugate(const HenonMap3& F, const ScalarField2& phi, double dz_phi_min) {
  // Phi(w) = (x, y, phi(y,z)). The inverse keeps (x, y) and solves
  // phi(y, zeta) = z for zeta by Newton; jets follow by implicit
  // differentiation at the converged point.
  auto phi_inv_z = [phi, dz_phi_min](const Jet& y, const Jet& z) -> Jet {
    double zeta = z.v;
    bool done = false;
    for (int i = 0; i < 100; ++i) {
      const Jet p = phi(Jet{y.v}, Jet{zeta, 0.0, 0.0, 1.0});
      const double dz = p.g[2];
      if (std::abs(dz) < dz_phi_min) throw SolverError("conjugation profile not invertible in z");
      const double step = (p.v - z.v) / dz;
      zeta -= step;
      if (std::abs(step) < 1e-14 * std::max(1.0, std::abs(zeta))) {
        done = true;
        break;
      }
    }
    if (!done) throw SolverError("conjugation inverse Newton did not converge");
    const Jet p = phi(Jet{y.v, 1.0, 0.0, 0.0}, Jet{zeta, 0.0, 1.0, 0.0});
    const double py = p.g[0], pz = p.g[1];
    // d(zeta) = (dz - phi_y dy) / phi_z
    Jet out{zeta};
    for (int i = 0; i < 3; ++i) out.g[i] = (z.g[i] - py * y.g[i]) / pz;
    return out;
  };

  const UnimodalMap f = F.f();
  const ScalarField3 eps = F.eps();
  const ScalarField3 delta = F.delta();

  ScalarField3 eps_t{[eps, phi_inv_z](const JetPoint& w) -> Jet {
                       JetPoint wi{w[0], w[1], phi_inv_z(w[1], w[2])};
                       return eps(wi);
                     },
                     eps.norm_bound()};
  ScalarField3 delta_t{[delta, phi, phi_inv_z](const JetPoint& w) -> Jet {
                         JetPoint wi{w[0], w[1], phi_inv_z(w[1], w[2])};
                         // y-coordinate of F(Phi^{-1} w) is x.
                         return phi(w[0], delta(wi));
                       },
                       0.0};

  // The z-range of the conjugated map is set by phi over the old box.
  const Box3 old_box = F.box();
  double zmax = 0.0;
  for (int i = 0; i <= 8; ++i)
    for (int j = 0; j <= 8; ++j) {
      const double y = old_box.lo.y + (old_box.hi.y - old_box.lo.y) * i / 8.0;
      const double z = old_box.lo.z + (old_box.hi.z - old_box.lo.z) * j / 8.0;
      zmax = std::max(zmax, std::abs(phi(Jet{y}, Jet{z}).v));
    }
  Box3 box = Box3::standard(std::max(zmax * 1.5, 0.05));
  delta_t.set_norm_bound(zmax);
  return {f, std::move(eps_t), std::move(delta_t), box};
}

}  // namespace renormlab
