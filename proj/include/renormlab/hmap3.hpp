#pragma once

#include <memory>

#include "renormlab/field.hpp"
#include "renormlab/jet.hpp"
#include "renormlab/unimodal.hpp"

namespace renormlab {

// Cubic box domain B = [x0,x1] x [y0,y1] x [-h,h].
struct Box3 {
  Vec3 lo{-1.0, -1.0, -0.05};
  Vec3 hi{1.0, 1.0, 0.05};

  bool contains(const Vec3& w, double tol = 1e-9) const {
    return w.x >= lo.x - tol && w.x <= hi.x + tol && w.y >= lo.y - tol && w.y <= hi.y + tol &&
           w.z >= lo.z - tol && w.z <= hi.z + tol;
  }
  Vec3 center() const { return 0.5 * (lo + hi); }

  static Box3 standard(double half_height) {
    return {{-1.0, -1.0, -half_height}, {1.0, 1.0, half_height}};
  }
};

// Three dimensional Henon-like map F(x,y,z) = (f(x) - eps(w), x, delta(w)).
// The second coordinate of the image equals x structurally, so the Henon form
// is preserved bit-exactly under evaluation.
class HenonMap3 {
 public:
  HenonMap3(UnimodalMap f, ScalarField3 eps, ScalarField3 delta, Box3 box);

  const UnimodalMap& f() const { return f_; }
  const ScalarField3& eps() const { return eps_; }
  const ScalarField3& delta() const { return delta_; }
  const Box3& box() const { return box_; }

  JetPoint operator()(const JetPoint& w) const;

  // Checked evaluation: w must lie in the box (tolerance 1e-9).
  Vec3 eval_map(const Vec3& w) const;

  // Full derivative and its determinant. For the Henon form the determinant
  // equals d_y(eps) d_z(delta) - d_z(eps) d_y(delta); the structural identity
  // is exercised in the tests.
  std::pair<Mat3, double> jacobian(const Vec3& w) const;

  Map3 as_map3() const;

  // d_y(delta)(F(w)) + d_z(delta)(F(w)) * d_x(delta)(w); identically zero for
  // maps in the invariant class.
  double class_n_residual(const Vec3& w) const;

  bool is_degenerate(double tol = 1e-300) const {
    return eps_.norm_bound() < tol && delta_.norm_bound() < tol;
  }

  // Renormalized levels install a fused evaluator that computes all three
  // coordinates in one pass over the underlying composition; it agrees
  // bit-for-bit with the split fields (the shared subexpressions cancel
  // exactly) while evaluating the straightening solve once instead of twice.
  void set_fused_evaluator(Map3::Fn fn) {
    fused_ = std::make_shared<const Map3::Fn>(std::move(fn));
  }

 private:
  UnimodalMap f_;
  ScalarField3 eps_;
  ScalarField3 delta_;
  Box3 box_;
  std::shared_ptr<const Map3::Fn> fused_;
};

// Degenerate map (f(x), x, 0).
HenonMap3 make_degenerate(UnimodalMap f);

// Trivial extension of a 2D Henon-like map: eps depends on (x,y) only and
// delta = b z.
HenonMap3 make_trivial_extension(UnimodalMap f, ScalarField3 eps_xy, double b,
                                 double eps_budget = 0.1);

// delta(x,y,z) = eta(C y - z) + C x; the class equation holds identically for
// any profile eta. Throws when max(|eta|, |C|) exceeds the budget.
HenonMap3 make_example_class_map(const ScalarField1& eta, double C, UnimodalMap f,
                                 ScalarField3 eps, double eps_budget = 0.1);

// Conjugation by Phi(w) = (x, y, phi(y,z)); dz_phi must stay away from zero.
// Phi^{-1} is solved in z by Newton at each evaluation.
HenonMap3 conjugate(const HenonMap3& F, const ScalarField2& phi, double dz_phi_min = 1e-6);

// Sampled sup of |field| over the box on an n^3 lattice.
double sample_norm(const ScalarField3& field, const Box3& box, int n = 9);

// Default box half-height for a given delta bound.
double default_half_height(double delta_norm);

}  // namespace renormlab
