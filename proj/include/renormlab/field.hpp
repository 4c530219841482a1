#pragma once

#include <functional>
#include <memory>
#include <utility>

#include "renormlab/jet.hpp"

namespace renormlab {

// Scalar field on R^3 given as an evaluation rule over jets. Fields produced
// by renormalization are genuine compositions (with implicit inverses inside),
// so they are kept as closures rather than refit to a basis. The rule is held
// behind a shared pointer: closure trees get deep after a few levels and are
// copied around freely.
class ScalarField3 {
 public:
  using Fn = std::function<Jet(const JetPoint&)>;

  ScalarField3()
      : fn_(std::make_shared<const Fn>([](const JetPoint&) { return Jet{0.0}; })),
        norm_bound_(0.0) {}
  ScalarField3(Fn fn, double norm_bound)
      : fn_(std::make_shared<const Fn>(std::move(fn))), norm_bound_(norm_bound) {}

  Jet operator()(const JetPoint& w) const { return (*fn_)(w); }

  double value(const Vec3& w) const { return (*fn_)(seed_value(w)).v; }

  // Value plus gradient at w.
  Jet jet(const Vec3& w) const { return (*fn_)(seed(w)); }

  double norm_bound() const { return norm_bound_; }
  void set_norm_bound(double b) { norm_bound_ = b; }

  static ScalarField3 zero() { return {}; }
  static ScalarField3 constant(double c) {
    return {[c](const JetPoint&) { return Jet{c}; }, std::abs(c)};
  }

 private:
  std::shared_ptr<const Fn> fn_;
  double norm_bound_;
};

// One-variable evaluation rule with derivative (the profile eta of the
// example family and similar).
class ScalarField1 {
 public:
  using Fn = std::function<Jet(const Jet&)>;

  ScalarField1()
      : fn_(std::make_shared<const Fn>([](const Jet&) { return Jet{0.0}; })), norm_bound_(0.0) {}
  ScalarField1(Fn fn, double norm_bound)
      : fn_(std::make_shared<const Fn>(std::move(fn))), norm_bound_(norm_bound) {}

  Jet operator()(const Jet& t) const { return (*fn_)(t); }
  double value(double t) const { return (*fn_)(Jet{t}).v; }
  double deriv(double t) const { return (*fn_)(Jet{t, 1.0, 0.0, 0.0}).g[0]; }
  double norm_bound() const { return norm_bound_; }

 private:
  std::shared_ptr<const Fn> fn_;
  double norm_bound_;
};

// Two-variable rule phi(y, z), used by the conjugation operator.
class ScalarField2 {
 public:
  using Fn = std::function<Jet(const Jet&, const Jet&)>;

  explicit ScalarField2(Fn fn) : fn_(std::make_shared<const Fn>(std::move(fn))) {}

  Jet operator()(const Jet& y, const Jet& z) const { return (*fn_)(y, z); }

 private:
  std::shared_ptr<const Fn> fn_;
};

// A map of R^3 evaluable on jets; composition is function composition, so the
// chain rule is applied exactly.
class Map3 {
 public:
  using Fn = std::function<JetPoint(const JetPoint&)>;

  Map3() : fn_(std::make_shared<const Fn>([](const JetPoint& w) { return w; })) {}
  explicit Map3(Fn fn) : fn_(std::make_shared<const Fn>(std::move(fn))) {}

  JetPoint operator()(const JetPoint& w) const { return (*fn_)(w); }

  Vec3 value(const Vec3& w) const { return value_of((*fn_)(seed_value(w))); }

  std::pair<Vec3, Mat3> jet(const Vec3& w) const {
    JetPoint out = (*fn_)(seed(w));
    return {value_of(out), jacobian_of(out)};
  }

  static Map3 identity() { return Map3{}; }

  static Map3 compose(const Map3& outer, const Map3& inner) {
    return Map3{[outer, inner](const JetPoint& w) { return outer(inner(w)); }};
  }

 private:
  std::shared_ptr<const Fn> fn_;
};

}  // namespace renormlab
