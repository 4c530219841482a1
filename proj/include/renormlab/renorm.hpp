#pragma once

#include <memory>
#include <vector>

#include "renormlab/hmap3.hpp"
#include "renormlab/word.hpp"

namespace renormlab {

struct StraighteningSolve {
  double tolerance = 1e-12;
  int max_iters = 100;
};

// The horizontal-like diffeomorphism of a Henon-like map,
//   H(w)      = (f(x) - eps(w), y, z - p(y)),      p(y) = delta(y, f^{-1}(y), 0),
//   H^{-1}(w) = (phi_inv(w),    y, z + p(y)),
// where phi_inv solves f(g) - eps(g, y, z + p(y)) = x. The solve runs the
// fixed-point iteration g -> f^{-1}(x + eps(g, y, z + p(y))) started at
// f^{-1}(x); jets are recovered afterwards by one implicit-differentiation
// correction at the converged point.
class Horizontal {
 public:
  explicit Horizontal(const HenonMap3& F, StraighteningSolve opts = {});

  Jet shift(const Jet& y) const;  // p(y)
  JetPoint forward(const JetPoint& w) const;
  JetPoint inverse(const JetPoint& w) const;
  Jet phi_inv(const JetPoint& w) const { return inverse(w)[0]; }

  // Partials of phi_inv from the closed-form implicit expressions, as an
  // independent route from the jet propagation.
  Vec3 phi_inv_partials_formula(const Vec3& w) const;

  Map3 forward_map() const;
  Map3 inverse_map() const;

  const UnimodalMap& f() const { return f_; }

 private:
  UnimodalMap f_;
  ScalarField3 eps_;
  ScalarField3 delta_;
  StraighteningSolve opts_;
};

// Pre-renormalization H o F^2 o H^{-1} as a lazy composition.
Map3 prerenormalize(const HenonMap3& F, StraighteningSolve opts = {});

struct RenormStep {
  HenonMap3 map;
  double sigma0 = 0.0;
  double slice_y = 0.0;         // y of the 1d slice used to split off f_1
  double refit_residual = 0.0;  // even-polynomial fit residual of the slice
  double eps_norm = 0.0;
  double delta_norm = 0.0;
};

// Full renormalization RF(w) = PRF(sigma0 w)/sigma0, repackaged as a
// Henon-like map: f_1 is an even-polynomial fit of the x-slice through
// (y, z) = (slice_y, 0), eps_1 := f_1(x) - pi_x RF and delta_1 := pi_z RF
// are exact compositions. sigma0 is taken from the 1d part, f(f(0)).
RenormStep renormalize(const HenonMap3& F, double slice_y = 0.0, StraighteningSolve opts = {});

// The cascade F_0 .. F_N with per-level scalings and coordinate changes
//   psi_v^{k+1}(w) = H_k^{-1}(sigma_k w),   psi_c^{k+1} = F_k o psi_v^{k+1}.
class RenormCascade {
 public:
  int depth() const { return static_cast<int>(levels_.size()) - 1; }

  const HenonMap3& level(int k) const { return at(k).map; }
  double sigma(int k) const;  // k in [0, depth-1]
  const Horizontal& horizontal(int k) const { return *at(k).horiz; }

  // psi^k_v / psi^k_c map B(R^k F) into B(R^{k-1} F), k in [1, depth].
  Map3 psi_v(int k) const;
  Map3 psi_c(int k) const;
  Map3 psi(int k, bool c_branch) const { return c_branch ? psi_c(k) : psi_v(k); }

  // Construction-time tip estimate (used as a seed; the refined tips live in
  // TipData).
  Vec3 tip_proxy(int k) const { return at(k).tip_proxy; }

  double eps_norm(int k) const { return at(k).eps_norm; }
  double delta_norm(int k) const { return at(k).delta_norm; }
  double slice_y(int k) const { return at(k).slice_y; }

  struct Level {
    HenonMap3 map;
    std::shared_ptr<Horizontal> horiz;
    double sigma = 0.0;  // scaling used to produce the next level
    Vec3 tip_proxy{1.0, 0.0, 0.0};
    double eps_norm = 0.0;
    double delta_norm = 0.0;
    double slice_y = 0.0;
  };

  explicit RenormCascade(std::vector<Level> levels) : levels_(std::move(levels)) {}

 private:
  const Level& at(int k) const;
  std::vector<Level> levels_;
};

// Builds the cascade; failures at any level are rethrown with the level index.
RenormCascade cascade(const HenonMap3& F, int levels, int depth_budget = 8,
                      StraighteningSolve opts = {});

// Psi^{k+len}_{k, word} = psi^{k+1}_{w_1} o ... o psi^{k+len}_{w_len};
// the empty word gives the identity.
Map3 psi_word(const RenormCascade& c, int k, const Word& word);

}  // namespace renormlab
