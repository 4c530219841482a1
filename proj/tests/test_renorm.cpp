#include <doctest.h>

#include <cmath>

#include "renormlab/errors.hpp"
#include "renormlab/renorm.hpp"
#include "renormlab/rng.hpp"
#include "support/test_maps.hpp"

using namespace renormlab;

TEST_CASE("horizontal map, degenerate case") {
  const auto F = testmaps::degenerate_star();
  const Horizontal h(F);
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const Vec3 w = testmaps::random_in(F.box(), rng, 0.4);
    const Vec3 hw = value_of(h.forward(seed_value(w)));
    CHECK(hw.x == doctest::Approx(F.f()(w.x)).epsilon(1e-15));
    CHECK(hw.y == w.y);
    CHECK(hw.z == w.z);
    const Vec3 hiw = value_of(h.inverse(seed_value(w)));
    CHECK(hiw.x == doctest::Approx(F.f().inverse_branch(w.x)).epsilon(1e-11));
    CHECK(hiw.z == w.z);
  }
}

TEST_CASE("horizontal round trip and straightening identity") {
  const auto F = testmaps::example_class_map();
  const Horizontal h(F);
  const double s = testmaps::sigma_star();
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    // Sample where H^{-1} is used: the rescaled box sigma * B.
    Vec3 w = testmaps::random_in(F.box(), rng);
    w = std::abs(s) * w;
    const JetPoint inv = h.inverse(seed_value(w));
    const Vec3 round = value_of(h.forward(inv));
    CHECK(norm(round - w) < 1e-11);
    // f(phi_inv(w)) - eps(H^{-1}(w)) = x
    const Vec3 hi = value_of(inv);
    const double lhs = F.f()(hi.x) - F.eps().value(hi);
    CHECK(lhs == doctest::Approx(w.x).epsilon(1e-11));
  }
}

TEST_CASE("phi_inv partial derivatives: formula route equals jets") {
  const auto F = testmaps::example_class_map();
  const Horizontal h(F);
  const double s = testmaps::sigma_star();
  Rng rng(7);
  for (int i = 0; i < 30; ++i) {
    Vec3 w = testmaps::random_in(F.box(), rng);
    w = std::abs(s) * w;
    const JetPoint inv = h.inverse(seed(w));
    const Vec3 formula = h.phi_inv_partials_formula(w);
    for (int axis = 0; axis < 3; ++axis)
      CHECK(inv[0].g[axis] ==
            doctest::Approx(formula[axis]).epsilon(1e-9));
  }
}

TEST_CASE("pre-renormalization") {
  SUBCASE("degenerate: PRF = (f^2(x), x, 0)") {
    const auto F = testmaps::degenerate_star();
    const auto pr = prerenormalize(F);
    Rng rng(11);
    for (int i = 0; i < 20; ++i) {
      Vec3 w = testmaps::random_in(F.box(), rng);
      w = std::abs(testmaps::sigma_star()) * w;
      const Vec3 out = pr.value(w);
      CHECK(out.x == doctest::Approx(F.f()(F.f()(w.x))).epsilon(1e-12));
      CHECK(out.y == doctest::Approx(w.x).epsilon(1e-12));
      CHECK(out.z == 0.0);
    }
  }
  SUBCASE("second coordinate is x up to the straightening tolerance") {
    const auto F = testmaps::example_class_map();
    const auto pr = prerenormalize(F);
    Rng rng(13);
    for (int i = 0; i < 30; ++i) {
      Vec3 w = testmaps::random_in(F.box(), rng);
      w = std::abs(testmaps::sigma_star()) * w;
      CHECK(pr.value(w).y == doctest::Approx(w.x).epsilon(1e-11));
    }
  }
  SUBCASE("matches the four-step composition") {
    const auto F = testmaps::example_class_map();
    const Horizontal h(F);
    const auto pr = prerenormalize(F);
    Rng rng(17);
    for (int i = 0; i < 20; ++i) {
      Vec3 w = testmaps::random_in(F.box(), rng);
      w = std::abs(testmaps::sigma_star()) * w;
      const Vec3 step1 = value_of(h.inverse(seed_value(w)));
      const Vec3 step2 = F.eval_map(step1);
      const Vec3 step3 = value_of(F(seed_value(step2)));
      const Vec3 step4 = value_of(h.forward(seed_value(step3)));
      CHECK(norm(pr.value(w) - step4) < 1e-12);
    }
  }
}

TEST_CASE("renormalization of the degenerate fixed point is the identity") {
  const auto F = testmaps::degenerate_star();
  const auto step = renormalize(F);
  CHECK(step.sigma0 == doctest::Approx(testmaps::sigma_star()).epsilon(1e-12));
  Rng rng(19);
  double sup = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Vec3 w = testmaps::random_in(F.box(), rng);
    const Vec3 a = value_of(step.map(seed_value(w)));
    const Vec3 b = value_of(F(seed_value(w)));
    sup = std::max(sup, norm(a - b));
  }
  CHECK(sup < 1e-9);
  CHECK(step.eps_norm < 1e-9);
  CHECK(step.delta_norm == 0.0);
}

TEST_CASE("trivial extension renormalizes with squared contraction") {
  const double b = 0.1;
  const auto F = testmaps::trivial_extension(b, 0.05, 0.3);
  const auto step = renormalize(F);
  // d_z(delta_1) = b^2 everywhere
  Rng rng(23);
  for (int i = 0; i < 20; ++i) {
    const Vec3 w = testmaps::random_in(step.map.box(), rng, 0.8);
    const Jet dj = step.map.delta().jet(w);
    CHECK(dj.g[2] == doctest::Approx(b * b).epsilon(1e-12));
  }
  // perturbation shrinks roughly quadratically
  CHECK(step.eps_norm < 0.05);
  CHECK(step.delta_norm < 0.05);
}

TEST_CASE("fused and split evaluation agree bitwise") {
  const auto F = testmaps::example_class_map();
  const auto step = renormalize(F);
  const auto& G = step.map;
  Rng rng(29);
  for (int i = 0; i < 20; ++i) {
    const Vec3 w = testmaps::random_in(G.box(), rng, 0.9);
    const Vec3 fused = value_of(G(seed_value(w)));
    const double split_x = G.f()(w.x) - G.eps().value(w);
    const double split_z = G.delta().value(w);
    CHECK(fused.x == split_x);
    CHECK(fused.y == w.x);
    CHECK(fused.z == split_z);
  }
}

TEST_CASE("cascade of the degenerate fixed point stays put") {
  const auto c = cascade(testmaps::degenerate_star(), 6);
  REQUIRE(c.depth() == 6);
  Rng rng(31);
  for (int k = 1; k <= 6; ++k) {
    double sup = 0.0;
    for (int i = 0; i < 20; ++i) {
      const Vec3 w = testmaps::random_in(c.level(k).box(), rng, 0.9);
      sup = std::max(sup, norm(value_of(c.level(k)(seed_value(w))) -
                               value_of(c.level(0)(seed_value(w)))));
    }
    CHECK(sup < 1e-6);
  }
}

TEST_CASE("class invariance along the cascade") {
  const auto c = cascade(testmaps::example_class_map(), 5);
  Rng rng(37);
  for (int k = 1; k <= 5; ++k) {
    const auto& Fk = c.level(k);
    double worst = 0.0;
    // Sample the psi-regions of level k, where the class equation lives.
    for (bool branch : {false, true}) {
      const Map3 psi = c.psi(k, branch);
      for (int i = 0; i < 10; ++i) {
        const Vec3 u = testmaps::random_in(c.level(k).box(), rng, 0.9);
        const Vec3 w = psi.value(u);
        // residual of F_{k-1} at psi^k(u)
        worst = std::max(worst, std::abs(c.level(k - 1).class_n_residual(w)));
      }
    }
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("psi relations") {
  const auto c = cascade(testmaps::example_class_map(), 4);
  Rng rng(41);
  SUBCASE("psi_c = F o psi_v and the projection identity") {
    for (int k = 1; k <= 4; ++k) {
      for (int i = 0; i < 10; ++i) {
        const Vec3 u = testmaps::random_in(c.level(k).box(), rng, 0.9);
        const Vec3 a = c.psi_c(k).value(u);
        const Vec3 b = c.level(k - 1).eval_map(c.psi_v(k).value(u));
        CHECK(norm(a - b) < 1e-12);
        // pi_y o psi_v o F_k = pi_x o psi_c
        const Vec3 lhs = c.psi_v(k).value(value_of(c.level(k)(seed_value(u))));
        CHECK(lhs.y == doctest::Approx(a.x).epsilon(1e-10));
      }
    }
  }
  SUBCASE("conjugacy: psi_v o F_k = F_{k-1}^2 o psi_v") {
    for (int k = 1; k <= 4; ++k) {
      for (int i = 0; i < 10; ++i) {
        const Vec3 u = testmaps::random_in(c.level(k).box(), rng, 0.8);
        const Vec3 lhs = c.psi_v(k).value(value_of(c.level(k)(seed_value(u))));
        Vec3 rhs = c.psi_v(k).value(u);
        rhs = value_of(c.level(k - 1)(seed_value(rhs)));
        rhs = value_of(c.level(k - 1)(seed_value(rhs)));
        CHECK(norm(lhs - rhs) < 1e-9);
      }
    }
  }
}

TEST_CASE("psi_word composition") {
  const auto c = cascade(testmaps::example_class_map(), 4);
  SUBCASE("empty word is the identity") {
    const auto id = psi_word(c, 2, Word{});
    const Vec3 w{0.3, -0.2, 0.01};
    CHECK(norm(id.value(w) - w) == 0.0);
  }
  SUBCASE("Psi^n_{k,v} o F_n = F_k o Psi^n_{k,c}") {
    Rng rng(43);
    const int k = 1, n = 4;
    const Word wv = Word::all_v(n - k);
    const Word wc = Word::from_index((1u << (n - k)) - 1, n - k);  // all c
    for (int i = 0; i < 50; ++i) {
      const Vec3 u = testmaps::random_in(c.level(n).box(), rng, 0.8);
      const Vec3 lhs = psi_word(c, k, wv).value(value_of(c.level(n)(seed_value(u))));
      const Vec3 rhs = c.level(k).eval_map(psi_word(c, k, wc).value(u));
      CHECK(norm(lhs - rhs) < 1e-9);
    }
  }
}

TEST_CASE("full conjugacy against iterated base map") {
  const auto c = cascade(testmaps::example_class_map(), 4);
  Rng rng(47);
  for (int n = 1; n <= 4; ++n) {
    const auto chain = psi_word(c, 0, Word::all_v(n));
    for (int i = 0; i < 5; ++i) {
      const Vec3 u = testmaps::random_in(c.level(n).box(), rng, 0.7);
      const Vec3 lhs = chain.value(value_of(c.level(n)(seed_value(u))));
      Vec3 rhs = chain.value(u);
      const int iters = 1 << n;
      for (int j = 0; j < iters; ++j) rhs = value_of(c.level(0)(seed_value(rhs)));
      CHECK(norm(lhs - rhs) < 1e-7 * iters);
    }
  }
}

TEST_CASE("level scalings approach the 1d fixed-point scaling") {
  const auto c = cascade(testmaps::example_class_map(), 5);
  const double s = testmaps::sigma_star();
  for (int k = 0; k < 5; ++k) CHECK(std::abs(c.sigma(k) - s) < 0.05);
  for (int k = 2; k < 4; ++k)
    CHECK(std::abs(c.sigma(k + 1) - s) <= std::abs(c.sigma(k) - s) + 1e-12);
}

TEST_CASE("cascade depth budget and error propagation") {
  CHECK_THROWS_AS(cascade(testmaps::degenerate_star(), 9, 8), ConfigError);
  // A non-renormalizable 1d part fails at level 1 with the level index.
  const auto bad = make_degenerate(UnimodalMap({1.0, -0.5}));
  try {
    cascade(bad, 2);
    CHECK(false);
  } catch (const SolverError& e) {
    CHECK(std::string(e.what()).find("level 1") != std::string::npos);
  }
}
