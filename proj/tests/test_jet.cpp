#include <doctest.h>

#include <cmath>

#include "renormlab/jet.hpp"
#include "renormlab/rng.hpp"

using namespace renormlab;

TEST_CASE("jet arithmetic matches finite differences") {
  Rng rng(17);
  auto fn = [](const Jet& x, const Jet& y, const Jet& z) {
    return sin(x * y) + exp(z * 0.3) / (2.0 + cos(x)) - y * y * z;
  };
  auto fv = [&](double x, double y, double z) {
    return fn(Jet{x}, Jet{y}, Jet{z}).v;
  };
  for (int trial = 0; trial < 20; ++trial) {
    const double x = rng.uniform(-1.0, 1.0);
    const double y = rng.uniform(-1.0, 1.0);
    const double z = rng.uniform(-1.0, 1.0);
    const JetPoint p = seed({x, y, z});
    const Jet out = fn(p[0], p[1], p[2]);
    const double h = 1e-5;
    const double fd[3] = {(fv(x + h, y, z) - fv(x - h, y, z)) / (2 * h),
                          (fv(x, y + h, z) - fv(x, y - h, z)) / (2 * h),
                          (fv(x, y, z + h) - fv(x, y, z + h - 2 * h)) / (2 * h)};
    for (int i = 0; i < 3; ++i)
      CHECK(out.g[i] == doctest::Approx(fd[i]).epsilon(1e-5));
  }
}

TEST_CASE("jet division and chain rule are exact on rational functions") {
  const JetPoint p = seed({0.5, -0.25, 0.125});
  const Jet r = (p[0] * p[1] - p[2]) / (p[0] + 2.0);
  // d/dx [(xy - z)/(x+2)] = (y(x+2) - (xy - z)) / (x+2)^2
  const double num = (-0.25) * 2.5 - (0.5 * -0.25 - 0.125);
  CHECK(r.g[0] == doctest::Approx(num / 6.25).epsilon(1e-15));
  CHECK(r.g[1] == doctest::Approx(0.5 / 2.5).epsilon(1e-15));
  CHECK(r.g[2] == doctest::Approx(-1.0 / 2.5).epsilon(1e-15));
}

TEST_CASE("matrix helpers") {
  Mat3 a = Mat3::identity();
  a.m[0][1] = 2.0;
  a.m[2][1] = -1.0;
  const Mat3 b = a * Mat3::identity();
  CHECK(det(b) == doctest::Approx(1.0));
  const Vec3 v = a * Vec3{1.0, 1.0, 1.0};
  CHECK(v.x == doctest::Approx(3.0));
  CHECK(v.z == doctest::Approx(0.0));
}
