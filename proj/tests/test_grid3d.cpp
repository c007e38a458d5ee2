#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "becdecay/condensate.hpp"
#include "becdecay/constants.hpp"
#include "becdecay/grid3d.hpp"

using namespace becdecay;

TEST_CASE("gauss_legendre nodes and weights") {
  std::vector<double> x, w;
  gauss_legendre(5, x, w);
  // classic 5-point values
  CHECK(x[2] == 0.0);
  CHECK(x[4] == doctest::Approx(0.90617984593866399).epsilon(1e-14));
  CHECK(x[3] == doctest::Approx(0.53846931010568309).epsilon(1e-14));
  CHECK(w[2] == doctest::Approx(128.0 / 225.0).epsilon(1e-14));

  for (int n : {1, 2, 3, 8, 16, 31, 64}) {
    gauss_legendre(n, x, w);
    double sum = 0.0;
    for (double v : w) sum += v;
    CHECK(sum == doctest::Approx(2.0).epsilon(1e-14));
    // exact for degree 2n-1: check x^{2n-2} (even, nonzero integral)
    double mom = 0.0;
    for (int i = 0; i < n; ++i) mom += w[i] * std::pow(x[i], 2 * n - 2);
    CHECK(mom == doctest::Approx(2.0 / (2 * n - 1)).epsilon(1e-12));
  }
}

TEST_CASE("gaussian integral over all space") {
  const double sigma = 0.7;
  OctantGrid g;
  g.half_extent = {8 * sigma, 8 * sigma, 8 * sigma};
  g.panels = 6;
  g.nodes = 12;
  auto f = [sigma](const Vec3& r, std::span<double> out) {
    const double q = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]) / (2 * sigma * sigma);
    out[0] = std::exp(-q);
  };
  const double exact = std::pow(2 * kPi, 1.5) * sigma * sigma * sigma;
  auto v = integrate_even_3d(f, 1, g);
  CHECK(v[0] == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("sqrt cusp on an ellipsoid: graded splits recover accuracy") {
  // f = sqrt(max(0, 1 - (x/Rx)^2 - (y/Ry)^2 - (z/Rz)^2)), integral
  // Rx Ry Rz pi^2 / 4.  This is the worst-case shape the thermal density
  // takes at the condensate boundary.
  const double rx = 0.8, ry = 1.3, rz = 2.9;
  auto f = [=](const Vec3& r, std::span<double> out) {
    const double s = 1.0 - (r[0] / rx) * (r[0] / rx) -
                     (r[1] / ry) * (r[1] / ry) - (r[2] / rz) * (r[2] / rz);
    out[0] = s > 0.0 ? std::sqrt(s) : 0.0;
  };
  const double exact = rx * ry * rz * kPi * kPi / 4.0;

  OctantGrid g;
  g.half_extent = {1.5 * rx, 1.5 * ry, 1.5 * rz};
  g.ellipsoid = {rx, ry, rz};
  g.panels = 8;
  g.nodes = 10;
  auto v = integrate_even_3d(f, 1, g);
  CHECK(v[0] == doctest::Approx(exact).epsilon(1e-8));

  // without the ellipsoid splits the same budget is far worse
  OctantGrid flat = g;
  flat.ellipsoid = {0, 0, 0};
  auto u = integrate_even_3d(f, 1, flat);
  CHECK(std::abs(u[0] / exact - 1.0) > 100 * std::abs(v[0] / exact - 1.0));
}

TEST_CASE("TF condensate normalizes on the 3D grid") {
  const auto trap = TrapConfig::from_frequencies_hz(1090, 1090, 115, 35);
  SpeciesParams sp;
  sp.mass = 6.6464731e-27;
  sp.a = 16e-9;
  const auto p = tf_profile(5e5, trap, sp);
  const auto R = condensate_boundary(p);

  OctantGrid g;
  g.half_extent = {1.4 * R[0], 1.4 * R[1], 1.4 * R[2]};
  g.ellipsoid = R;
  g.panels = 8;
  g.nodes = 10;
  auto f = [&p](const Vec3& r, std::span<double> out) {
    out[0] = p.density(r);
    out[1] = p.density(r) * p.density(r);
  };
  auto v = integrate_even_3d(f, 2, g);
  CHECK(v[0] == doctest::Approx(5e5).epsilon(1e-10));
  // closed form for Int n^2: (4 pi/105)(2 mu/m wbar^2)^{3/2} 7 mu^2/U0^2 ...
  // easier frozen route: n0^2 * Vol * 8/105 * ... checked against the 1D
  // rescaled integral in the losses tests; here just require positivity
  CHECK(v[1] > 0.0);
}

TEST_CASE("parallel and serial sums are bitwise identical") {
  const double rx = 1.0, ry = 0.6, rz = 1.7;
  auto f = [=](const Vec3& r, std::span<double> out) {
    const double s = 1.0 - (r[0] / rx) * (r[0] / rx) -
                     (r[1] / ry) * (r[1] / ry) - (r[2] / rz) * (r[2] / rz);
    out[0] = s > 0.0 ? std::sqrt(s) : 0.0;
    out[1] = std::exp(-r[0] * r[0] - 0.5 * r[1] * r[1] - 2.0 * r[2] * r[2]);
  };
  OctantGrid g;
  g.half_extent = {3.0, 3.0, 4.0};
  g.ellipsoid = {rx, ry, rz};
  g.panels = 5;
  g.nodes = 8;
  auto a = integrate_even_3d(f, 2, g, true);
  auto b = integrate_even_3d(f, 2, g, false);
  CHECK(a[0] == b[0]);
  CHECK(a[1] == b[1]);
}

TEST_CASE("panel refinement converges") {
  const double rx = 0.9, ry = 1.1, rz = 2.0;
  auto f = [=](const Vec3& r, std::span<double> out) {
    const double s = 1.0 - (r[0] / rx) * (r[0] / rx) -
                     (r[1] / ry) * (r[1] / ry) - (r[2] / rz) * (r[2] / rz);
    out[0] = s > 0.0 ? std::sqrt(s) : 0.0;
  };
  const double exact = rx * ry * rz * kPi * kPi / 4.0;
  OctantGrid g;
  g.half_extent = {1.2 * rx, 1.2 * ry, 1.2 * rz};
  g.ellipsoid = {rx, ry, rz};
  g.nodes = 10;
  double prev_err = 1.0;
  for (int panels : {2, 4, 8}) {
    g.panels = panels;
    auto v = integrate_even_3d(f, 1, g);
    const double err = std::abs(v[0] / exact - 1.0);
    CHECK(err < prev_err + 1e-15);
    prev_err = err;
  }
  CHECK(prev_err < 1e-8);
}
