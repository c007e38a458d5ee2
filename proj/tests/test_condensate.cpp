#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <span>

#include "becdecay/condensate.hpp"
#include "becdecay/constants.hpp"
#include "becdecay/quadrature.hpp"

using namespace becdecay;

namespace {

TrapConfig he_trap() {
  return TrapConfig::from_frequencies_hz(1090.0, 1090.0, 115.0, 35.0);
}

SpeciesParams he_star() {
  SpeciesParams s;
  s.mass = 6.6464731e-27;
  s.a = 16e-9;
  s.chi = 1.5e-20;
  s.xi = 4e-39;
  return s;
}

// Numerically normalize the profile over the rescaled radial coordinate:
// with u_i = x_i w_i / wbar the Jacobian is 1 and the TF density is
// isotropic, so N = 4 pi Int n(u) u^2 du over the support.
double normalize(const CondensateProfile& p) {
  const double u_r = boundary_rescaled(p);
  if (u_r == 0.0) return 0.0;
  QuadratureOptions opts;
  opts.rtol = 1e-10;
  auto f = [&p](double u, std::span<double> out) {
    out[0] = p.density_rescaled(u) * u * u;
  };
  const std::array<double, 2> pts = {0.0, u_r};
  return 4.0 * kPi * integrate_adaptive(f, 1, pts, opts).values[0];
}

}  // namespace

TEST_CASE("empty condensate") {
  const auto p = tf_profile(0.0, he_trap(), he_star());
  CHECK(p.mu_tf == 0.0);
  CHECK(p.mu == he_trap().ground_state_energy());  // ideal-gas floor
  CHECK(p.density({1e-7, 0, 0}) == 0.0);
  CHECK(p.density({0, 0, 0}) == 0.0);
  const auto r = condensate_boundary(p);
  CHECK(r[0] == 0.0);
  CHECK(r[2] == 0.0);
}

TEST_CASE("mu follows the 2/5-power law above the floor") {
  const auto trap = he_trap();
  const auto sp = he_star();
  const double mu1 = tf_profile(1e4, trap, sp).mu;
  const double mu32 = tf_profile(32e4, trap, sp).mu;
  CHECK(mu32 == doctest::Approx(4.0 * mu1).epsilon(1e-12));

  // monotone in N_C (finite-difference check across the range)
  double prev = 0.0;
  for (double n : {1e3, 1e4, 1e5, 1e6, 1e7}) {
    const double mu = tf_profile(n, trap, sp).mu;
    CHECK(mu > prev);
    prev = mu;
  }
}

TEST_CASE("frozen He* reference values at N_C = 5e5") {
  const auto p = tf_profile(5e5, he_trap(), he_star());
  CHECK(p.mu == doctest::Approx(1.3355429470960985e-29).epsilon(1e-12));
  CHECK(p.mu == p.mu_tf);  // far above the floor
  // central density mu/U_0
  CHECK(p.density({0, 0, 0}) ==
        doctest::Approx(3.9697845877242453e19).epsilon(1e-12));
  CHECK(boundary_rescaled(p) ==
        doctest::Approx(1.9589265577523278e-5).epsilon(1e-12));
}

TEST_CASE("quadrature normalization recovers N_C") {
  const auto trap = he_trap();
  const auto sp = he_star();
  for (double n : {1e3, 5e5, 2e6}) {
    const auto p = tf_profile(n, trap, sp);
    CHECK(normalize(p) == doctest::Approx(n).epsilon(1e-6));
  }
}

TEST_CASE("TF relation U0 n + V = mu inside the support") {
  const auto trap = he_trap();
  const auto sp = he_star();
  const auto p = tf_profile(5e5, trap, sp);
  const auto r = condensate_boundary(p);
  for (double f : {0.0, 0.3, 0.7, 0.99}) {
    const Vec3 pos = {f * r[0] * 0.6, f * r[1] * 0.5, f * r[2] * 0.4};
    const double v = trap.potential(sp.mass, pos);
    CHECK(sp.contact_interaction() * p.density(pos) + v ==
          doctest::Approx(p.mu_tf).epsilon(1e-12));
  }
}

TEST_CASE("boundary radii are the density support") {
  const auto p = tf_profile(5e5, he_trap(), he_star());
  const auto r = condensate_boundary(p);
  CHECK(r[0] == r[1]);  // omega_x == omega_y
  CHECK(r[2] > r[0]);   // weak axis is long
  for (int axis = 0; axis < 3; ++axis) {
    Vec3 at{0, 0, 0}, just_in{0, 0, 0};
    at[axis] = r[axis];
    just_in[axis] = r[axis] * (1.0 - 1e-9);
    CHECK(p.density(at) <= 1e-12 * p.density({0, 0, 0}));
    CHECK(p.density(just_in) > 0.0);
  }
  // isotropic trap: all radii equal
  const auto iso = tf_profile(5e5, TrapConfig::from_frequencies_hz(300, 300, 300, 35.0),
                              he_star());
  const auto ri = condensate_boundary(iso);
  CHECK(ri[0] == ri[1]);
  CHECK(ri[1] == ri[2]);
}

TEST_CASE("mu floor engages for tiny condensates") {
  const auto trap = he_trap();
  const auto sp = he_star();
  // crossover near 387 atoms for these parameters
  const auto below = tf_profile(100.0, trap, sp);
  CHECK(below.mu == trap.ground_state_energy());
  CHECK(below.mu_tf < below.mu);
  const auto above = tf_profile(1000.0, trap, sp);
  CHECK(above.mu == above.mu_tf);
  CHECK(above.mu > trap.ground_state_energy());
  // density still normalizes either way
  CHECK(normalize(below) == doctest::Approx(100.0).epsilon(1e-6));
}

TEST_CASE("density in lab frame matches rescaled accessor") {
  const auto p = tf_profile(5e5, he_trap(), he_star());
  const auto& t = p.trap;
  const double wb = t.omega_bar();
  // pick lab points, map to u = |(x wx, y wy, z wz)| / wbar
  for (const Vec3& r : {Vec3{3e-6, 0, 0}, Vec3{1e-6, 2e-6, 5e-6},
                        Vec3{0, 0, 1.2e-5}}) {
    const double u = std::sqrt(r[0] * r[0] * t.omega_x * t.omega_x +
                               r[1] * r[1] * t.omega_y * t.omega_y +
                               r[2] * r[2] * t.omega_z * t.omega_z) / wb;
    CHECK(p.density(r) == doctest::Approx(p.density_rescaled(u)).epsilon(1e-12));
  }
}

// ---- Gross-Pitaevskii ground state --------------------------------------

#include "becdecay/gp.hpp"

namespace {

// The solver's own normalization rule: trapezoid over the cylindrical
// half-space grid, mirrored in z.
double gp_norm(const GpDensity& d) {
  double total = 0.0;
  for (int i = 0; i < d.n_rho; ++i) {
    const double ci = (i == 0 || i == d.n_rho - 1) ? 0.5 : 1.0;
    double s = 0.0;
    for (int j = 0; j < d.n_z; ++j) {
      const double cj = (j == 0 || j == d.n_z - 1) ? 0.5 : 1.0;
      s += cj * d.values[static_cast<std::size_t>(i) * d.n_z + j];
    }
    total += 4.0 * kPi * (i * d.d_rho) * d.d_rho * d.d_z * ci * s;
  }
  return total;
}

}  // namespace

TEST_CASE("gp: weakly interacting limit is the oscillator Gaussian") {
  auto sp = he_star();
  sp.a = 16e-12;  // 1e-3 of the physical value
  const auto trap = he_trap();
  GpGrid grid;
  grid.n_rho = 64;
  grid.n_z = 64;
  grid.extent = 4.0;
  const double n_c = 1000.0;
  const auto p = gp_solve(n_c, trap, sp, grid);

  const double e0 = trap.ground_state_energy();
  CHECK(p.mu >= e0);
  CHECK(p.mu == doctest::Approx(e0).epsilon(0.01));

  // analytic ground-state density
  const double hbar = PhysConstants::hbar;
  const double lx = std::sqrt(hbar / (sp.mass * trap.omega_x));
  const double lz = std::sqrt(hbar / (sp.mass * trap.omega_z));
  auto gauss = [&](const Vec3& r) {
    const double arg = (r[0] * r[0] + r[1] * r[1]) / (lx * lx) +
                       r[2] * r[2] / (lz * lz);
    return n_c / (std::pow(kPi, 1.5) * lx * lx * lz) * std::exp(-arg);
  };
  const double peak = gauss({0, 0, 0});
  for (const Vec3& r : {Vec3{0, 0, 0}, Vec3{0.5 * lx, 0, 0},
                        Vec3{0, 0.3 * lx, 0.8 * lz}, Vec3{lx, 0, lz}}) {
    CHECK(std::abs(p.density(r) - gauss(r)) < 0.01 * peak);
  }

  CHECK(!p.radial());
  CHECK_THROWS_AS(p.density_rescaled(1e-6), std::logic_error);
}

TEST_CASE("gp: TF regime chemical potential and central density") {
  const auto trap = he_trap();
  const auto sp = he_star();
  const auto tf = tf_profile(5e5, trap, sp);
  const auto p = gp_solve(5e5, trap, sp);

  CHECK(p.mu == doctest::Approx(tf.mu).epsilon(0.02));
  CHECK(p.mu >= trap.ground_state_energy());
  // kinetic smoothing only perturbs the core density slightly
  CHECK(p.density({0, 0, 0}) ==
        doctest::Approx(tf.density({0, 0, 0})).epsilon(0.05));
  // smooth edge: nonzero slightly outside the TF radius, decaying fast
  const auto r = condensate_boundary(tf);
  CHECK(p.density({0, 0, 1.02 * r[2]}) < 0.02 * p.density({0, 0, 0}));

  // the discrete field carries exactly N_C
  REQUIRE(p.gp != nullptr);
  CHECK(gp_norm(*p.gp) == doctest::Approx(5e5).epsilon(1e-8));

  // warm-started neighbor: mu follows the 2/5 power to high accuracy
  const auto q = gp_solve(5.25e5, trap, sp);
  CHECK(q.mu / p.mu ==
        doctest::Approx(std::pow(1.05, 0.4)).epsilon(0.005));
}

TEST_CASE("gp: argument validation") {
  const auto sp = he_star();
  CHECK_THROWS_AS(
      gp_solve(1e5, TrapConfig::from_frequencies_hz(1090, 900, 115, 35), sp),
      std::invalid_argument);
  CHECK_THROWS_AS(gp_solve(0.0, he_trap(), sp), std::invalid_argument);
  CHECK_THROWS_AS(gp_solve(-5.0, he_trap(), sp), std::invalid_argument);

  GpGrid starved;
  starved.max_steps = 60;
  CHECK_THROWS_AS(gp_solve(1e5, he_trap(), sp, starved), std::runtime_error);
}

TEST_CASE("integrate_box_cells: polynomial exactness and extension") {
  GpDensity d;
  d.n_rho = 5;
  d.n_z = 7;
  d.d_rho = 0.3;
  d.d_z = 0.2;
  d.values.assign(static_cast<std::size_t>(d.n_rho) * d.n_z, 0.0);
  const double R = (d.n_rho - 1) * d.d_rho;  // 1.2
  const double Z = (d.n_z - 1) * d.d_z;      // 1.2

  // 3-point Gauss-Legendre per axis is exact through degree 5, and the
  // measure adds one power of rho.
  std::array<double, 2> out{};
  integrate_box_cells(
      d, R, Z, 2,
      [](double rho, double z, std::span<double> v) {
        v[0] = 1.0;
        v[1] = rho * rho * rho * rho * z * z * z * z;
      },
      out);
  CHECK(out[0] == doctest::Approx(0.5 * R * R * Z).epsilon(1e-14));
  const double exact = (std::pow(R, 6) / 6.0) * (std::pow(Z, 5) / 5.0);
  CHECK(out[1] == doctest::Approx(exact).epsilon(1e-14));

  // Asking for a larger domain appends whole cells of the same spacing.
  std::array<double, 1> ext{};
  integrate_box_cells(
      d, R + 2.0 * d.d_rho, Z + d.d_z, 1,
      [](double, double, std::span<double> v) { v[0] = 1.0; }, ext);
  const double Rx = R + 2.0 * d.d_rho, Zx = Z + d.d_z;
  CHECK(ext[0] == doctest::Approx(0.5 * Rx * Rx * Zx).epsilon(1e-14));

  // A smooth non-polynomial integrand converges to the analytic value at
  // the rule's sixth-order rate (cells here are a very coarse 0.3 x 0.2):
  // Int rho e^{-rho^2} drho Int cos(z) dz.
  std::array<double, 1> g{};
  integrate_box_cells(
      d, R, Z, 1,
      [](double rho, double z, std::span<double> v) {
        v[0] = std::exp(-rho * rho) * std::cos(z);
      },
      g);
  const double gexact =
      0.5 * (1.0 - std::exp(-R * R)) * std::sin(Z);
  CHECK(g[0] == doctest::Approx(gexact).epsilon(1e-7));

  CHECK_THROWS_AS(
      integrate_box_cells(
          d, R, Z, 0, [](double, double, std::span<double>) {}, out),
      std::invalid_argument);
  GpDensity empty;
  CHECK_THROWS_AS(
      integrate_box_cells(
          empty, 1.0, 1.0, 1,
          [](double, double, std::span<double> v) { v[0] = 1.0; }, out),
      std::invalid_argument);
}
