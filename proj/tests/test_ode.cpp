#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "becdecay/ode.hpp"

using namespace becdecay;

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

const OdeRhs kExpDecay = [](double, std::span<const double> y,
                            std::span<double> dy) { dy[0] = -y[0]; };

}  // namespace

TEST_CASE("exponential decay to the requested tolerance") {
  OdeOptions opts;
  opts.rtol = 1e-10;
  opts.atol = {1e-14};
  const double y0[] = {1.0};
  const auto grid = linspace(0.0, 10.0, 41);
  const auto res = integrate_ode(kExpDecay, y0, 0.0, 10.0, grid, {}, opts);

  REQUIRE(res.samples.size() == 41);
  CHECK(res.event_index == OdeResult::kNoEvent);
  for (const auto& s : res.samples) {
    CHECK(s.y[0] == doctest::Approx(std::exp(-s.t)).epsilon(1e-9));
  }
  CHECK(res.t_stop == doctest::Approx(10.0));
  CHECK(res.n_rhs < 2000);
}

TEST_CASE("dense output is accurate between steps") {
  // sample on a grid much finer than the step size the controller picks
  OdeOptions opts;
  opts.rtol = 1e-8;
  opts.atol = {1e-12};
  const double y0[] = {1.0, 0.0};
  const OdeRhs osc = [](double, std::span<const double> y,
                        std::span<double> dy) {
    dy[0] = y[1];
    dy[1] = -y[0];
  };
  const auto grid = linspace(0.0, 20.0, 2001);
  const auto res = integrate_ode(osc, y0, 0.0, 20.0, grid, {}, opts);
  REQUIRE(res.samples.size() == 2001);
  double worst = 0.0;
  for (const auto& s : res.samples) {
    worst = std::max(worst, std::abs(s.y[0] - std::cos(s.t)));
    worst = std::max(worst, std::abs(s.y[1] + std::sin(s.t)));
  }
  CHECK(worst < 1e-6);  // interpolant is one order below the step error
}

TEST_CASE("tightening rtol tightens the answer") {
  const double y0[] = {1.0};
  OdeOptions loose, tight;
  loose.rtol = 1e-6;
  tight.rtol = 1e-12;
  loose.atol = tight.atol = {1e-16};
  const auto rl = integrate_ode(kExpDecay, y0, 0.0, 5.0, {}, {}, loose);
  const auto rt = integrate_ode(kExpDecay, y0, 0.0, 5.0, {}, {}, tight);
  const double exact = std::exp(-5.0);
  CHECK(std::abs(rt.y_stop[0] - exact) < std::abs(rl.y_stop[0] - exact));
  CHECK(rt.y_stop[0] == doctest::Approx(exact).epsilon(1e-11));
}

TEST_CASE("terminal event located by bisection") {
  const double y0[] = {1.0};
  OdeOptions opts;
  opts.rtol = 1e-10;
  opts.atol = {1e-14};
  opts.event_tol_t = 1e-10;
  const EventFn half = [](double, std::span<const double> y) {
    return y[0] - 0.5;
  };
  const std::vector<EventFn> events = {half};
  const auto grid = linspace(0.0, 10.0, 101);
  const auto res = integrate_ode(kExpDecay, y0, 0.0, 10.0, grid, events, opts);

  CHECK(res.event_index == 0);
  CHECK(res.t_stop == doctest::Approx(std::log(2.0)).epsilon(1e-8));
  CHECK(res.y_stop[0] == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(res.y_stop[0] <= 0.5);  // stops on the crossed side
  // no samples beyond the stop time
  for (const auto& s : res.samples) CHECK(s.t <= res.t_stop);
  CHECK(res.samples.size() == 7);  // 0.0 .. 0.6
}

TEST_CASE("event already satisfied at t0 stops immediately") {
  const double y0[] = {0.25};
  const EventFn half = [](double, std::span<const double> y) {
    return y[0] - 0.5;
  };
  const std::vector<EventFn> events = {half};
  const auto res = integrate_ode(kExpDecay, y0, 0.0, 1.0, {}, events, {});
  CHECK(res.event_index == 0);
  CHECK(res.t_stop == 0.0);
  CHECK(res.n_steps == 0);
}

TEST_CASE("earliest of several events wins") {
  const double y0[] = {1.0};
  const EventFn late = [](double, std::span<const double> y) {
    return y[0] - 0.25;  // crosses at t = ln 4
  };
  const EventFn early = [](double, std::span<const double> y) {
    return y[0] - 0.5;  // crosses at t = ln 2
  };
  const std::vector<EventFn> events = {late, early};
  OdeOptions opts;
  opts.event_tol_t = 1e-9;
  const auto res = integrate_ode(kExpDecay, y0, 0.0, 10.0, {}, events, opts);
  CHECK(res.event_index == 1);
  CHECK(res.t_stop == doctest::Approx(std::log(2.0)).epsilon(1e-6));
}

TEST_CASE("throwing rhs ends the run at the last good state") {
  // the stepper retries on shorter steps, creeps up to the wall, and
  // reports the stall in-band so accumulated samples survive
  const OdeRhs bad = [](double t, std::span<const double> y,
                        std::span<double> dy) {
    if (t > 1.0) throw std::runtime_error("wall at t=1");
    dy[0] = -y[0];
  };
  const double y0[] = {1.0};
  const std::vector<double> grid{0.0, 0.25, 0.5, 0.75, 1.5};
  const auto res = integrate_ode(bad, y0, 0.0, 2.0, grid, {}, {});
  CHECK(res.event_index == OdeResult::kRhsFailure);
  CHECK(!res.diagnostic.empty());
  CHECK(res.t_stop <= 1.0);
  CHECK(res.t_stop > 0.99);  // got close before giving up
  CHECK(res.y_stop[0] == doctest::Approx(std::exp(-res.t_stop)).epsilon(1e-6));
  CHECK(res.samples.size() == 4);  // grid points before the wall were emitted
}

TEST_CASE("a recoverable rhs throw is stepped over") {
  // a single flaky evaluation must cost one retry, not the whole run
  int calls = 0;
  const OdeRhs flaky = [&calls](double, std::span<const double> y,
                                std::span<double> dy) {
    if (++calls == 3) throw std::runtime_error("transient glitch");
    dy[0] = -y[0];
  };
  const double y0[] = {1.0};
  const auto res = integrate_ode(flaky, y0, 0.0, 1.0, {}, {}, {});
  CHECK(res.event_index == OdeResult::kNoEvent);
  CHECK(res.n_rejected >= 1);
  CHECK(res.y_stop[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
}

TEST_CASE("non-finite rhs forces step underflow") {
  const OdeRhs nan_wall = [](double t, std::span<const double> y,
                             std::span<double> dy) {
    dy[0] = -y[0] * std::sqrt(1.0 - t);  // NaN past t = 1
  };
  const double y0[] = {1.0};
  const auto res = integrate_ode(nan_wall, y0, 0.0, 2.0, {}, {}, {});
  CHECK(res.event_index == OdeResult::kRhsFailure);
  CHECK(res.diagnostic.find("underflow") != std::string::npos);
  CHECK(res.t_stop <= 1.0);
}

TEST_CASE("max_steps is enforced") {
  OdeOptions opts;
  opts.max_steps = 10;
  opts.rtol = 1e-13;
  opts.atol = {1e-16};
  const double y0[] = {1.0, 0.0};
  const OdeRhs osc = [](double, std::span<const double> y,
                        std::span<double> dy) {
    dy[0] = y[1];
    dy[1] = -y[0];
  };
  const auto res = integrate_ode(osc, y0, 0.0, 1000.0, {}, {}, opts);
  CHECK(res.event_index == OdeResult::kRhsFailure);
  CHECK(res.diagnostic.find("max_steps") != std::string::npos);
}

TEST_CASE("per-component absolute tolerances are honored") {
  // second component lives at 1e-9 scale; a scalar atol of 1 would ignore it
  const OdeRhs two_scales = [](double, std::span<const double> y,
                               std::span<double> dy) {
    dy[0] = -y[0];
    dy[1] = -2.0 * y[1];
  };
  const double y0[] = {1e6, 1e-9};
  OdeOptions opts;
  opts.rtol = 1e-10;
  opts.atol = {1.0, 1e-18};
  const auto res = integrate_ode(two_scales, y0, 0.0, 3.0, {}, {}, opts);
  CHECK(res.y_stop[0] == doctest::Approx(1e6 * std::exp(-3.0)).epsilon(1e-8));
  CHECK(res.y_stop[1] ==
        doctest::Approx(1e-9 * std::exp(-6.0)).epsilon(1e-6));
}
