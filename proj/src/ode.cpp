#include "becdecay/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace becdecay {

namespace {

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
// error weights (5th minus embedded 4th order)
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// dense-output weights
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

struct Dense {
  double t0 = 0.0, h = 0.0;
  std::vector<double> r1, r2, r3, r4, r5;

  void eval(double t, std::span<double> y) const {
    const double th = (t - t0) / h;
    const double th1 = 1.0 - th;
    for (size_t i = 0; i < r1.size(); ++i) {
      y[i] = r1[i] +
             th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
    }
  }
};

}  // namespace

OdeResult integrate_ode(const OdeRhs& rhs, std::span<const double> y0,
                        double t0, double t_end,
                        std::span<const double> out_times,
                        std::span<const EventFn> events,
                        const OdeOptions& opts) {
  const size_t n = y0.size();
  if (n == 0) throw OdeError("integrate_ode: empty state");
  if (!(t_end > t0)) throw OdeError("integrate_ode: t_end must exceed t0");
  const double span = t_end - t0;
  const double ev_tol =
      opts.event_tol_t > 0.0 ? opts.event_tol_t : 1e-9 * span;

  auto atol = [&](size_t i) {
    return opts.atol.size() == 1 ? opts.atol[0] : opts.atol.at(i);
  };

  OdeResult res;
  res.y_stop.assign(y0.begin(), y0.end());
  res.t_stop = t0;

  std::vector<double> y(y0.begin(), y0.end());
  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
  std::vector<double> ytmp(n), ynew(n), yerr(n), ybis(n);
  double t = t0;

  size_t out_idx = 0;
  auto emit = [&](double ts, std::span<const double> ys) {
    res.samples.push_back({ts, std::vector<double>(ys.begin(), ys.end())});
  };
  while (out_idx < out_times.size() && out_times[out_idx] <= t0) {
    emit(t0, y);
    ++out_idx;
  }

  auto finish = [&](double ts, std::span<const double> ys, int index,
                    std::string diag = {}) {
    res.t_stop = ts;
    res.y_stop.assign(ys.begin(), ys.end());
    res.event_index = index;
    res.diagnostic = std::move(diag);
    return res;
  };

  // events may already hold at the initial state
  try {
    for (size_t e = 0; e < events.size(); ++e) {
      if (events[e](t0, y) <= 0.0) return finish(t0, y, int(e));
    }
  } catch (const std::exception& ex) {
    return finish(t0, y, OdeResult::kRhsFailure, ex.what());
  }

  auto call = [&](double tc, std::span<const double> yc, std::vector<double>& out) {
    rhs(tc, yc, out);
    ++res.n_rhs;
  };

  try {
    call(t, y, k1);
  } catch (const std::exception& ex) {
    return finish(t, y, OdeResult::kRhsFailure, ex.what());
  }

  // initial step size (standard two-evaluation estimate)
  double h;
  {
    double d0 = 0.0, dd1 = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const double sc = atol(i) + opts.rtol * std::abs(y[i]);
      d0 += (y[i] / sc) * (y[i] / sc);
      dd1 += (k1[i] / sc) * (k1[i] / sc);
    }
    d0 = std::sqrt(d0 / double(n));
    dd1 = std::sqrt(dd1 / double(n));
    double h0 = (d0 < 1e-5 || dd1 < 1e-5) ? 1e-6 * span : 0.01 * d0 / dd1;
    h0 = std::min(h0, span);
    for (size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h0 * k1[i];
    double d2 = 0.0;
    try {
      call(t + h0, ytmp, k2);
      for (size_t i = 0; i < n; ++i) {
        const double sc = atol(i) + opts.rtol * std::abs(y[i]);
        const double df = (k2[i] - k1[i]) / sc;
        d2 += df * df;
      }
      d2 = std::sqrt(d2 / double(n)) / h0;
    } catch (const std::exception&) {
      d2 = 0.0;  // probe failed; fall back to the crude choice below
    }
    const double dm = std::max(dd1, d2);
    const double h1 =
        dm > 1e-15 ? std::pow(0.01 / dm, 0.2) : std::max(1e-6 * span, h0 * 1e3);
    h = std::min({100.0 * h0, h1, span});
    if (!(h > 0.0) || !std::isfinite(h)) h = 1e-6 * span;
  }

  Dense dense;
  dense.r1.resize(n);
  dense.r2.resize(n);
  dense.r3.resize(n);
  dense.r4.resize(n);
  dense.r5.resize(n);

  bool rejected_last = false;
  int attempt_failures = 0;
  const double eps = std::numeric_limits<double>::epsilon();

  while (t < t_end - 16.0 * eps * span) {
    if (res.n_steps + res.n_rejected >= opts.max_steps) {
      return finish(t, y, OdeResult::kRhsFailure,
                    "integrate_ode: max_steps exceeded at t=" +
                        std::to_string(t));
    }
    if (h < 16.0 * eps * std::max(std::abs(t), span)) {
      return finish(t, y, OdeResult::kRhsFailure,
                    "integrate_ode: step size underflow at t=" +
                        std::to_string(t));
    }
    if (t + h > t_end) h = t_end - t;

    bool rhs_ok = true;
    std::string rhs_diag;
    try {
      for (size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
      call(t + c2 * h, ytmp, k2);
      for (size_t i = 0; i < n; ++i)
        ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
      call(t + c3 * h, ytmp, k3);
      for (size_t i = 0; i < n; ++i)
        ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
      call(t + c4 * h, ytmp, k4);
      for (size_t i = 0; i < n; ++i)
        ytmp[i] =
            y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      call(t + c5 * h, ytmp, k5);
      for (size_t i = 0; i < n; ++i)
        ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                              a64 * k4[i] + a65 * k5[i]);
      call(t + h, ytmp, k6);
      for (size_t i = 0; i < n; ++i)
        ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] +
                              a75 * k5[i] + a76 * k6[i]);
      call(t + h, ynew, k7);
    } catch (const std::exception& ex) {
      rhs_ok = false;
      rhs_diag = ex.what();
    }
    if (!rhs_ok) {
      // trial stages may probe unreachable states (e.g. negative counts);
      // treat the throw as a rejection and retry on a shorter step
      if (++attempt_failures > 25)
        return finish(t, y, OdeResult::kRhsFailure, rhs_diag);
      ++res.n_rejected;
      rejected_last = true;
      h *= 0.2;
      continue;
    }
    attempt_failures = 0;

    double err = 0.0;
    for (size_t i = 0; i < n; ++i) {
      yerr[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                     e6 * k6[i] + e7 * k7[i]);
      const double sc =
          atol(i) + opts.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err += (yerr[i] / sc) * (yerr[i] / sc);
    }
    err = std::sqrt(err / double(n));
    if (!std::isfinite(err)) err = 1e10;

    if (err > 1.0) {
      ++res.n_rejected;
      rejected_last = true;
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      continue;
    }

    // accept: build the dense interpolant for sampling and events
    dense.t0 = t;
    dense.h = h;
    for (size_t i = 0; i < n; ++i) {
      const double ydiff = ynew[i] - y[i];
      const double bspl = h * k1[i] - ydiff;
      dense.r1[i] = y[i];
      dense.r2[i] = ydiff;
      dense.r3[i] = bspl;
      dense.r4[i] = ydiff - h * k7[i] - bspl;
      dense.r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                         d6 * k6[i] + d7 * k7[i]);
    }
    const double t_new = t + h;

    // earliest event crossing inside (t, t_new], bisected on dense output
    int fired = -1;
    double t_ev = t_new;
    try {
      for (size_t e = 0; e < events.size(); ++e) {
        dense.eval(t_ev, ybis);
        if (events[e](t_ev, ybis) > 0.0) continue;
        double lo = t, hi = t_ev;
        while (hi - lo > ev_tol) {
          const double mid = 0.5 * (lo + hi);
          dense.eval(mid, ybis);
          (events[e](mid, ybis) > 0.0 ? lo : hi) = mid;
        }
        fired = int(e);
        t_ev = hi;
      }
    } catch (const std::exception& ex) {
      return finish(t_new, ynew, OdeResult::kRhsFailure, ex.what());
    }

    while (out_idx < out_times.size() && out_times[out_idx] <= t_ev) {
      dense.eval(out_times[out_idx], ybis);
      emit(out_times[out_idx], ybis);
      ++out_idx;
    }

    if (fired >= 0) {
      dense.eval(t_ev, ybis);
      return finish(t_ev, ybis, fired);
    }

    ++res.n_steps;
    t = t_new;
    y.swap(ynew);
    k1.swap(k7);  // first-same-as-last

    const double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
    h *= std::min(rejected_last ? 1.0 : 10.0, std::max(0.2, fac));
    rejected_last = false;
  }

  // grid points within rounding of t_end that the last step fell short of
  while (out_idx < out_times.size() && out_times[out_idx] <= t_end) {
    emit(out_times[out_idx], y);
    ++out_idx;
  }
  return finish(t, y, OdeResult::kNoEvent);
}

}  // namespace becdecay
