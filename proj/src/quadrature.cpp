#include "becdecay/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace becdecay {

namespace {

// Kronrod-15 abscissae on [0,1] side and weights; even entries are the
// embedded Gauss-7 points (QUADPACK dqk15 constants).
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr int kMaxComponents = 16;

struct Interval {
  double a, b;
  std::array<double, kMaxComponents> gk;   // Kronrod estimate per component
  std::array<double, kMaxComponents> err;  // |G7 - K15| based estimate
  double priority;                         // max scaled error, for the heap
};

struct PriorityLess {
  bool operator()(const Interval& lhs, const Interval& rhs) const {
    return lhs.priority < rhs.priority;
  }
};

void gauss_kronrod_15(const VectorIntegrand& f, int n, double a, double b,
                      Interval& out) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  std::array<double, kMaxComponents> fc{};
  std::array<double, kMaxComponents> resg{};
  std::array<double, kMaxComponents> resk{};
  std::array<std::array<double, kMaxComponents>, 7> fv1{};
  std::array<std::array<double, kMaxComponents>, 7> fv2{};

  f(center, std::span<double>(fc.data(), n));
  for (int c = 0; c < n; ++c) {
    resg[c] = kWg[3] * fc[c];
    resk[c] = kWgk[7] * fc[c];
  }

  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    f(center - dx, std::span<double>(fv1[j].data(), n));
    f(center + dx, std::span<double>(fv2[j].data(), n));
    const bool gauss_node = (j % 2) == 1;
    for (int c = 0; c < n; ++c) {
      const double fsum = fv1[j][c] + fv2[j][c];
      resk[c] += kWgk[j] * fsum;
      if (gauss_node) resg[c] += kWg[j / 2] * fsum;
    }
  }

  out.a = a;
  out.b = b;
  // QUADPACK dqk15 error estimate: resasc-scaled so the estimate stays a
  // safe overbound even when the integrand is not smooth on the interval.
  for (int c = 0; c < n; ++c) {
    out.gk[c] = resk[c] * half;
    const double reskh = 0.5 * resk[c];
    double resasc = kWgk[7] * std::abs(fc[c] - reskh);
    for (int j = 0; j < 7; ++j) {
      resasc += kWgk[j] *
                (std::abs(fv1[j][c] - reskh) + std::abs(fv2[j][c] - reskh));
    }
    resasc *= std::abs(half);
    double err = std::abs((resk[c] - resg[c]) * half);
    if (resasc != 0.0 && err != 0.0) {
      err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    out.err[c] = err;
  }
}

}  // namespace

QuadratureResult integrate_adaptive(const VectorIntegrand& f, int components,
                                    std::span<const double> breakpoints,
                                    const QuadratureOptions& opts) {
  if (components < 1 || components > kMaxComponents) {
    throw std::invalid_argument("integrate_adaptive: bad component count");
  }
  if (breakpoints.size() < 2) {
    throw std::invalid_argument("integrate_adaptive: need at least two breakpoints");
  }

  const int n = components;
  // Max-heap on `priority` over a plain vector so the whole population can
  // be re-scanned when tolerances are re-based.
  std::vector<Interval> heap;
  const PriorityLess less;

  std::array<double, kMaxComponents> total{};
  std::array<double, kMaxComponents> total_err{};

  auto refresh_totals = [&] {
    total.fill(0.0);
    total_err.fill(0.0);
    for (const Interval& iv : heap) {
      for (int c = 0; c < n; ++c) {
        total[c] += iv.gk[c];
        total_err[c] += iv.err[c];
      }
    }
  };
  auto priority_of = [&](const Interval& iv) {
    double p = 0.0;
    for (int c = 0; c < n; ++c) {
      const double scale = std::max(opts.rtol * std::abs(total[c]), opts.atol);
      p = std::max(p, scale > 0.0 ? iv.err[c] / scale : iv.err[c]);
    }
    return p;
  };
  auto converged = [&] {
    for (int c = 0; c < n; ++c) {
      const double goal = std::max(opts.rtol * std::abs(total[c]), opts.atol);
      if (total_err[c] > goal) return false;
    }
    return true;
  };

  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i] < breakpoints[i + 1])) {
      throw std::invalid_argument("integrate_adaptive: breakpoints not ascending");
    }
    Interval iv;
    gauss_kronrod_15(f, n, breakpoints[i], breakpoints[i + 1], iv);
    heap.push_back(iv);
  }
  refresh_totals();
  for (Interval& iv : heap) iv.priority = priority_of(iv);
  std::make_heap(heap.begin(), heap.end(), less);

  int count = static_cast<int>(heap.size());
  int since_refresh = 0;
  while (!converged()) {
    if (count >= opts.max_intervals) {
      // Incremental error totals drift; recheck against exact sums before
      // giving up.
      refresh_totals();
      if (converged()) break;
      const auto& w = heap.front();
      throw QuadratureError("adaptive quadrature failed to converge", w.a, w.b,
                            *std::max_element(w.err.begin(), w.err.begin() + n));
    }
    std::pop_heap(heap.begin(), heap.end(), less);
    Interval worst = heap.back();
    heap.pop_back();

    const double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b)) {
      // Cannot subdivide further in double precision; treat its estimate as
      // final and drop its error from the accounting.
      for (int c = 0; c < n; ++c) worst.err[c] = 0.0;
      worst.priority = 0.0;
      heap.push_back(worst);
      std::push_heap(heap.begin(), heap.end(), less);
      refresh_totals();
      continue;
    }

    Interval left, right;
    gauss_kronrod_15(f, n, worst.a, mid, left);
    gauss_kronrod_15(f, n, mid, worst.b, right);
    ++count;

    for (int c = 0; c < n; ++c) {
      total[c] += left.gk[c] + right.gk[c] - worst.gk[c];
      total_err[c] += left.err[c] + right.err[c] - worst.err[c];
    }
    left.priority = priority_of(left);
    right.priority = priority_of(right);
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), less);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), less);

    if (++since_refresh >= 256) {
      // Periodically rebuild exact totals and re-rank all intervals so that
      // neither float drift nor stale priorities can stall progress.
      refresh_totals();
      for (Interval& iv : heap) iv.priority = priority_of(iv);
      std::make_heap(heap.begin(), heap.end(), less);
      since_refresh = 0;
    }
  }

  std::sort(heap.begin(), heap.end(),
            [](const Interval& x, const Interval& y) { return x.a < y.a; });

  QuadratureResult result;
  result.values.assign(n, 0.0);
  result.errors.assign(n, 0.0);
  result.intervals = static_cast<int>(heap.size());
  for (const Interval& iv : heap) {
    for (int c = 0; c < n; ++c) {
      result.values[c] += iv.gk[c];
      result.errors[c] += iv.err[c];
    }
  }
  return result;
}

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, const QuadratureOptions& opts) {
  const std::array<double, 2> pts = {a, b};
  auto wrapped = [&f](double x, std::span<double> out) { out[0] = f(x); };
  return integrate_adaptive(wrapped, 1, pts, opts).values[0];
}

}  // namespace becdecay
