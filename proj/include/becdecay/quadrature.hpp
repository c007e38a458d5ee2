#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace becdecay {

/// Thrown when adaptive subdivision runs out of intervals before reaching
/// the requested tolerance; carries the worst remaining subinterval.
struct QuadratureError : std::runtime_error {
  QuadratureError(const std::string& msg, double a, double b, double err)
      : std::runtime_error(msg), worst_a(a), worst_b(b), worst_error(err) {}
  double worst_a;
  double worst_b;
  double worst_error;
};

struct QuadratureOptions {
  double rtol = 1e-8;
  double atol = 0.0;  // per-component absolute floor
  int max_intervals = 4000;
};

struct QuadratureResult {
  std::vector<double> values;
  std::vector<double> errors;  // per-component error estimates
  int intervals = 0;
};

/// Evaluates out[0..n) at x; component count fixed over the whole call.
using VectorIntegrand = std::function<void(double x, std::span<double> out)>;

/// Adaptive Gauss-Kronrod 7/15 over the segments defined by `breakpoints`
/// (ascending; at least two entries).  All components share the node
/// evaluations; an interval is split while any component still violates
/// max(rtol*|integral|, atol).  The final sums run over intervals sorted
/// by left endpoint, so the result does not depend on subdivision order.
QuadratureResult integrate_adaptive(const VectorIntegrand& f, int components,
                                    std::span<const double> breakpoints,
                                    const QuadratureOptions& opts = {});

/// Scalar convenience wrapper.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, const QuadratureOptions& opts = {});

}  // namespace becdecay
