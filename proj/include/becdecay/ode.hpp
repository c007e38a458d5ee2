#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace becdecay {

using OdeRhs =
    std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

// Terminal event: integration continues while the function is positive and
// stops at its first zero crossing (located on the dense output).
using EventFn = std::function<double(double t, std::span<const double> y)>;

struct OdeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OdeOptions {
  double rtol = 1e-8;
  std::vector<double> atol = {1e-12};  // broadcast when a single entry
  double event_tol_t = 0.0;            // 0: 1e-9 * |t_end - t0|
  long max_steps = 2000000;
};

struct DenseSample {
  double t = 0.0;
  std::vector<double> y;
};

struct OdeResult {
  std::vector<DenseSample> samples;  // requested grid times, in order
  double t_stop = 0.0;
  std::vector<double> y_stop;
  int event_index = -1;  // fired event, or kNoEvent / kRhsFailure
  std::string diagnostic;
  long n_steps = 0;
  long n_rhs = 0;
  long n_rejected = 0;

  static constexpr int kNoEvent = -1;     // reached t_end
  static constexpr int kRhsFailure = -2;  // rhs threw; stopped at last state
};

// Dormand-Prince 5(4) embedded pair with first-same-as-last reuse and the
// standard quartic dense-output interpolant.  Error control uses
// sc_i = atol_i + rtol * max(|y_i|, |y_new_i|) with an RMS norm; steps
// scale by 0.9 err^(-1/5) clipped to [0.2, 10].
//
// `out_times` must be increasing and within [t0, t_end]; samples are
// emitted from the dense interpolant (t0 itself from the initial state).
// Events are checked after every accepted step and bisected to
// event_tol_t; the earliest crossing wins.  If the rhs throws, the
// integration stops cleanly at the last accepted state (kRhsFailure).
// Step-size underflow or exceeding max_steps throws OdeError.
OdeResult integrate_ode(const OdeRhs& rhs, std::span<const double> y0,
                        double t0, double t_end,
                        std::span<const double> out_times,
                        std::span<const EventFn> events,
                        const OdeOptions& opts = {});

}  // namespace becdecay
