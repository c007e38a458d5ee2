#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "becdecay/ideal_gas.hpp"
#include "becdecay/losses.hpp"
#include "becdecay/ode.hpp"

namespace becdecay {

enum class RunMode {
  full,                // coupled (N_C, T) evolution with thermal transfer
  simple_attribution,  // frozen T and cloud shape, per-event loss split
  simple_literal,      // frozen T and cloud shape, each component alone
  pure_condensate,     // no cloud at all
  ideal,               // non-interacting background-loss model
};

enum class StopReason {
  completed,            // reached t_end
  condensate_depleted,  // N_C fell below one atom
  critical_temperature, // T reached 99.9% of the ideal T_c(N)
  solver_failure,       // ill-conditioned solve / quadrature / step failure
};

const char* to_string(RunMode m);
const char* to_string(StopReason r);

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DynamicsConfig {
  TrapConfig trap;
  SpeciesParams species;
  // Condensate backend; defaults to the Thomas-Fermi profile.  The
  // GP-based backend plugs in here.
  std::function<CondensateProfile(double n_c)> make_profile;

  double ode_rtol = 1e-8;
  double atol_atoms = 1.0;   // one atom
  double atol_temp = 1e-9;   // one nanokelvin
  double quad_rtol = 1e-8;
  double rcond_floor = 1e-12;  // halt below this 2x2 condition estimate

  CondensateProfile profile(double n_c) const;
};

// One full-model derivative evaluation: equilibrium cloud, partials, loss
// rates, and the 2x2 change of variables from (Ndot, Edot) to
// (dN_C/dt, dT/dt).  rcond is |det| over the product of row norms; below
// DynamicsConfig::rcond_floor the solve throws SolverError.
struct FullDerivs {
  double dN_C = 0.0;
  double dT = 0.0;
  double Ndot = 0.0;
  double Edot = 0.0;
  double rcond = 1.0;
  LossRates losses;
  CloudPartials partials;
  EquilibriumSummary summary;
};

FullDerivs full_rhs(const EquilibriumState& state, const DynamicsConfig& cfg);

// No-transfer model derivative: temperature frozen, thermal field from the
// t=0 equilibrium rescaled by n_t / n_t0, condensate refit to the current
// n_c.  With n_t0 = 0 the cloud drops out entirely (pure-condensate mode).
struct SimpleDerivs {
  double dN_C = 0.0;
  double dN_T = 0.0;
  SpeciesRates rates;
};

SimpleDerivs simple_rhs(double n_c, double n_t,
                        const ThermalCloudField& cloud0, double n_t0,
                        AttributionMode mode, const DynamicsConfig& cfg);

struct TrajectoryPoint {
  double t = 0.0;
  double N_C = 0.0;
  double N_T = 0.0;
  double T = 0.0;    // K
  double mu = 0.0;   // J
  double E_T = 0.0;  // J
  // number-loss breakdown by order at this state, per the run's own model
  double ndot_bg = 0.0;
  double ndot_2b = 0.0;
  double ndot_3b = 0.0;
};

struct Trajectory {
  RunMode mode = RunMode::full;
  StopReason reason = StopReason::completed;
  double t_stop = 0.0;
  std::string diagnostic;
  std::vector<TrajectoryPoint> points;
  double min_rcond = 1.0;  // worst 2x2 conditioning seen (full mode)
  long n_rhs = 0;
};

// Initial condition with all three numbers resolved consistently
// beforehand (the CLI solves T from N_T or vice versa).  full/simple read
// (N_C, T), pure reads N_C, ideal reads (N_C, N_T).
struct InitialState {
  double N_C = 0.0;
  double T = 0.0;
  double N_T = 0.0;
};

// Integrate one mode to t_end, sampling on out_times (dense output).  The
// trajectory ends early on: N_C < 1, T reaching 99.9% of the ideal
// critical temperature of the current total count (full mode), or a solver
// failure; the stop state is appended as a final point when it lies beyond
// the last emitted sample.  Events are located to 1e-6 * tau in time.
Trajectory run_trajectory(const InitialState& init, RunMode mode,
                          double t_end, std::span<const double> out_times,
                          const DynamicsConfig& cfg);

}  // namespace becdecay
