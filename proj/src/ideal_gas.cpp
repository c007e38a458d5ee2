#include "becdecay/ideal_gas.hpp"

#include <cmath>
#include <stdexcept>

#include "becdecay/constants.hpp"
#include "becdecay/polylog.hpp"

namespace becdecay::ideal {

double thermal_number(double temperature, const TrapConfig& trap) {
  if (temperature < 0.0) {
    throw std::invalid_argument("thermal_number: negative temperature");
  }
  const double x = PhysConstants::k_B * temperature /
                   (PhysConstants::hbar * trap.omega_bar());
  return kZeta3 * x * x * x;
}

double thermal_energy(double n_thermal, const TrapConfig& trap) {
  if (n_thermal < 0.0) {
    throw std::invalid_argument("thermal_energy: negative count");
  }
  const double hw = PhysConstants::hbar * trap.omega_bar();
  const double alpha =
      hw * (kPi * kPi * kPi * kPi / 30.0) * std::pow(kZeta3, -4.0 / 3.0);
  return alpha * std::pow(n_thermal, 4.0 / 3.0);
}

double critical_temperature(double n_total, const TrapConfig& trap) {
  if (n_total <= 0.0) {
    throw std::invalid_argument("critical_temperature: non-positive count");
  }
  return PhysConstants::hbar * trap.omega_bar() *
         std::cbrt(n_total / kZeta3) / PhysConstants::k_B;
}

Rates decay_rhs(const IdealState& state, const TrapConfig& trap, bool exact) {
  Rates r;
  if (!exact || state.n_t <= 0.0) {
    r.dn_t = -0.75 * state.n_t / trap.tau;
    r.dn_c = -(state.n_c + 0.25 * state.n_t) / trap.tau;
    return r;
  }
  // Full energy-budget factor before the eps0 N_T / E_T << 1 simplification.
  const double x = std::min(
      1.0, trap.ground_state_energy() * state.n_t /
               thermal_energy(state.n_t, trap));
  r.dn_t = -(state.n_t / trap.tau) * (1.0 - x) / (4.0 / 3.0 - x);
  r.dn_c = -(state.n_c + state.n_t) / trap.tau - r.dn_t;
  return r;
}

ClosedForm decay_closed_form(const IdealState& initial, const TrapConfig& trap,
                             double t) {
  if (t < 0.0) throw std::invalid_argument("decay_closed_form: negative time");
  ClosedForm out;
  const double slow = std::exp(-0.75 * t / trap.tau);
  const double fast = std::exp(-t / trap.tau);
  out.state.n_t = initial.n_t * slow;
  out.state.n_c = (initial.n_c + initial.n_t) * fast - initial.n_t * slow;
  if (out.state.n_c < 0.0) {
    out.state.n_c = 0.0;
    out.exhausted = true;
  }
  return out;
}

}  // namespace becdecay::ideal
