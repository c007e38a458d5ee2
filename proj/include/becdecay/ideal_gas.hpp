#pragma once

#include "becdecay/trap.hpp"

// Non-interacting model of a condensate in equilibrium with its thermal
// cloud under pure background loss.  Keeping the two components in mutual
// equilibrium while atoms leave forces a transfer from the condensate into
// the cloud, so the condensate decays faster than exp(-t/tau).

namespace becdecay::ideal {

struct IdealState {
  double n_c = 0.0;  // condensed atoms
  double n_t = 0.0;  // thermal atoms
};

// Saturated thermal population N_T = zeta(3) (kT / hbar w)^3.
double thermal_number(double temperature, const TrapConfig& trap);

// Thermal cloud energy E_T = alpha N_T^{4/3},
// alpha = (pi^4/30) hbar w zeta(3)^{-4/3}.
double thermal_energy(double n_thermal, const TrapConfig& trap);

// Temperature at which thermal_number saturates the given total count.
double critical_temperature(double n_total, const TrapConfig& trap);

struct Rates {
  double dn_c = 0.0;
  double dn_t = 0.0;
};

// Decay rates under background loss with the cloud held saturated:
//   dN_T/dt = -(3/4) N_T / tau,   dN_C/dt = -(N_C + N_T/4) / tau.
// With exact = true the 3/4 simplification is replaced by the full factor
// (1 - x)/(4/3 - x), x = eps0 N_T / E_T, to let callers quantify the x << 1
// approximation (x is clamped to [0,1]).
Rates decay_rhs(const IdealState& state, const TrapConfig& trap,
                bool exact = false);

struct ClosedForm {
  IdealState state;
  bool exhausted = false;  // condensate fully depleted before t; n_c clamped to 0
};

// Analytic solution of decay_rhs (simplified form):
//   N_T(t) = N_T(0) e^{-3t/4tau}
//   N_C(t) = (N_C(0) + N_T(0)) e^{-t/tau} - N_T(0) e^{-3t/4tau}
ClosedForm decay_closed_form(const IdealState& initial, const TrapConfig& trap,
                             double t);

}  // namespace becdecay::ideal
