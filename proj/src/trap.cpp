#include "becdecay/trap.hpp"

#include <cmath>
#include <stdexcept>

#include "becdecay/constants.hpp"

namespace becdecay {

double TrapConfig::omega_bar() const {
  return std::cbrt(omega_x * omega_y * omega_z);
}

double TrapConfig::ground_state_energy() const {
  return 0.5 * PhysConstants::hbar * (omega_x + omega_y + omega_z);
}

double TrapConfig::potential(double mass, const Vec3& r) const {
  return 0.5 * mass *
         (omega_x * omega_x * r[0] * r[0] + omega_y * omega_y * r[1] * r[1] +
          omega_z * omega_z * r[2] * r[2]);
}

TrapConfig TrapConfig::from_frequencies_hz(double fx, double fy, double fz,
                                           double tau_s) {
  return TrapConfig{2.0 * kPi * fx, 2.0 * kPi * fy, 2.0 * kPi * fz, tau_s};
}

void TrapConfig::validate() const {
  if (!(omega_x > 0.0) || !(omega_y > 0.0) || !(omega_z > 0.0)) {
    throw std::invalid_argument("trap frequencies must be strictly positive");
  }
  if (!(tau > 0.0)) {
    throw std::invalid_argument("trap lifetime tau must be strictly positive");
  }
}

double SpeciesParams::contact_interaction() const {
  return 4.0 * kPi * PhysConstants::hbar * PhysConstants::hbar * a / mass;
}

void SpeciesParams::validate() const {
  if (!(mass > 0.0)) throw std::invalid_argument("species mass must be positive");
  if (!(a > 0.0)) throw std::invalid_argument("scattering length must be positive");
  if (chi < 0.0) throw std::invalid_argument("two-body rate chi must be >= 0");
  if (xi < 0.0) throw std::invalid_argument("three-body rate xi must be >= 0");
}

}  // namespace becdecay
