#pragma once

#include <array>

namespace becdecay {

using Vec3 = std::array<double, 3>;

/// Harmonic trap (angular frequencies, rad/s) plus the background-gas
/// trap lifetime tau (s).
struct TrapConfig {
  double omega_x = 0.0;
  double omega_y = 0.0;
  double omega_z = 0.0;
  double tau = 0.0;

  /// Geometric mean (omega_x omega_y omega_z)^(1/3).
  double omega_bar() const;
  /// Trap ground-state energy eps0 = hbar (omega_x+omega_y+omega_z)/2, J.
  double ground_state_energy() const;
  /// V(r) = m/2 (wx^2 x^2 + wy^2 y^2 + wz^2 z^2), J.
  double potential(double mass, const Vec3& r) const;
  bool axially_symmetric() const { return omega_x == omega_y; }

  /// Builds from linear frequencies in Hz (multiplies by 2 pi).
  static TrapConfig from_frequencies_hz(double fx, double fy, double fz,
                                        double tau_s);
  /// Throws std::invalid_argument unless all fields are strictly positive.
  void validate() const;
};

/// Atomic species: mass (kg), s-wave scattering length a (m), and the
/// two-/three-body inelastic rate constants chi (m^3/s), xi (m^6/s).
struct SpeciesParams {
  double mass = 0.0;
  double a = 0.0;
  double chi = 0.0;
  double xi = 0.0;

  /// Contact interaction U0 = 4 pi hbar^2 a / m, J m^3.
  double contact_interaction() const;
  void validate() const;
};

}  // namespace becdecay
