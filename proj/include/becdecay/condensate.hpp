#pragma once

#include <memory>

#include "becdecay/trap.hpp"

namespace becdecay {

struct GpDensity;  // gp.hpp: interpolated |psi|^2 on a cylindrical grid

enum class ProfileKind { thomas_fermi, gross_pitaevskii };

// Immutable condensate profile: density accessor plus chemical potential.
//
// `mu` is the value used for energy bookkeeping and is floored at the trap
// ground-state energy eps0 (Thomas-Fermi sends mu -> 0 as N_C -> 0, below
// the physical minimum).  The density itself is built from the raw
// Thomas-Fermi mu_tf so that the profile stays normalized to N_C exactly;
// the two differ only for condensates of a few hundred atoms or less.
struct CondensateProfile {
  ProfileKind kind = ProfileKind::thomas_fermi;
  TrapConfig trap;
  SpeciesParams species;
  double N_C = 0.0;
  double mu = 0.0;     // reported chemical potential, >= eps0
  double mu_tf = 0.0;  // raw TF chemical potential, defines the TF density
  std::shared_ptr<const GpDensity> gp;  // set only for GP profiles

  double density(const Vec3& r) const;  // m^-3, lab frame

  // Density along the isotropic rescaled radius u (u_i = x_i w_i / wbar,
  // unit Jacobian).  A TF profile depends on position only through u, which
  // reduces every spatial integral to 1D.  Throws for GP profiles.
  double density_rescaled(double u) const;

  // True if density_rescaled is usable (profile is isotropic in u).
  bool radial() const { return kind == ProfileKind::thomas_fermi; }
};

// Thomas-Fermi profile: mu_tf = (hbar wbar / 2)(15 N_C a / a_ho)^{2/5},
// n_C(r) = max(0, (mu_tf - V(r))/U_0).
CondensateProfile tf_profile(double n_c, const TrapConfig& trap,
                             const SpeciesParams& species);

// Thomas-Fermi radii R_i = sqrt(2 mu_tf / m w_i^2): the density support,
// where quadrature domains must be split.
Vec3 condensate_boundary(const CondensateProfile& profile);

// Support radius in the rescaled coordinate u (same for all axes).
double boundary_rescaled(const CondensateProfile& profile);

}  // namespace becdecay
