#include "becdecay/condensate.hpp"

#include <cmath>
#include <stdexcept>

#include "becdecay/constants.hpp"
#include "becdecay/gp.hpp"

namespace becdecay {

double CondensateProfile::density(const Vec3& r) const {
  if (kind == ProfileKind::gross_pitaevskii) {
    const double rho = std::hypot(r[0], r[1]);
    return gp->density(rho, r[2]);
  }
  const double v = trap.potential(species.mass, r);
  return std::max(0.0, (mu_tf - v) / species.contact_interaction());
}

double CondensateProfile::density_rescaled(double u) const {
  if (!radial()) {
    throw std::logic_error("density_rescaled: GP profile is not radial in u");
  }
  const double wb = trap.omega_bar();
  const double v = 0.5 * species.mass * wb * wb * u * u;
  return std::max(0.0, (mu_tf - v) / species.contact_interaction());
}

CondensateProfile tf_profile(double n_c, const TrapConfig& trap,
                             const SpeciesParams& species) {
  if (n_c < 0.0) throw std::invalid_argument("tf_profile: negative count");
  trap.validate();
  species.validate();

  CondensateProfile p;
  p.kind = ProfileKind::thomas_fermi;
  p.trap = trap;
  p.species = species;
  p.N_C = n_c;

  const double wb = trap.omega_bar();
  const double a_ho = std::sqrt(PhysConstants::hbar / (species.mass * wb));
  p.mu_tf = 0.5 * PhysConstants::hbar * wb *
            std::pow(15.0 * n_c * species.a / a_ho, 0.4);
  p.mu = std::max(p.mu_tf, trap.ground_state_energy());
  return p;
}

Vec3 condensate_boundary(const CondensateProfile& profile) {
  const double m = profile.species.mass;
  const auto& t = profile.trap;
  auto radius = [&](double w) {
    return std::sqrt(2.0 * profile.mu_tf / (m * w * w));
  };
  return {radius(t.omega_x), radius(t.omega_y), radius(t.omega_z)};
}

double boundary_rescaled(const CondensateProfile& profile) {
  const double wb = profile.trap.omega_bar();
  return std::sqrt(2.0 * profile.mu_tf / (profile.species.mass * wb * wb));
}

}  // namespace becdecay
