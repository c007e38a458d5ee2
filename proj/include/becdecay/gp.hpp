#pragma once

#include <functional>
#include <span>
#include <vector>

#include "becdecay/condensate.hpp"
#include "becdecay/trap.hpp"

namespace becdecay {

// Condensate density |psi|^2 sampled on a uniform cylindrical (rho, z) grid
// covering one z half-space; the ground state is even in z.  Outside the
// grid the density is zero.
struct GpDensity {
  int n_rho = 0, n_z = 0;        // node counts (rho: 0..n_rho-1, z likewise)
  double d_rho = 0.0, d_z = 0.0; // node spacings, m
  std::vector<double> values;    // density at (i*d_rho, j*d_z), row-major i*n_z+j

  double density(double rho, double z) const;  // bilinear, m^-3
};

struct GpGrid {
  int n_rho = 96;
  int n_z = 320;
  // Box half-size as a multiple of the larger of the TF radius and the
  // harmonic-oscillator length along each direction.
  double extent = 1.6;
  int max_steps = 400000;
  double mu_rate_tol = 1e-9;  // |d mu / mu| per unit imaginary time
};

// Ground state of the stationary GP equation by imaginary-time propagation
// on a 2D cylindrical grid (requires omega_x == omega_y), renormalizing to
// N_C every step.  mu is evaluated from the GP functional
//   mu = Int psi* (H + U_0 |psi|^2) psi d3r / N_C.
// Throws std::runtime_error on non-convergence and std::invalid_argument
// for non-axially-symmetric traps.
CondensateProfile gp_solve(double n_c, const TrapConfig& trap,
                           const SpeciesParams& species,
                           const GpGrid& grid = {});

// Fixed-rule cylindrical integral of a vector integrand over the sampled
// box, volume element folded in:
//   out[k] = Int Int f_k(rho, z) rho drho dz,  rho in [0, rho_max], z in
// [0, z_max], via a 3-point Gauss-Legendre product rule in every grid cell.
// A sampled density is only piecewise bilinear, so adaptive quadrature
// stalls trying to certify tolerances across cell boundaries; integrals of
// fields built on one should use this rule inside the box and adaptive
// panels outside, where the density is identically zero.  rho_max / z_max
// may extend past the sampled box; whole cells of the same spacing are
// appended to cover them.  The integrand must be thread-safe.
void integrate_box_cells(
    const GpDensity& d, double rho_max, double z_max, int components,
    const std::function<void(double, double, std::span<double>)>& f,
    std::span<double> out);

}  // namespace becdecay
