#pragma once

#include <functional>

#include "becdecay/condensate.hpp"
#include "becdecay/quadrature.hpp"
#include "becdecay/trap.hpp"

namespace becdecay {

// System state below T_c: condensate count and temperature are the two
// independent variables; everything else follows from equilibrium.
struct EquilibriumState {
  double N_C = 0.0;
  double T = 0.0;  // K
};

struct CloudPoint {
  double n_t = 0.0;  // m^-3
  double e_t = 0.0;  // J m^-3
  bool clamped = false;  // fugacity hit 1 and was clamped
};

// Semiclassical thermal-cloud densities around a fixed condensate profile:
//   n_T = lambda^-3 g_{3/2}(z),  z = exp(-(V_eff - mu)/kT)
//   e_T = (3/2) kT lambda^-3 g_{5/2}(z) + V_eff n_T
// with V_eff = V + 2 U_0 n_C.  Inside a TF condensate V_eff - mu reduces to
// |V - mu|, so for TF profiles the whole field is a function of the
// rescaled radius u alone.
//
// The field is immutable.  `scale` multiplies both densities; the
// frozen-shape evolution mode uses it to shrink a fixed t=0 cloud by
// N_T(t)/N_T(0) without re-solving equilibrium.
class ThermalCloudField {
 public:
  ThermalCloudField() = default;
  ThermalCloudField(const EquilibriumState& state, CondensateProfile profile,
                    double scale = 1.0);

  CloudPoint at(const Vec3& r) const;
  CloudPoint at_rescaled(double u) const;  // TF profiles only

  double n_t(const Vec3& r) const { return at(r).n_t; }
  double e_t(const Vec3& r) const { return at(r).e_t; }

  const EquilibriumState& state() const { return state_; }
  const CondensateProfile& profile() const { return profile_; }
  double mu() const { return profile_.mu; }
  double lambda_dB() const { return lambda_; }
  double scale() const { return scale_; }
  bool radial() const { return profile_.radial(); }

  ThermalCloudField with_scale(double s) const;

  // Cutoff radius in u where V - mu = 40 kT (fugacity ~ e^-40); density
  // beyond it is below 1e-12 of the integral.
  double cutoff_rescaled() const;

 private:
  CloudPoint eval(double v_eff, double arg) const;

  EquilibriumState state_;
  CondensateProfile profile_;
  double scale_ = 1.0;
  double lambda_ = 0.0;      // de Broglie wavelength
  double lambda3inv_ = 0.0;  // lambda^-3
  double kt_ = 0.0;
};

struct EquilibriumSummary {
  double mu = 0.0;
  double N_T = 0.0;
  double E_T = 0.0;
  double N_T_err = 0.0;  // quadrature error estimates
  double E_T_err = 0.0;
  double lambda_dB = 0.0;
  long clamp_events = 0;  // z > 1 clamps seen during the integration
  ThermalCloudField field;
};

// Quadrature breakpoints in u for fields built around `profile`, capped at
// u_max: the TF surface (kink / sqrt cusp) and, when mu sits on the
// ground-state floor, the edges of the z = 1 clamp shell.  Sorted,
// starting at 0 and ending at u_max.
std::vector<double> radial_breakpoints(const CondensateProfile& profile,
                                       double u_max);

// N_T(N_C,T) and E_T(N_C,T) by adaptive quadrature (single shared pass for
// both).  TF profiles integrate in 1D over u with a breakpoint at the TF
// radius; GP profiles integrate over the (rho, z) half-plane.
EquilibriumSummary integrate_cloud(const EquilibriumState& state,
                                   const CondensateProfile& profile,
                                   const QuadratureOptions& opts = {});

// Re-derives a condensate profile when N_C changes during differentiation;
// defaults to tf_profile with the trap/species of the current profile.
using ProfileFactory = std::function<CondensateProfile(double n_c)>;

struct CloudPartials {
  double dNT_dT = 0.0;
  double dNT_dNC = 0.0;
  double dET_dT = 0.0;
  double dET_dNC = 0.0;
  bool one_sided = false;  // fallback used (N_C too small for central steps)
};

// Central finite differences of integrate_cloud with relative steps 1e-4
// in T and N_C; the T pair is Richardson-extrapolated once (it reuses the
// profile), the N_C pair pays one refit per evaluation and stays plain
// central.  Refits run serially in a fixed order; the independent
// integrations run concurrently when OpenMP is enabled, with a fixed
// combination order, so results do not depend on thread count.
CloudPartials cloud_partials(const EquilibriumState& state,
                             const CondensateProfile& profile,
                             const ProfileFactory& refit = {},
                             const QuadratureOptions& opts = {});

// Temperature at which the equilibrium cloud around the given condensate
// holds exactly n_t_target atoms.  Bisection on [1 nK, 10 T_c^ideal] to
// 1e-10 relative; the condensate profile is fixed (it does not depend on
// T).  The two-argument form builds the TF profile itself.
double solve_temperature(double n_t_target, const CondensateProfile& profile,
                         const QuadratureOptions& opts = {});
double solve_temperature(double n_c, double n_t_target, const TrapConfig& trap,
                         const SpeciesParams& species);

}  // namespace becdecay
