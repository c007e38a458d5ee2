#include "becdecay/thermal_cloud.hpp"

#include <array>
#include <atomic>
#include <cmath>
#include <stdexcept>

#include "becdecay/constants.hpp"
#include "becdecay/gp.hpp"
#include "becdecay/polylog.hpp"

namespace becdecay {

namespace {
// Shared clamp tally for one integration pass.  The box-cell pass evaluates
// the integrand from several threads, so the counter is atomic; the set of
// evaluation points is fixed, which keeps the tally deterministic.
struct ClampTally {
  std::atomic<long> events{0};
};
}  // namespace

ThermalCloudField::ThermalCloudField(const EquilibriumState& state,
                                     CondensateProfile profile, double scale)
    : state_(state), profile_(std::move(profile)), scale_(scale) {
  if (!(state.T > 0.0)) {
    throw std::invalid_argument("ThermalCloudField: temperature must be > 0");
  }
  kt_ = PhysConstants::k_B * state.T;
  lambda_ = std::sqrt(2.0 * kPi * PhysConstants::hbar * PhysConstants::hbar /
                      (profile_.species.mass * kt_));
  lambda3inv_ = 1.0 / (lambda_ * lambda_ * lambda_);
}

CloudPoint ThermalCloudField::eval(double v_eff, double arg) const {
  CloudPoint p;
  if (arg < 0.0) {
    arg = 0.0;
    p.clamped = true;
  }
  const double z = std::exp(-arg / kt_);
  const double g32 = polylog(1.5, z);
  p.n_t = scale_ * lambda3inv_ * g32;
  p.e_t = scale_ * lambda3inv_ * (1.5 * kt_ * polylog(2.5, z) + v_eff * g32);
  return p;
}

CloudPoint ThermalCloudField::at(const Vec3& r) const {
  const double v = profile_.trap.potential(profile_.species.mass, r);
  const double v_eff =
      v + 2.0 * profile_.species.contact_interaction() * profile_.density(r);
  return eval(v_eff, v_eff - profile_.mu);
}

CloudPoint ThermalCloudField::at_rescaled(double u) const {
  const double wb = profile_.trap.omega_bar();
  const double v = 0.5 * profile_.species.mass * wb * wb * u * u;
  const double v_eff = v + 2.0 * profile_.species.contact_interaction() *
                               profile_.density_rescaled(u);
  return eval(v_eff, v_eff - profile_.mu);
}

ThermalCloudField ThermalCloudField::with_scale(double s) const {
  ThermalCloudField f(*this);
  f.scale_ = s;
  return f;
}

double ThermalCloudField::cutoff_rescaled() const {
  const double wb = profile_.trap.omega_bar();
  return std::sqrt(2.0 * (profile_.mu + 40.0 * kt_) /
                   (profile_.species.mass * wb * wb));
}

std::vector<double> radial_breakpoints(const CondensateProfile& profile,
                                       double u_max) {
  std::vector<double> pts = {0.0};
  auto add = [&](double u) {
    if (u > pts.back() && u < u_max) pts.push_back(u);
  };
  const double u_r = boundary_rescaled(profile);
  const double m = profile.species.mass;
  const double wb2 = profile.trap.omega_bar() * profile.trap.omega_bar();
  if (profile.mu > profile.mu_tf) {
    // mu is floored above the TF value: the fugacity clamps to 1 on a shell
    // |V - mu_tf| < mu - mu_tf whose edges are sqrt-cusps of g_{3/2}.
    const double lo = 2.0 * profile.mu_tf - profile.mu;
    if (lo > 0.0) add(std::sqrt(2.0 * lo / (m * wb2)));
    add(u_r);
    add(std::sqrt(2.0 * profile.mu / (m * wb2)));
  } else {
    add(u_r);  // TF surface: kink in V_eff and cusp in the densities
  }
  pts.push_back(u_max);
  return pts;
}

namespace {

EquilibriumSummary integrate_cloud_radial(const ThermalCloudField& field,
                                          const QuadratureOptions& opts) {
  const auto& prof = field.profile();
  const std::vector<double> pts =
      radial_breakpoints(prof, field.cutoff_rescaled());

  ClampTally tally;
  auto f = [&field, &tally](double u, std::span<double> out) {
    const CloudPoint p = field.at_rescaled(u);
    if (p.clamped) ++tally.events;
    out[0] = p.n_t * u * u;
    out[1] = p.e_t * u * u;
  };
  const auto res = integrate_adaptive(f, 2, pts, opts);

  EquilibriumSummary s;
  s.mu = field.mu();
  s.lambda_dB = field.lambda_dB();
  s.N_T = 4.0 * kPi * res.values[0];
  s.E_T = 4.0 * kPi * res.values[1];
  s.N_T_err = 4.0 * kPi * res.errors[0];
  s.E_T_err = 4.0 * kPi * res.errors[1];
  s.clamp_events = tally.events;
  s.field = field;
  return s;
}

EquilibriumSummary integrate_cloud_cylindrical(const ThermalCloudField& field,
                                               const QuadratureOptions& opts) {
  const auto& prof = field.profile();
  const auto& trap = prof.trap;
  if (!trap.axially_symmetric()) {
    throw std::invalid_argument(
        "integrate_cloud: non-radial profiles need an axially symmetric trap");
  }
  if (!prof.gp) {
    throw std::logic_error(
        "integrate_cloud: non-radial profile carries no sampled density");
  }
  const double m = prof.species.mass;
  const double kt = PhysConstants::k_B * field.state().T;
  const double e_cut = prof.mu + 40.0 * kt;
  const double rho_cut = std::sqrt(2.0 * e_cut / (m * trap.omega_x * trap.omega_x));
  const double z_cut = std::sqrt(2.0 * e_cut / (m * trap.omega_z * trap.omega_z));

  ClampTally tally;
  auto eval2 = [&](double rho, double z, std::span<double> out) {
    const CloudPoint p = field.at({rho, 0.0, z});
    if (p.clamped) ++tally.events;
    out[0] = p.n_t;
    out[1] = p.e_t;
  };

  // Inside the sampled box the condensate density is bilinear per cell, so
  // adaptive refinement stalls on the cell boundaries; use the fixed
  // cell-aligned rule there.
  const GpDensity& gp = *prof.gp;
  const double rho_box = (gp.n_rho - 1) * gp.d_rho;
  const double z_box = (gp.n_z - 1) * gp.d_z;
  std::array<double, 2> vals{};
  integrate_box_cells(gp, rho_box, z_box, 2, eval2, vals);

  // Outside the box the condensate density vanishes and the integrand is
  // smooth except for the sqrt cusp on the V = mu surface where a floored
  // chemical potential clamps the fugacity.
  std::array<double, 2> errs{};
  QuadratureOptions inner_opts = opts;
  inner_opts.rtol = 0.1 * opts.rtol;
  auto clamp_edge = [&](double e_left, double w) {
    return e_left > 0.0 ? std::sqrt(2.0 * e_left / (m * w * w)) : 0.0;
  };
  auto rect = [&](double rho_lo, double rho_hi, double z_lo, double z_hi) {
    if (!(rho_hi > rho_lo) || !(z_hi > z_lo)) return;
    auto outer = [&](double rho, std::span<double> out) {
      std::vector<double> zpts = {z_lo};
      const double zc =
          clamp_edge(prof.mu - 0.5 * m * trap.omega_x * trap.omega_x * rho * rho,
                     trap.omega_z);
      if (zc > z_lo && zc < z_hi) zpts.push_back(zc);
      zpts.push_back(z_hi);
      auto inner = [&](double z, std::span<double> v) { eval2(rho, z, v); };
      const auto res = integrate_adaptive(inner, 2, zpts, inner_opts);
      out[0] = rho * res.values[0];
      out[1] = rho * res.values[1];
    };
    std::vector<double> rpts = {rho_lo};
    const double rc = clamp_edge(prof.mu, trap.omega_x);
    if (rc > rho_lo && rc < rho_hi) rpts.push_back(rc);
    rpts.push_back(rho_hi);
    const auto res = integrate_adaptive(outer, 2, rpts, opts);
    for (int k = 0; k < 2; ++k) {
      vals[k] += res.values[k];
      errs[k] += res.errors[k];
    }
  };
  rect(rho_box, rho_cut, 0.0, z_cut);
  rect(0.0, std::min(rho_box, rho_cut), z_box, z_cut);

  EquilibriumSummary s;
  s.mu = field.mu();
  s.lambda_dB = field.lambda_dB();
  s.N_T = 4.0 * kPi * vals[0];
  s.E_T = 4.0 * kPi * vals[1];
  s.N_T_err = 4.0 * kPi * errs[0];
  s.E_T_err = 4.0 * kPi * errs[1];
  s.clamp_events = tally.events;
  s.field = field;
  return s;
}

}  // namespace

EquilibriumSummary integrate_cloud(const EquilibriumState& state,
                                   const CondensateProfile& profile,
                                   const QuadratureOptions& opts) {
  ThermalCloudField field(state, profile);
  if (field.radial()) return integrate_cloud_radial(field, opts);
  return integrate_cloud_cylindrical(field, opts);
}

CloudPartials cloud_partials(const EquilibriumState& state,
                             const CondensateProfile& profile,
                             const ProfileFactory& refit,
                             const QuadratureOptions& opts) {
  if (!(state.T > 0.0)) {
    throw std::invalid_argument("cloud_partials: temperature must be > 0");
  }
  ProfileFactory make = refit;
  if (!make) {
    const TrapConfig trap = profile.trap;
    const SpeciesParams species = profile.species;
    make = [trap, species](double n) { return tf_profile(n, trap, species); };
  }

  // Differences ride on top of quadrature noise; integrate tighter than the
  // caller asked so the noise stays well below the step response.
  QuadratureOptions tight = opts;
  tight.rtol = std::min(opts.rtol, 1e-10);

  const double h_t = 1e-4 * state.T;
  const bool one_sided = state.N_C < 10.0;
  const double h_n = one_sided ? 1.0 : 1e-4 * state.N_C;

  // Evaluation points: 4 in T (same profile), and in N_C either 4 central
  // or base + 2 forward points.  Refits happen here, serially and in a
  // fixed order: a profile factory may keep per-thread state (the GP warm
  // start), and results must not depend on which thread runs which job.
  struct Job {
    EquilibriumState st;
    CondensateProfile prof;
  };
  std::array<Job, 9> jobs;
  int njobs = 0;
  auto add = [&](double n, double t, bool keep_profile) {
    jobs[njobs++] = Job{{n, t}, keep_profile ? profile : make(n)};
  };
  add(state.N_C, state.T + h_t, true);        // 0
  add(state.N_C, state.T - h_t, true);        // 1
  add(state.N_C, state.T + 0.5 * h_t, true);  // 2
  add(state.N_C, state.T - 0.5 * h_t, true);  // 3
  // T steps reuse the profile, so the halved-step Richardson pair above is
  // free; N_C steps pay one refit each (expensive for the GP backend) and
  // the plain central difference is already ~1e-8 relative at this h.
  if (!one_sided) {
    add(state.N_C + h_n, state.T, false);  // 4
    add(state.N_C - h_n, state.T, false);  // 5
  } else {
    add(state.N_C, state.T, false);              // 4 (base)
    add(state.N_C + h_n, state.T, false);        // 5
    add(state.N_C + 0.5 * h_n, state.T, false);  // 6
  }

  std::array<double, 9> nt{}, et{};
  std::array<std::exception_ptr, 9> errors{};
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int i = 0; i < njobs; ++i) {
    try {
      const Job& j = jobs[i];
      const auto s = integrate_cloud(j.st, j.prof, tight);
      nt[i] = s.N_T;
      et[i] = s.E_T;
    } catch (...) {
      errors[i] = std::current_exception();  // cannot cross the omp region
    }
  }
  for (int i = 0; i < njobs; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
  }

  // Central difference with one Richardson step: (4 D(h/2) - D(h)) / 3.
  auto central = [](double fp, double fm, double fp2, double fm2, double h) {
    const double d1 = (fp - fm) / (2.0 * h);
    const double d2 = (fp2 - fm2) / h;  // step h/2
    return (4.0 * d2 - d1) / 3.0;
  };
  // One-sided forward counterpart: 2 D(h/2) - D(h).
  auto forward = [](double f0, double fp, double fp2, double h) {
    const double d1 = (fp - f0) / h;
    const double d2 = (fp2 - f0) / (0.5 * h);
    return 2.0 * d2 - d1;
  };

  CloudPartials out;
  out.one_sided = one_sided;
  out.dNT_dT = central(nt[0], nt[1], nt[2], nt[3], h_t);
  out.dET_dT = central(et[0], et[1], et[2], et[3], h_t);
  if (!one_sided) {
    out.dNT_dNC = (nt[4] - nt[5]) / (2.0 * h_n);
    out.dET_dNC = (et[4] - et[5]) / (2.0 * h_n);
  } else {
    out.dNT_dNC = forward(nt[4], nt[5], nt[6], h_n);
    out.dET_dNC = forward(et[4], et[5], et[6], h_n);
  }
  if (!std::isfinite(out.dNT_dT) || !std::isfinite(out.dNT_dNC) ||
      !std::isfinite(out.dET_dT) || !std::isfinite(out.dET_dNC)) {
    throw std::runtime_error("cloud_partials: non-finite derivative");
  }
  return out;
}

double solve_temperature(double n_t_target, const CondensateProfile& profile,
                         const QuadratureOptions& opts) {
  if (n_t_target < 0.0) {
    throw std::invalid_argument("solve_temperature: negative target");
  }
  const double n_c = profile.N_C;
  auto n_t_at = [&](double t) {
    return integrate_cloud({n_c, t}, profile, opts).N_T;
  };

  // T_c of the combined count bounds the answer from above generously.
  const double t_ideal =
      PhysConstants::hbar * profile.trap.omega_bar() *
      std::cbrt((n_c + n_t_target + 1.0) / kZeta3) / PhysConstants::k_B;
  double lo = 1e-9, hi = 10.0 * t_ideal;
  if (n_t_at(lo) > n_t_target) return lo;
  if (n_t_at(hi) < n_t_target) {
    throw std::runtime_error("solve_temperature: target not bracketed");
  }
  while ((hi - lo) > 1e-10 * hi) {
    const double mid = 0.5 * (lo + hi);
    (n_t_at(mid) < n_t_target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double solve_temperature(double n_c, double n_t_target, const TrapConfig& trap,
                         const SpeciesParams& species) {
  return solve_temperature(n_t_target, tf_profile(n_c, trap, species));
}

}  // namespace becdecay
