#include "becdecay/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "becdecay/constants.hpp"

namespace becdecay {

const char* to_string(RunMode m) {
  switch (m) {
    case RunMode::full: return "full";
    case RunMode::simple_attribution: return "simple-attribution";
    case RunMode::simple_literal: return "simple-literal";
    case RunMode::pure_condensate: return "pure-condensate";
    case RunMode::ideal: return "ideal";
  }
  return "?";
}

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::completed: return "completed";
    case StopReason::condensate_depleted: return "condensate-depleted";
    case StopReason::critical_temperature: return "critical-temperature";
    case StopReason::solver_failure: return "solver-failure";
  }
  return "?";
}

CondensateProfile DynamicsConfig::profile(double n_c) const {
  if (make_profile) return make_profile(n_c);
  return tf_profile(n_c, trap, species);
}

FullDerivs full_rhs(const EquilibriumState& state, const DynamicsConfig& cfg) {
  FullDerivs d;
  const CondensateProfile prof = cfg.profile(state.N_C);
  QuadratureOptions quad;
  quad.rtol = cfg.quad_rtol;

  d.summary = integrate_cloud(state, prof, quad);
  d.partials = cloud_partials(
      state, prof, [&cfg](double n) { return cfg.profile(n); }, quad);
  d.losses = loss_rates(d.summary, quad);
  d.Ndot = d.losses.Ndot;
  d.Edot = d.losses.Edot;

  // change of variables: the total losses feed (dN_C/dt, dT/dt) through
  //   Ndot = (dNT/dNC + 1) dN_C + dNT/dT dT
  //   Edot = (dET/dNC + mu) dN_C + dET/dT dT
  const double a11 = d.partials.dNT_dNC + 1.0;
  const double a12 = d.partials.dNT_dT;
  const double a21 = d.partials.dET_dNC + d.summary.mu;
  const double a22 = d.partials.dET_dT;
  const double det = a11 * a22 - a12 * a21;
  // conditioning of the equilibrated matrix: the raw columns carry per-atom
  // vs per-kelvin units (~1e11 apart), so scale rows and columns to unit
  // max before taking the determinant
  d.rcond = 0.0;
  const double r1 = std::max(std::abs(a11), std::abs(a12));
  const double r2 = std::max(std::abs(a21), std::abs(a22));
  if (r1 > 0.0 && r2 > 0.0) {
    const double b11 = a11 / r1, b12 = a12 / r1;
    const double b21 = a21 / r2, b22 = a22 / r2;
    const double c1 = std::max(std::abs(b11), std::abs(b21));
    const double c2 = std::max(std::abs(b12), std::abs(b22));
    if (c1 > 0.0 && c2 > 0.0)
      d.rcond = std::abs((b11 / c1) * (b22 / c2) - (b12 / c2) * (b21 / c1));
  }
  if (!(d.rcond >= cfg.rcond_floor)) {
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "full_rhs: ill-conditioned reparametrization (rcond=%.3e) "
                  "at N_C=%.6g, T=%.6g",
                  d.rcond, state.N_C, state.T);
    throw SolverError(msg);
  }
  d.dN_C = (d.Ndot * a22 - a12 * d.Edot) / det;
  d.dT = (a11 * d.Edot - a21 * d.Ndot) / det;
  return d;
}

SimpleDerivs simple_rhs(double n_c, double n_t,
                        const ThermalCloudField& cloud0, double n_t0,
                        AttributionMode mode, const DynamicsConfig& cfg) {
  const double scale = n_t0 > 0.0 ? std::max(n_t, 0.0) / n_t0 : 0.0;
  const CondensateProfile prof = cfg.profile(n_c);
  QuadratureOptions quad;
  quad.rtol = cfg.quad_rtol;

  SimpleDerivs d;
  d.rates = attributed_losses(prof, cloud0.with_scale(scale),
                              std::max(n_t, 0.0), mode, quad);
  d.dN_C = d.rates.ndot_c;
  d.dN_T = d.rates.ndot_t;
  return d;
}

namespace {

StopReason reason_from_event(int event_index) {
  switch (event_index) {
    case OdeResult::kNoEvent: return StopReason::completed;
    case OdeResult::kRhsFailure: return StopReason::solver_failure;
    case 0: return StopReason::condensate_depleted;
    default: return StopReason::critical_temperature;
  }
}

}  // namespace

Trajectory run_trajectory(const InitialState& init, RunMode mode,
                          double t_end, std::span<const double> out_times,
                          const DynamicsConfig& cfg) {
  Trajectory traj;
  traj.mode = mode;

  OdeOptions ode;
  ode.rtol = cfg.ode_rtol;
  ode.event_tol_t = 1e-6 * cfg.trap.tau;
  QuadratureOptions quad;
  quad.rtol = cfg.quad_rtol;

  const EventFn depletion = [](double, std::span<const double> y) {
    return y[0] - 1.0;
  };

  OdeResult res;
  // per-mode state layout, rhs, and sample -> TrajectoryPoint conversion
  std::function<TrajectoryPoint(double, std::span<const double>)> to_point;

  switch (mode) {
    case RunMode::full: {
      const OdeRhs rhs = [&](double, std::span<const double> y,
                             std::span<double> dy) {
        const FullDerivs d = full_rhs({y[0], y[1]}, cfg);
        traj.min_rcond = std::min(traj.min_rcond, d.rcond);
        dy[0] = d.dN_C;
        dy[1] = d.dT;
      };
      const EventFn critical = [&](double, std::span<const double> y) {
        const EquilibriumState s{y[0], y[1]};
        const auto sum = integrate_cloud(s, cfg.profile(y[0]), quad);
        const double tc =
            ideal::critical_temperature(y[0] + sum.N_T, cfg.trap);
        return 0.999 * tc - y[1];
      };
      // interacting critical boundary: once mu_tf sinks to the zero-point
      // scale the condensate stops being a distinct component, and when the
      // cloud also sits at its mu = e0 capacity the equilibrium
      // reparametrization degenerates (T-noise pumps N_T); halt there
      const double e0 = cfg.trap.ground_state_energy();
      const EventFn saturated = [&, e0](double, std::span<const double> y) {
        const CondensateProfile prof = cfg.profile(y[0]);
        const double head = (prof.mu_tf - 2.0 * e0) / e0;
        if (head > 0.0) return head;
        const auto sum = integrate_cloud({y[0], y[1]}, prof, quad);
        const auto cap = integrate_cloud({0.0, y[1]}, cfg.profile(0.0), quad);
        return std::max(head, (0.999 * cap.N_T - sum.N_T) / cap.N_T);
      };
      const std::vector<EventFn> events = {depletion, critical, saturated};
      const double y0[] = {init.N_C, init.T};
      ode.atol = {cfg.atol_atoms, cfg.atol_temp};
      res = integrate_ode(rhs, y0, 0.0, t_end, out_times, events, ode);

      to_point = [&cfg, &quad](double t, std::span<const double> y) {
        TrajectoryPoint p;
        p.t = t;
        p.N_C = y[0];
        p.T = y[1];
        const auto sum = integrate_cloud({y[0], y[1]}, cfg.profile(y[0]), quad);
        p.N_T = sum.N_T;
        p.mu = sum.mu;
        p.E_T = sum.E_T;
        const auto lr = loss_rates(sum, quad);
        p.ndot_bg = lr.bg.ndot;
        p.ndot_2b = lr.two_body().ndot;
        p.ndot_3b = lr.three_body().ndot;
        return p;
      };
      break;
    }

    case RunMode::simple_attribution:
    case RunMode::simple_literal:
    case RunMode::pure_condensate: {
      const bool pure = mode == RunMode::pure_condensate;
      const AttributionMode attr = mode == RunMode::simple_literal
                                       ? AttributionMode::literal
                                       : AttributionMode::attribution;
      // frozen t=0 cloud; a pure run carries an empty (zero-scale) cloud
      const double t_ref = init.T > 0.0 ? init.T : 1e-6;
      const CondensateProfile prof0 = cfg.profile(init.N_C);
      double n_t0 = 0.0, e_t0 = 0.0;
      ThermalCloudField cloud0({init.N_C, t_ref}, prof0);
      if (!pure) {
        const auto sum0 = integrate_cloud({init.N_C, init.T}, prof0, quad);
        cloud0 = sum0.field;
        n_t0 = sum0.N_T;
        e_t0 = sum0.E_T;
      } else {
        cloud0 = cloud0.with_scale(0.0);
      }

      const OdeRhs rhs = [&](double, std::span<const double> y,
                             std::span<double> dy) {
        const SimpleDerivs d =
            simple_rhs(y[0], y[1], cloud0, n_t0, attr, cfg);
        dy[0] = d.dN_C;
        dy[1] = d.dN_T;
      };
      const std::vector<EventFn> events = {depletion};
      const double y0[] = {init.N_C, pure ? 0.0 : n_t0};
      ode.atol = {cfg.atol_atoms, cfg.atol_atoms};
      res = integrate_ode(rhs, y0, 0.0, t_end, out_times, events, ode);

      const double T_rep = pure ? 0.0 : init.T;
      // by value: cloud0 and friends are scoped to this case block
      to_point = [&cfg, cloud0, n_t0, e_t0, T_rep, attr, quad](
                     double t, std::span<const double> y) {
        TrajectoryPoint p;
        p.t = t;
        p.N_C = y[0];
        p.N_T = std::max(y[1], 0.0);
        p.T = T_rep;
        const CondensateProfile prof = cfg.profile(y[0]);
        p.mu = prof.mu;
        p.E_T = n_t0 > 0.0 ? e_t0 * (p.N_T / n_t0) : 0.0;
        const double scale = n_t0 > 0.0 ? p.N_T / n_t0 : 0.0;
        const auto sr = attributed_losses(prof, cloud0.with_scale(scale),
                                          p.N_T, attr, quad);
        p.ndot_bg = sr.bg;
        p.ndot_2b = sr.two_body;
        p.ndot_3b = sr.three_body;
        return p;
      };
      break;
    }

    case RunMode::ideal: {
      const OdeRhs rhs = [&](double, std::span<const double> y,
                             std::span<double> dy) {
        const auto r = ideal::decay_rhs({y[0], y[1]}, cfg.trap);
        dy[0] = r.dn_c;
        dy[1] = r.dn_t;
      };
      const std::vector<EventFn> events = {depletion};
      const double y0[] = {init.N_C, init.N_T};
      ode.atol = {cfg.atol_atoms, cfg.atol_atoms};
      res = integrate_ode(rhs, y0, 0.0, t_end, out_times, events, ode);

      to_point = [&cfg](double t, std::span<const double> y) {
        TrajectoryPoint p;
        p.t = t;
        p.N_C = y[0];
        p.N_T = std::max(y[1], 0.0);
        p.T = ideal::critical_temperature(p.N_T, cfg.trap);
        p.mu = cfg.trap.ground_state_energy();
        p.E_T = ideal::thermal_energy(p.N_T, cfg.trap);
        p.ndot_bg = -(p.N_C + p.N_T) / cfg.trap.tau;
        return p;
      };
      break;
    }
  }

  traj.reason = reason_from_event(res.event_index);
  traj.t_stop = res.t_stop;
  traj.diagnostic = res.diagnostic;
  traj.n_rhs = res.n_rhs;
  if (res.event_index == 1) {
    traj.diagnostic = "temperature reached 99.9% of the ideal critical value";
  } else if (res.event_index == 2) {
    traj.diagnostic = "thermal cloud saturated: condensate no longer a "
                      "distinct component";
  }

  traj.points.reserve(res.samples.size() + 1);
  for (const auto& s : res.samples) traj.points.push_back(to_point(s.t, s.y));
  const double t_last =
      traj.points.empty() ? -1.0 : traj.points.back().t;
  if (res.t_stop > t_last + 1e-12 * std::max(t_end, 1.0)) {
    traj.points.push_back(to_point(res.t_stop, res.y_stop));
  }
  return traj;
}

}  // namespace becdecay
