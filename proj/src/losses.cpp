#include "becdecay/losses.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "becdecay/constants.hpp"
#include "becdecay/gp.hpp"

namespace becdecay {

LossChannel LossRates::two_body() const {
  LossChannel s = cc;
  s += ct;
  s += tt;
  return s;
}

LossChannel LossRates::three_body() const {
  LossChannel s = ccc;
  s += cct;
  s += ctt;
  s += ttt;
  return s;
}

namespace {

// The twelve density-product integrals (each over all space) that every
// collision channel is built from.  c = condensate density, t = thermal
// density, e = thermal energy density.
struct Integrals {
  double c2 = 0, ct = 0, t2 = 0;            // pair densities
  double c3 = 0, c2t = 0, ct2 = 0, t3 = 0;  // triple densities
  double ce = 0, te = 0;                    // pair energy release
  double c2e = 0, cte = 0, t2e = 0;         // triple energy release
};

constexpr int kNumProducts = 12;

void fill_products(double n_c, const CloudPoint& p, std::span<double> out) {
  const double nt = p.n_t;
  const double et = p.e_t;
  const double c2 = n_c * n_c;
  const double t2 = nt * nt;
  out[0] = c2;
  out[1] = n_c * nt;
  out[2] = t2;
  out[3] = c2 * n_c;
  out[4] = c2 * nt;
  out[5] = n_c * t2;
  out[6] = t2 * nt;
  out[7] = n_c * et;
  out[8] = nt * et;
  out[9] = c2 * et;
  out[10] = n_c * nt * et;
  out[11] = t2 * et;
}

Integrals unpack(const std::array<double, kNumProducts>& v) {
  return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9], v[10],
          v[11]};
}

Integrals integrate_products_radial(const CondensateProfile& cond,
                                    const ThermalCloudField& cloud,
                                    const QuadratureOptions& opts) {
  const double u_max =
      std::max(cloud.cutoff_rescaled(), boundary_rescaled(cond));
  std::vector<double> pts = radial_breakpoints(cond, u_max);
  {
    const std::vector<double> more =
        radial_breakpoints(cloud.profile(), u_max);
    pts.insert(pts.end(), more.begin(), more.end());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  }

  auto f = [&](double u, std::span<double> out) {
    fill_products(cond.density_rescaled(u), cloud.at_rescaled(u), out);
    const double u2 = u * u;
    for (double& v : out) v *= u2;
  };
  const auto res = integrate_adaptive(f, kNumProducts, pts, opts);

  std::array<double, kNumProducts> v{};
  for (int i = 0; i < kNumProducts; ++i) v[i] = 4.0 * kPi * res.values[i];
  return unpack(v);
}

Integrals integrate_products_cylindrical(const CondensateProfile& cond,
                                         const ThermalCloudField& cloud,
                                         const QuadratureOptions& opts) {
  const auto& trap = cond.trap;
  if (!trap.axially_symmetric()) {
    throw std::invalid_argument(
        "loss_rates: non-radial profiles need an axially symmetric trap");
  }
  const double m = cond.species.mass;
  const double kt = PhysConstants::k_B * cloud.state().T;
  const double e_cut = std::max(cloud.mu(), cond.mu) + 40.0 * kt;
  const double rho_cut =
      std::sqrt(2.0 * e_cut / (m * trap.omega_x * trap.omega_x));
  const double z_cut =
      std::sqrt(2.0 * e_cut / (m * trap.omega_z * trap.omega_z));

  // Sampled densities make the integrand piecewise bilinear, which adaptive
  // subdivision cannot certify across cell lines; cover the union of the
  // sampled boxes with the fixed cell rule of the larger one and leave only
  // the smooth exterior to adaptive panels.
  const GpDensity* lead = nullptr;
  double lead_vol = -1.0, rho_box = 0.0, z_box = 0.0;
  for (const GpDensity* g : {cond.gp.get(), cloud.profile().gp.get()}) {
    if (!g) continue;
    const double rb = (g->n_rho - 1) * g->d_rho;
    const double zb = (g->n_z - 1) * g->d_z;
    rho_box = std::max(rho_box, rb);
    z_box = std::max(z_box, zb);
    if (rb * rb * zb > lead_vol) {
      lead_vol = rb * rb * zb;
      lead = g;
    }
  }
  if (!lead) {
    throw std::logic_error(
        "loss_rates: non-radial profiles carry no sampled density");
  }

  auto evalp = [&](double rho, double z, std::span<double> out) {
    const Vec3 r{rho, 0.0, z};
    fill_products(cond.density(r), cloud.at(r), out);
  };
  std::array<double, kNumProducts> v{};
  integrate_box_cells(*lead, rho_box, z_box, kNumProducts, evalp, v);

  // Exterior: condensate-free, but a TF profile larger than the box keeps
  // its sqrt cusp, and a floored chemical potential clamps the fugacity on
  // the V = mu surface of the cloud's own profile.
  QuadratureOptions inner_opts = opts;
  inner_opts.rtol = 0.1 * opts.rtol;
  auto energy_radius = [&](double e, double w) {
    return e > 0.0 ? std::sqrt(2.0 * e / (m * w * w)) : 0.0;
  };
  const double mu_cl = cloud.mu();
  auto rect = [&](double rho_lo, double rho_hi, double z_lo, double z_hi) {
    if (!(rho_hi > rho_lo) || !(z_hi > z_lo)) return;
    auto outer = [&](double rho, std::span<double> out) {
      const double v_rho = 0.5 * m * trap.omega_x * trap.omega_x * rho * rho;
      std::vector<double> zpts = {z_lo};
      auto add = [&](double z) {
        if (z > z_lo && z < z_hi) zpts.push_back(z);
      };
      add(energy_radius(cond.mu_tf - v_rho, trap.omega_z));
      add(energy_radius(cloud.profile().mu_tf - v_rho, trap.omega_z));
      add(energy_radius(mu_cl - v_rho, trap.omega_z));
      std::sort(zpts.begin(), zpts.end());
      zpts.erase(std::unique(zpts.begin(), zpts.end()), zpts.end());
      zpts.push_back(z_hi);
      auto inner = [&](double z, std::span<double> w) { evalp(rho, z, w); };
      const auto res =
          integrate_adaptive(inner, kNumProducts, zpts, inner_opts);
      for (int i = 0; i < kNumProducts; ++i) out[i] = rho * res.values[i];
    };
    std::vector<double> rpts = {rho_lo};
    auto add = [&](double r) {
      if (r > rho_lo && r < rho_hi) rpts.push_back(r);
    };
    add(energy_radius(cond.mu_tf, trap.omega_x));
    add(energy_radius(cloud.profile().mu_tf, trap.omega_x));
    add(energy_radius(mu_cl, trap.omega_x));
    std::sort(rpts.begin(), rpts.end());
    rpts.erase(std::unique(rpts.begin(), rpts.end()), rpts.end());
    rpts.push_back(rho_hi);
    const auto res = integrate_adaptive(outer, kNumProducts, rpts, opts);
    for (int i = 0; i < kNumProducts; ++i) v[i] += res.values[i];
  };
  rect(rho_box, rho_cut, 0.0, z_cut);
  rect(0.0, std::min(rho_box, rho_cut), z_box, z_cut);

  for (int i = 0; i < kNumProducts; ++i) v[i] *= 4.0 * kPi;
  return unpack(v);
}

Integrals integrate_products(const CondensateProfile& cond,
                             const ThermalCloudField& cloud,
                             const QuadratureOptions& opts) {
  if (cond.radial() && cloud.radial()) {
    return integrate_products_radial(cond, cloud, opts);
  }
  return integrate_products_cylindrical(cond, cloud, opts);
}

}  // namespace

LossRates loss_rates(const EquilibriumSummary& summary,
                     const QuadratureOptions& opts) {
  const CondensateProfile& prof = summary.field.profile();
  const Integrals I = integrate_products(prof, summary.field, opts);

  const double tau = prof.trap.tau;
  const double chi = prof.species.chi;
  const double xi = prof.species.xi;
  const double mu = summary.mu;
  const double n_c = prof.N_C;

  LossRates r;
  r.bg.ndot = -(n_c + summary.N_T) / tau;
  r.bg.edot = -(summary.E_T + mu * n_c) / tau;

  // Each two-body event removes 2 atoms, each three-body event 3; every
  // lost condensate atom carries mu, every lost cloud atom the local
  // average thermal energy (already folded into the e-weighted integrals).
  r.cc.ndot = -chi * I.c2;
  r.cc.edot = -chi * mu * I.c2;
  r.ct.ndot = -4.0 * chi * I.ct;
  r.ct.edot = -2.0 * chi * (mu * I.ct + I.ce);
  r.tt.ndot = -2.0 * chi * I.t2;
  r.tt.edot = -2.0 * chi * I.te;

  r.ccc.ndot = -0.5 * xi * I.c3;
  r.ccc.edot = -0.5 * xi * mu * I.c3;
  r.cct.ndot = -4.5 * xi * I.c2t;
  r.cct.edot = -1.5 * xi * (2.0 * mu * I.c2t + I.c2e);
  r.ctt.ndot = -9.0 * xi * I.ct2;
  r.ctt.edot = -3.0 * xi * (mu * I.ct2 + 2.0 * I.cte);
  r.ttt.ndot = -3.0 * xi * I.t3;
  r.ttt.edot = -3.0 * xi * I.t2e;

  for (const LossChannel* c :
       {&r.bg, &r.cc, &r.ct, &r.tt, &r.ccc, &r.cct, &r.ctt, &r.ttt}) {
    r.Ndot += c->ndot;
    r.Edot += c->edot;
  }
  return r;
}

LossRates number_loss(const EquilibriumSummary& summary,
                      const QuadratureOptions& opts) {
  return loss_rates(summary, opts);
}

LossRates energy_loss(const EquilibriumSummary& summary,
                      const QuadratureOptions& opts) {
  return loss_rates(summary, opts);
}

SpeciesRates attributed_losses(const CondensateProfile& condensate,
                               const ThermalCloudField& cloud,
                               double n_t_total, AttributionMode mode,
                               const QuadratureOptions& opts) {
  // Same full product pass as loss_rates, so the attribution partition
  // reproduces its total to rounding rather than to quadrature tolerance.
  const Integrals I = integrate_products(condensate, cloud, opts);
  const double tau = condensate.trap.tau;
  const double chi = condensate.species.chi;
  const double xi = condensate.species.xi;

  SpeciesRates r;
  r.bg = -(condensate.N_C + n_t_total) / tau;
  if (mode == AttributionMode::literal) {
    r.ndot_c = -condensate.N_C / tau - chi * I.c2 - 0.5 * xi * I.c3;
    r.ndot_t = -n_t_total / tau - 2.0 * chi * I.t2 - 3.0 * xi * I.t3;
    r.two_body = -chi * I.c2 - 2.0 * chi * I.t2;
    r.three_body = -0.5 * xi * I.c3 - 3.0 * xi * I.t3;
  } else {
    // per-event split: ct events (rate 2 chi ct) take 1+1, cct events
    // (rate 1.5 xi c2t) take 2+1, ctt events (rate 3 xi ct2) take 1+2
    r.ndot_c = -condensate.N_C / tau - chi * I.c2 - 2.0 * chi * I.ct -
               0.5 * xi * I.c3 - 3.0 * xi * I.c2t - 3.0 * xi * I.ct2;
    r.ndot_t = -n_t_total / tau - 2.0 * chi * I.ct - 2.0 * chi * I.t2 -
               1.5 * xi * I.c2t - 6.0 * xi * I.ct2 - 3.0 * xi * I.t3;
    r.two_body = -chi * I.c2 - 4.0 * chi * I.ct - 2.0 * chi * I.t2;
    r.three_body = -0.5 * xi * I.c3 - 4.5 * xi * I.c2t - 9.0 * xi * I.ct2 -
                   3.0 * xi * I.t3;
  }
  return r;
}

SpeciesRates attributed_losses(const EquilibriumSummary& summary,
                               AttributionMode mode,
                               const QuadratureOptions& opts) {
  return attributed_losses(summary.field.profile(), summary.field,
                           summary.N_T, mode, opts);
}

}  // namespace becdecay
