#include "becdecay/gp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include "becdecay/constants.hpp"

namespace becdecay {

double GpDensity::density(double rho, double z) const {
  z = std::abs(z);
  const double fi = rho / d_rho;
  const double fj = z / d_z;
  const int i = static_cast<int>(fi);
  const int j = static_cast<int>(fj);
  if (i + 1 >= n_rho || j + 1 >= n_z) return 0.0;
  const double si = fi - i;
  const double sj = fj - j;
  const double* row0 = values.data() + static_cast<std::size_t>(i) * n_z;
  const double* row1 = row0 + n_z;
  return (1 - si) * ((1 - sj) * row0[j] + sj * row0[j + 1]) +
         si * ((1 - sj) * row1[j] + sj * row1[j + 1]);
}

namespace {

// Everything below works in oscillator units: lengths in a_ho = sqrt(hbar /
// m wbar), energies in hbar wbar, psi normalized to Int |psi|^2 dV = 1.

struct Level {
  int n_rho = 0, n_z = 0;
  double drho = 0.0, dz = 0.0;
  std::vector<double> vpot;  // 0.5 (g_rho^2 rho^2 + g_z^2 z^2), row-major
  std::vector<double> wgt;   // volume weights 4 pi rho drho dz (trapezoid)

  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * n_z + j;
  }
};

Level make_level(int n_rho, int n_z, double box_rho, double box_z,
                 double g_rho, double g_z) {
  Level lv;
  lv.n_rho = n_rho;
  lv.n_z = n_z;
  lv.drho = box_rho / (n_rho - 1);
  lv.dz = box_z / (n_z - 1);
  lv.vpot.resize(static_cast<std::size_t>(n_rho) * n_z);
  lv.wgt.resize(lv.vpot.size());
  for (int i = 0; i < n_rho; ++i) {
    const double rho = i * lv.drho;
    const double ci = (i == 0 || i == n_rho - 1) ? 0.5 : 1.0;
    for (int j = 0; j < n_z; ++j) {
      const double z = j * lv.dz;
      const double cj = (j == 0 || j == n_z - 1) ? 0.5 : 1.0;
      lv.vpot[lv.idx(i, j)] =
          0.5 * (g_rho * g_rho * rho * rho + g_z * g_z * z * z);
      // 2 pi azimuthal x 2 for the mirrored z half-space
      lv.wgt[lv.idx(i, j)] = 4.0 * M_PI * rho * lv.drho * lv.dz * ci * cj;
    }
  }
  return lv;
}

// H psi at node (i, j) with Neumann axes (psi even in rho and z) and
// Dirichlet walls; caller guarantees i < n_rho-1 and j < n_z-1.
inline double apply_h(const Level& lv, const std::vector<double>& psi,
                      double gtil, int i, int j) {
  const std::size_t k = lv.idx(i, j);
  const double p = psi[k];
  double lap;
  if (i == 0) {
    lap = 4.0 * (psi[lv.idx(1, j)] - p) / (lv.drho * lv.drho);
  } else {
    const double pm = psi[k - lv.n_z], pp = psi[k + lv.n_z];
    lap = (pp - 2.0 * p + pm) / (lv.drho * lv.drho) +
          (pp - pm) / (2.0 * i * lv.drho * lv.drho);
  }
  if (j == 0) {
    lap += 2.0 * (psi[k + 1] - p) / (lv.dz * lv.dz);
  } else {
    lap += (psi[k + 1] - 2.0 * p + psi[k - 1]) / (lv.dz * lv.dz);
  }
  return -0.5 * lap + (lv.vpot[k] + gtil * p * p) * p;
}

double norm2(const Level& lv, const std::vector<double>& psi) {
  // row partials summed in index order: bitwise identical for any thread
  // count
  std::vector<double> row(lv.n_rho, 0.0);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < lv.n_rho; ++i) {
    double s = 0.0;
    for (int j = 0; j < lv.n_z; ++j) {
      const std::size_t k = lv.idx(i, j);
      s += lv.wgt[k] * psi[k] * psi[k];
    }
    row[i] = s;
  }
  double total = 0.0;
  for (double s : row) total += s;
  return total;
}

double mu_functional(const Level& lv, const std::vector<double>& psi,
                     double gtil) {
  std::vector<double> row_num(lv.n_rho, 0.0), row_den(lv.n_rho, 0.0);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < lv.n_rho - 1; ++i) {
    double num = 0.0, den = 0.0;
    for (int j = 0; j < lv.n_z - 1; ++j) {
      const std::size_t k = lv.idx(i, j);
      num += lv.wgt[k] * psi[k] * apply_h(lv, psi, gtil, i, j);
      den += lv.wgt[k] * psi[k] * psi[k];
    }
    row_num[i] = num;
    row_den[i] = den;
  }
  double num = 0.0, den = 0.0;
  for (int i = 0; i < lv.n_rho; ++i) {
    num += row_num[i];
    den += row_den[i];
  }
  return num / den;
}

struct Relaxation {
  double mu = 0.0;
  bool converged = false;
};

// Imaginary-time relaxation on one level; psi is renormalized every step.
Relaxation relax(const Level& lv, std::vector<double>& psi, double gtil,
                 double rate_tol, long budget, long& steps_used) {
  const double s0 = norm2(lv, psi);
  if (!(s0 > 0.0)) throw std::runtime_error("gp_solve: vanishing state");
  for (double& p : psi) p /= std::sqrt(s0);

  std::vector<double> pnew(psi.size(), 0.0);
  std::vector<double> row(lv.n_rho, 0.0);

  double vmax = 0.0;
  for (double v : lv.vpot) vmax = std::max(vmax, v);
  auto step_size = [&] {
    double p2max = 0.0;
    for (double p : psi) p2max = std::max(p2max, p * p);
    const double lam = 2.0 / (lv.drho * lv.drho) + 2.0 / (lv.dz * lv.dz) +
                       vmax + gtil * p2max;
    return 1.0 / lam;
  };
  double dtau = step_size();

  const int check_every = 50;
  double mu_prev = mu_functional(lv, psi, gtil);
  Relaxation out;
  out.mu = mu_prev;

  for (long k = 1; k <= budget; ++k) {
    ++steps_used;
#pragma omp parallel for schedule(static)
    for (int i = 0; i < lv.n_rho - 1; ++i) {
      double s = 0.0;
      for (int j = 0; j < lv.n_z - 1; ++j) {
        const std::size_t n = lv.idx(i, j);
        const double q = psi[n] - dtau * apply_h(lv, psi, gtil, i, j);
        pnew[n] = q;
        s += lv.wgt[n] * q * q;
      }
      row[i] = s;
    }
    double s2 = 0.0;
    for (int i = 0; i < lv.n_rho; ++i) s2 += row[i];
    const double scale = 1.0 / std::sqrt(s2);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < lv.n_rho - 1; ++i) {
      for (int j = 0; j < lv.n_z - 1; ++j) {
        const std::size_t n = lv.idx(i, j);
        psi[n] = pnew[n] * scale;
      }
    }

    if (k % check_every == 0) {
      const double mu = mu_functional(lv, psi, gtil);
      const double rate =
          std::abs(mu - mu_prev) / (std::abs(mu) * check_every * dtau);
      mu_prev = mu;
      out.mu = mu;
      if (rate < rate_tol) {
        out.converged = true;
        return out;
      }
      dtau = step_size();
    }
  }
  return out;
}

void fill_from(const Level& lv,
               const std::function<double(double, double)>& density_scaled,
               std::vector<double>& psi) {
  psi.assign(lv.vpot.size(), 0.0);
  for (int i = 0; i < lv.n_rho - 1; ++i) {
    for (int j = 0; j < lv.n_z - 1; ++j) {
      psi[lv.idx(i, j)] =
          std::sqrt(std::max(0.0, density_scaled(i * lv.drho, j * lv.dz)));
    }
  }
}

struct WarmCache {
  bool valid = false;
  double mass = 0.0, a = 0.0, wx = 0.0, wz = 0.0;
  std::shared_ptr<const GpDensity> dens;
  double n_c = 0.0;
};

thread_local WarmCache g_warm;

}  // namespace

CondensateProfile gp_solve(double n_c, const TrapConfig& trap,
                           const SpeciesParams& species, const GpGrid& grid) {
  if (!(n_c > 0.0)) {
    throw std::invalid_argument("gp_solve: N_C must be positive");
  }
  trap.validate();
  species.validate();
  if (trap.omega_x != trap.omega_y) {
    throw std::invalid_argument(
        "gp_solve: trap must be axially symmetric (omega_x == omega_y)");
  }
  if (grid.n_rho < 8 || grid.n_z < 8) {
    throw std::invalid_argument("gp_solve: grid too small");
  }

  const double wb = trap.omega_bar();
  const double a_ho = std::sqrt(PhysConstants::hbar / (species.mass * wb));
  const double g_rho = trap.omega_x / wb;
  const double g_z = trap.omega_z / wb;
  const double gtil = 4.0 * M_PI * species.a * n_c / a_ho;

  const CondensateProfile tf = tf_profile(n_c, trap, species);
  const double mu_tf_scaled = tf.mu_tf / (PhysConstants::hbar * wb);

  // box covers the larger of the TF cloud and the oscillator ground state
  const double box_rho =
      grid.extent * std::max(std::sqrt(2.0 * mu_tf_scaled) / g_rho,
                             1.0 / std::sqrt(g_rho));
  const double box_z =
      grid.extent * std::max(std::sqrt(2.0 * mu_tf_scaled) / g_z,
                             1.0 / std::sqrt(g_z));

  // analytic seed: TF density plus a small oscillator Gaussian so the
  // weakly interacting limit starts near the right state
  const auto seed = [&](double rho, double z) {
    const double v = 0.5 * (g_rho * g_rho * rho * rho + g_z * g_z * z * z);
    const double tf_part = std::max(0.0, (mu_tf_scaled - v) / gtil);
    const double gauss = std::exp(-g_rho * rho * rho - g_z * z * z);
    return tf_part + 0.05 * gauss;
  };

  const bool warm = g_warm.valid && g_warm.mass == species.mass &&
                    g_warm.a == species.a && g_warm.wx == trap.omega_x &&
                    g_warm.wz == trap.omega_z;

  long steps_used = 0;
  std::vector<double> psi;
  Relaxation rel;

  if (warm) {
    const Level lv = make_level(grid.n_rho, grid.n_z, box_rho, box_z, g_rho,
                                g_z);
    const auto prev = g_warm.dens;  // lab-frame density of the cached state
    fill_from(lv,
              [&](double rho, double z) {
                return prev->density(rho * a_ho, z * a_ho);  // shape only
              },
              psi);
    rel = relax(lv, psi, gtil, grid.mu_rate_tol, grid.max_steps, steps_used);
  } else {
    // coarse-to-fine: each refinement starts from the interpolated coarse
    // solution, so the expensive fine level only polishes
    struct Stage {
      int n_rho, n_z;
      double tol_factor;
    };
    const Stage stages[] = {
        {std::max(grid.n_rho / 4 + 1, 17), std::max(grid.n_z / 4 + 1, 17),
         1e4},
        {std::max(grid.n_rho / 2 + 1, 33), std::max(grid.n_z / 2 + 1, 33),
         1e2},
        {grid.n_rho, grid.n_z, 1.0},
    };
    Level prev_lv;
    std::vector<double> prev_psi;
    for (const Stage& st : stages) {
      const Level lv =
          make_level(st.n_rho, st.n_z, box_rho, box_z, g_rho, g_z);
      if (prev_psi.empty()) {
        fill_from(lv, seed, psi);
      } else {
        // bilinear lift of the coarse solution
        GpDensity coarse;
        coarse.n_rho = prev_lv.n_rho;
        coarse.n_z = prev_lv.n_z;
        coarse.d_rho = prev_lv.drho;
        coarse.d_z = prev_lv.dz;
        coarse.values.resize(prev_psi.size());
        for (std::size_t k = 0; k < prev_psi.size(); ++k) {
          coarse.values[k] = prev_psi[k] * prev_psi[k];
        }
        fill_from(lv,
                  [&](double rho, double z) { return coarse.density(rho, z); },
                  psi);
      }
      rel = relax(lv, psi, gtil, grid.mu_rate_tol * st.tol_factor,
                  grid.max_steps - steps_used, steps_used);
      prev_lv = lv;
      prev_psi = psi;
    }
  }

  if (!rel.converged) {
    throw std::runtime_error(
        "gp_solve: imaginary-time relaxation did not converge within " +
        std::to_string(grid.max_steps) + " steps");
  }

  auto dens = std::make_shared<GpDensity>();
  dens->n_rho = grid.n_rho;
  dens->n_z = grid.n_z;
  dens->d_rho = (box_rho / (grid.n_rho - 1)) * a_ho;
  dens->d_z = (box_z / (grid.n_z - 1)) * a_ho;
  dens->values.resize(psi.size());
  const double to_lab = n_c / (a_ho * a_ho * a_ho);
  for (std::size_t k = 0; k < psi.size(); ++k) {
    dens->values[k] = psi[k] * psi[k] * to_lab;
  }

  g_warm = {true, species.mass, species.a, trap.omega_x, trap.omega_z, dens,
            n_c};

  CondensateProfile p;
  p.kind = ProfileKind::gross_pitaevskii;
  p.trap = trap;
  p.species = species;
  p.N_C = n_c;
  p.mu_tf = tf.mu_tf;  // support scale, used for quadrature splits
  p.mu = std::max(rel.mu * PhysConstants::hbar * wb,
                  trap.ground_state_energy());
  p.gp = std::move(dens);
  return p;
}

void integrate_box_cells(
    const GpDensity& d, double rho_max, double z_max, int components,
    const std::function<void(double, double, std::span<double>)>& f,
    std::span<double> out) {
  constexpr int kMaxComponents = 16;
  if (components <= 0 || components > kMaxComponents ||
      out.size() < static_cast<std::size_t>(components)) {
    throw std::invalid_argument("integrate_box_cells: bad component count");
  }
  if (d.n_rho < 2 || d.n_z < 2 || !(d.d_rho > 0.0) || !(d.d_z > 0.0)) {
    throw std::invalid_argument("integrate_box_cells: empty density grid");
  }
  // 3-point Gauss-Legendre on [0, 1]
  constexpr double kOff = 0.3872983346207417;  // sqrt(15) / 10
  constexpr double xs[3] = {0.5 - kOff, 0.5, 0.5 + kOff};
  constexpr double ws[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

  auto cell_count = [](int nodes, double span_needed, double step) {
    const int n = nodes - 1;
    if (!(span_needed > n * step)) return n;
    return std::max(n, static_cast<int>(std::ceil(span_needed / step - 1e-9)));
  };
  const int n_r = cell_count(d.n_rho, rho_max, d.d_rho);
  const int n_z = cell_count(d.n_z, z_max, d.d_z);

  std::vector<double> rows(static_cast<std::size_t>(n_r) * components, 0.0);
  std::exception_ptr failure;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int i = 0; i < n_r; ++i) {
    try {
      std::array<double, kMaxComponents> buf;
      const std::span<double> view(buf.data(), components);
      double* acc = rows.data() + static_cast<std::size_t>(i) * components;
      for (int j = 0; j < n_z; ++j) {
        for (int a = 0; a < 3; ++a) {
          const double rho = (i + xs[a]) * d.d_rho;
          const double wr = ws[a] * rho;
          for (int b = 0; b < 3; ++b) {
            f(rho, (j + xs[b]) * d.d_z, view);
            const double w = wr * ws[b];
            for (int k = 0; k < components; ++k) acc[k] += w * buf[k];
          }
        }
      }
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  // Serial reduction in fixed row order: the result must not depend on the
  // thread count.
  const double cell = d.d_rho * d.d_z;
  for (int k = 0; k < components; ++k) out[k] = 0.0;
  for (int i = 0; i < n_r; ++i) {
    const double* acc = rows.data() + static_cast<std::size_t>(i) * components;
    for (int k = 0; k < components; ++k) out[k] += cell * acc[k];
  }
}

}  // namespace becdecay
