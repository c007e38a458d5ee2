// Serial-vs-parallel benchmark for the OpenMP kernels.  Every kernel keeps
// a fixed reduction order, so the parallel result must match the serial one
// bit for bit; the benchmark enforces that while timing both.
//
// Usage: bench [reps]   (best-of-`reps` timing, default 3)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <span>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "becdecay/condensate.hpp"
#include "becdecay/constants.hpp"
#include "becdecay/dynamics.hpp"
#include "becdecay/gp.hpp"
#include "becdecay/grid3d.hpp"
#include "becdecay/presets.hpp"
#include "becdecay/thermal_cloud.hpp"

using namespace becdecay;
using Clock = std::chrono::steady_clock;

namespace {

int hardware_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void use_threads(int n) {
#ifdef _OPENMP
  omp_set_num_threads(n);
#else
  (void)n;
#endif
}

struct Timed {
  std::vector<double> vals;
  double secs = 0.0;
};

Timed best_of(const std::function<std::vector<double>()>& f, int reps) {
  Timed out;
  out.secs = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = Clock::now();
    auto v = f();
    const double s = std::chrono::duration<double>(Clock::now() - t0).count();
    out.secs = std::min(out.secs, s);
    out.vals = std::move(v);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const int reps = argc > 1 ? std::atoi(argv[1]) : 3;
  if (reps < 1) {
    std::fprintf(stderr, "usage: bench [reps >= 1]\n");
    return 2;
  }
  const int threads = hardware_threads();
  std::printf("threads: %d, best of %d\n\n", threads, reps);

  const RunConfig cfg = preset_config("fig1");
  const TrapConfig& trap = cfg.trap;
  const SpeciesParams& sp = cfg.species;
  const double N_C = cfg.N_C;
  // Equilibrium temperature for the preset populations (N_C = N_T = 5e5).
  const double T = 1.4881190429e-6;

  const CondensateProfile prof_tf = tf_profile(N_C, trap, sp);
  const CondensateProfile prof_gp = gp_solve(N_C, trap, sp);
  const ThermalCloudField field({N_C, T}, prof_tf);

  const double e_cut = prof_tf.mu + 40.0 * PhysConstants::k_B * T;
  auto extent = [&](double w) {
    return std::sqrt(2.0 * e_cut / (sp.mass * w * w));
  };
  auto tf_r = [&](double w) {
    return std::sqrt(2.0 * prof_tf.mu_tf / (sp.mass * w * w));
  };
  OctantGrid grid;
  grid.half_extent = {extent(trap.omega_x), extent(trap.omega_y),
                      extent(trap.omega_z)};
  grid.ellipsoid = {tf_r(trap.omega_x), tf_r(trap.omega_y),
                    tf_r(trap.omega_z)};
  grid.panels = 8;
  grid.nodes = 10;

  DynamicsConfig dyn;
  dyn.trap = trap;
  dyn.species = sp;

  struct Kernel {
    const char* name;
    std::function<std::vector<double>()> run;
  };
  bool parallel_flag = false;
  const std::vector<Kernel> kernels = {
      {"grid3d octant integral (cloud field)",
       [&] {
         return integrate_even_3d(
             [&](const Vec3& r, std::span<double> out) {
               const CloudPoint p = field.at(r);
               out[0] = p.n_t;
               out[1] = p.e_t;
             },
             2, grid, parallel_flag);
       }},
      {"box-cell cloud integrals (gp profile)",
       [&] {
         const EquilibriumSummary s = integrate_cloud({N_C, T}, prof_gp);
         return std::vector<double>{s.N_T, s.E_T};
       }},
      {"cloud partials (tf profile)",
       [&] {
         const CloudPartials p = cloud_partials({N_C, T}, prof_tf);
         return std::vector<double>{p.dNT_dT, p.dNT_dNC, p.dET_dT, p.dET_dNC};
       }},
      {"coupled derivative full_rhs (tf)",
       [&] {
         const FullDerivs d = full_rhs({N_C, T}, dyn);
         return std::vector<double>{d.dN_C, d.dT, d.Ndot, d.Edot};
       }},
  };

  std::printf("%-40s %10s %10s %8s   %s\n", "kernel", "serial[s]", "par[s]",
              "speedup", "agreement");
  bool all_bitwise = true;
  for (const Kernel& k : kernels) {
    parallel_flag = false;
    use_threads(1);
    const Timed ser = best_of(k.run, reps);
    parallel_flag = true;
    use_threads(threads);
    const Timed par = best_of(k.run, reps);

    double max_rel = 0.0;
    for (std::size_t i = 0; i < ser.vals.size(); ++i) {
      const double denom = std::max(std::abs(ser.vals[i]), 1e-300);
      max_rel = std::max(max_rel,
                         std::abs(par.vals[i] - ser.vals[i]) / denom);
    }
    all_bitwise = all_bitwise && max_rel == 0.0;
    char agree[32];
    if (max_rel == 0.0) {
      std::snprintf(agree, sizeof(agree), "bitwise");
    } else {
      std::snprintf(agree, sizeof(agree), "rel %.1e", max_rel);
    }
    std::printf("%-40s %10.4f %10.4f %7.2fx   %s\n", k.name, ser.secs,
                par.secs, ser.secs / par.secs, agree);
  }
  use_threads(threads);

  if (!all_bitwise) {
    std::fprintf(stderr,
                 "\nerror: parallel results drifted from the serial "
                 "reference\n");
    return 1;
  }
  return 0;
}
