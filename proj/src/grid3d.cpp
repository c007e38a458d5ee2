#include "becdecay/grid3d.hpp"

#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace becdecay {

void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n < 1");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi-style initial guess, then Newton on P_n.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) {
        // one final polish step after convergence
        p0 = 1.0;
        p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        pp = n * (x * p1 - p0) / (x * x - 1.0);
        break;
      }
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
  if (n % 2 == 1) nodes[half - 1] = 0.0;
}

namespace {

// Panel edges on [0, L]: if 0 < split < L, two regions with widths graded
// as (k/K)^q toward the split from both sides; otherwise uniform panels.
void build_edges(double L, double split, int panels, double q,
                 std::vector<double>& edges) {
  edges.clear();
  if (split > 0.0 && split < L) {
    for (int k = panels; k >= 1; --k) {
      edges.push_back(split * (1.0 - std::pow(double(k) / panels, q)));
    }
    for (int k = 0; k <= panels; ++k) {
      edges.push_back(split + (L - split) * std::pow(double(k) / panels, q));
    }
  } else {
    for (int k = 0; k <= panels; ++k) edges.push_back(L * double(k) / panels);
  }
}

struct AxisNodes {
  std::vector<double> x, w;
};

void fill_axis(const std::vector<double>& edges, const std::vector<double>& gx,
               const std::vector<double>& gw, AxisNodes& out) {
  out.x.clear();
  out.w.clear();
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double mid = 0.5 * (edges[p] + edges[p + 1]);
    const double hw = 0.5 * (edges[p + 1] - edges[p]);
    if (hw <= 0.0) continue;
    for (std::size_t j = 0; j < gx.size(); ++j) {
      out.x.push_back(mid + hw * gx[j]);
      out.w.push_back(hw * gw[j]);
    }
  }
}

}  // namespace

std::vector<double> integrate_even_3d(const VectorIntegrand3D& f,
                                      int components, const OctantGrid& grid,
                                      bool parallel) {
  if (components < 1) {
    throw std::invalid_argument("integrate_even_3d: bad component count");
  }
  for (double L : grid.half_extent) {
    if (!(L > 0.0)) {
      throw std::invalid_argument("integrate_even_3d: non-positive extent");
    }
  }

  std::vector<double> gx, gw;
  gauss_legendre(grid.nodes, gx, gw);

  const double rx = grid.ellipsoid[0];
  const double ry = grid.ellipsoid[1];
  const double rz = grid.ellipsoid[2];
  const bool have_split = rx > 0.0 && ry > 0.0 && rz > 0.0;

  std::vector<double> xedges;
  build_edges(grid.half_extent[0], have_split ? rx : -1.0, grid.panels,
              grid.grading, xedges);
  AxisNodes ax;
  fill_axis(xedges, gx, gw, ax);
  const int nx = static_cast<int>(ax.x.size());

  // Per-x-node partial integrals, combined serially afterwards so the
  // result does not depend on the number of threads.
  std::vector<double> partial(static_cast<std::size_t>(nx) * components, 0.0);

  auto do_slice = [&](int ix) {
    const double x = ax.x[ix];
    const double wx = ax.w[ix];

    double s2 = -1.0;  // 1 - (x/Rx)^2 when splitting applies
    if (have_split) s2 = 1.0 - (x / rx) * (x / rx);

    std::vector<double> yedges, zedges;
    AxisNodes ay, az;
    std::vector<double> vals(components);
    double* acc = partial.data() + static_cast<std::size_t>(ix) * components;

    const double ysplit = (have_split && s2 > 0.0) ? ry * std::sqrt(s2) : -1.0;
    build_edges(grid.half_extent[1], ysplit, grid.panels, grid.grading, yedges);
    fill_axis(yedges, gx, gw, ay);

    for (std::size_t iy = 0; iy < ay.x.size(); ++iy) {
      const double y = ay.x[iy];
      const double wxy = wx * ay.w[iy];

      double t2 = -1.0;
      if (have_split) t2 = s2 - (y / ry) * (y / ry);
      const double zsplit = (have_split && t2 > 0.0) ? rz * std::sqrt(t2) : -1.0;
      build_edges(grid.half_extent[2], zsplit, grid.panels, grid.grading,
                  zedges);
      fill_axis(zedges, gx, gw, az);

      for (std::size_t iz = 0; iz < az.x.size(); ++iz) {
        const double w = wxy * az.w[iz];
        f({x, y, az.x[iz]}, vals);
        for (int c = 0; c < components; ++c) acc[c] += w * vals[c];
      }
    }
  };

  if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int ix = 0; ix < nx; ++ix) do_slice(ix);
  } else {
    for (int ix = 0; ix < nx; ++ix) do_slice(ix);
  }

  std::vector<double> total(components, 0.0);
  for (int ix = 0; ix < nx; ++ix) {
    for (int c = 0; c < components; ++c) {
      total[c] += partial[static_cast<std::size_t>(ix) * components + c];
    }
  }
  for (int c = 0; c < components; ++c) total[c] *= 8.0;  // octant symmetry
  return total;
}

}  // namespace becdecay
