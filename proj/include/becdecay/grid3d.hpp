#pragma once

#include <functional>
#include <span>
#include <vector>

#include "becdecay/trap.hpp"

namespace becdecay {

// Brute-force 3D tensor quadrature over the full space for integrands that
// are even in each Cartesian coordinate (true for anything built from the
// trap potential).  Integrates 8x the first octant with nested per-axis
// Gauss-Legendre panels.
//
// Densities built on a Thomas-Fermi condensate are only piecewise smooth:
// they kink (and the thermal density has a sqrt cusp) on the TF ellipsoid.
// A uniform grid stalls at ~1e-4 relative error there, so the panel edges
// are placed exactly on the conditional ellipsoid crossings
//   x = Rx,  y*(x) = Ry sqrt(1-(x/Rx)^2),  z*(x,y) = Rz sqrt(1-...),
// with panel widths power-graded toward the crossing from both sides.
using VectorIntegrand3D = std::function<void(const Vec3& r, std::span<double> out)>;

struct OctantGrid {
  Vec3 half_extent{0, 0, 0};  // integrate x in [0, half_extent[0]] etc.
  Vec3 ellipsoid{0, 0, 0};    // kink surface semi-axes; <= 0 disables splits
  int panels = 8;             // panels per region per axis
  int nodes = 10;             // Gauss-Legendre nodes per panel
  double grading = 4.0;       // power grading toward the split
};

// Full-space integral (8x octant).  The parallel flag only changes how the
// per-x-node partial sums are computed, never the final reduction order, so
// results are bitwise identical with and without it.
std::vector<double> integrate_even_3d(const VectorIntegrand3D& f,
                                      int components, const OctantGrid& grid,
                                      bool parallel = true);

// Gauss-Legendre rule on [-1, 1], computed at runtime by Newton iteration
// on the Legendre polynomial.  Exposed for reuse and direct testing.
void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights);

}  // namespace becdecay
