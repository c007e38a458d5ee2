#pragma once

#include "becdecay/thermal_cloud.hpp"

namespace becdecay {

// Contribution of one collision class to the total loss rates.  Losses
// only: both entries are <= 0.
struct LossChannel {
  double ndot = 0.0;  // atoms / s
  double edot = 0.0;  // J / s

  LossChannel& operator+=(const LossChannel& o) {
    ndot += o.ndot;
    edot += o.edot;
    return *this;
  }
};

// Loss-rate budget split by collision class.  The mixed classes (ct, cct,
// ctt) remove atoms from both components at once; the totals are the plain
// left-to-right channel sums, so Ndot == bg + cc + ... + ttt bitwise.
struct LossRates {
  LossChannel bg;                  // background-gas collisions
  LossChannel cc, ct, tt;          // two-body recombination
  LossChannel ccc, cct, ctt, ttt;  // three-body recombination

  double Ndot = 0.0;
  double Edot = 0.0;

  LossChannel two_body() const;
  LossChannel three_body() const;
};

// Total loss rates around an equilibrium summary (its field supplies the
// densities; its N_T/E_T/mu feed the background and per-atom terms).
//
// The twelve density-product integrals behind the channels are evaluated
// in a single shared quadrature pass over the same breakpoints as the
// cloud integration.  Rate constants multiply the finished integrals, so
// scaling chi (xi) rescales the matching channels exactly.  The thermal
// energy released per lost cloud atom is the local average e_T(r)/n_T(r);
// it always appears multiplied by a density that carries the n_T factor,
// so the integrands stay finite where the cloud empties out.
LossRates loss_rates(const EquilibriumSummary& summary,
                     const QuadratureOptions& opts = {});

// Named views of the same computation; both fill the complete struct from
// the one shared pass.
LossRates number_loss(const EquilibriumSummary& summary,
                      const QuadratureOptions& opts = {});
LossRates energy_loss(const EquilibriumSummary& summary,
                      const QuadratureOptions& opts = {});

// How the no-transfer comparison model charges number losses to each
// component.
enum class AttributionMode {
  attribution,  // mixed classes lose their atoms per event: ct 1+1,
                // cct 2+1, ctt 1+2; the split sums back to the total
  literal,      // each component decays as if alone: condensate-only
                // terms for ndot_c, cloud-only terms for ndot_t
};

struct SpeciesRates {
  double ndot_c = 0.0;  // condensate atoms / s
  double ndot_t = 0.0;  // thermal atoms / s
  // the same total regrouped by loss order (ndot_c + ndot_t algebraically)
  double bg = 0.0;
  double two_body = 0.0;
  double three_body = 0.0;
};

// Component-resolved number-loss rates.  The condensate profile and the
// cloud field are passed separately because the no-transfer model pairs a
// freshly refit condensate with a frozen-shape (rescaled) cloud from t=0;
// breakpoints from both are merged.  n_t_total is the current cloud count
// feeding the background term.
SpeciesRates attributed_losses(
    const CondensateProfile& condensate, const ThermalCloudField& cloud,
    double n_t_total, AttributionMode mode = AttributionMode::attribution,
    const QuadratureOptions& opts = {});

// Consistent-state convenience overload (condensate and cloud taken from
// the summary's own field).
SpeciesRates attributed_losses(
    const EquilibriumSummary& summary,
    AttributionMode mode = AttributionMode::attribution,
    const QuadratureOptions& opts = {});

}  // namespace becdecay
