#pragma once

#include "swiptsec/conic.hpp"
#include "swiptsec/design.hpp"
#include "swiptsec/scenario.hpp"

// Compiles the chance-constrained power-minimization problem into conic form
// under three convex restrictions (concentration bound, ball implication,
// deviation decomposition) and the estimate-as-truth baseline. Feasibility of
// any restricted program certifies the original probabilistic constraints.

namespace swiptsec {

// Quantile of the chi-square distribution with dof degrees of freedom:
// x with P(dof/2, x/2) = prob to 1e-10, P the regularized lower incomplete
// gamma.
double chi2_inv_cdf(double prob, int dof);

// Positive solution of (1 - 1/(2v^2)) v = sqrt(-ln p); always > 1/sqrt(2).
double solve_v(double p);

struct RestrictionParams {
  VecR gamma_eve;   // per-eavesdropper ball radius, dof 2*n_tx*n_e
  double gamma_er = 0.0;  // ER ball radius, dof 2*n_tx
  double v_secrecy = 0.0, v_eh = 0.0;  // deviation parameters
  double sqrt_m2ln_p = 0.0, neg_ln_p = 0.0;
  double sqrt_m2ln_q = 0.0, neg_ln_q = 0.0;
};

RestrictionParams make_restriction_params(const ScenarioConfig& cfg);

// Each builder returns a program minimizing tr(Q) over the named variable
// range "Q" (embedded svec coordinates) plus method-specific slack variables.
// All require rate_target > 0.
ConicProgram build_power_min_bti(const ChannelSet& cs, const ScenarioConfig& cfg);
ConicProgram build_power_min_sproc(const ChannelSet& cs, const ScenarioConfig& cfg);
ConicProgram build_power_min_ldi(const ChannelSet& cs, const ScenarioConfig& cfg);
ConicProgram build_power_min_nonrobust(const ChannelSet& cs, const ScenarioConfig& cfg);

// Dispatcher over the four program builders (MRT has no program).
ConicProgram build_power_min(MethodTag method, const ChannelSet& cs, const ScenarioConfig& cfg);

// Beamforming along the receiver channel at full budget:
// Q = (P_T/||h||^2) h h^H.
BeamformingDesign mrt_design(const ChannelSet& cs, const ScenarioConfig& cfg);

}  // namespace swiptsec
