#pragma once

#include "swiptsec/design.hpp"
#include "swiptsec/scenario.hpp"
#include "swiptsec/solver.hpp"

// Secrecy-rate maximization under a transmit power budget, run as a bisection
// over the rate target: each probe solves the rate-constrained
// power-minimization problem and is feasible exactly when its optimal power
// fits the budget. Feasibility is monotone in the rate, so bisection finds
// the largest supportable rate.

namespace swiptsec {

struct SrmSettings {
  double tol_rate = 1e-3;  // final bracket width, bits/s/Hz
  int max_probes = 60;
  SolverSettings solver;
};

struct SrmResult {
  double rate = 0.0;         // largest certified-feasible rate
  BeamformingDesign design;  // the design achieving `rate` (zero if none)
  double bracket_lo = 0.0;   // feasible end of the final bracket
  double bracket_hi = 0.0;   // infeasible end (or the a-priori upper bound)
  double upper_bound = 0.0;  // log2(1 + P_T ||h||^2 / sigma_d^2)
  int probes = 0;            // power-minimization solves performed
  int failed_probes = 0;     // probes ending MaxIter/Numerical (treated infeasible)
  bool any_feasible = false;
  std::string note;
};

// Requires a conic method (no fixed-direction baseline) and P_T > 0. The
// cfg.rate_target field is ignored; the probe rate overrides it.
SrmResult solve_rate_max(const ChannelSet& cs, const ScenarioConfig& cfg, MethodTag method,
                         const SrmSettings& settings = {});

}  // namespace swiptsec
