#include "swiptsec/srm.hpp"

#include <cmath>
#include <stdexcept>

namespace swiptsec {

SrmResult solve_rate_max(const ChannelSet& cs, const ScenarioConfig& cfg, MethodTag method,
                         const SrmSettings& settings) {
  if (method == MethodTag::MRT || method == MethodTag::NonRobust)
    throw std::invalid_argument("rate maximization requires a restriction method");
  cfg.validate();
  if (!(cfg.power_budget > 0.0))
    throw std::invalid_argument("rate maximization requires a positive power budget");

  SrmResult res;
  res.upper_bound = std::log2(1.0 + cfg.power_budget * cs.h.squaredNorm() / cfg.sigma_d_sq);
  res.bracket_hi = res.upper_bound;
  // Power cap with a whisker of slack so boundary probes are not rejected for
  // solver-tolerance noise; the bracket width absorbs the difference.
  const double cap = cfg.power_budget * (1.0 + 1e-9);

  ScenarioConfig probe_cfg = cfg;
  double lo = 0.0, hi = res.upper_bound;
  while (hi - lo > settings.tol_rate && res.probes < settings.max_probes) {
    const double mid = 0.5 * (lo + hi);
    probe_cfg.rate_target = mid;
    BeamformingDesign d = solve_power_min(cs, probe_cfg, method, settings.solver);
    ++res.probes;
    bool feasible = false;
    switch (d.status) {
      case SolveStatus::Optimal: feasible = d.power <= cap; break;
      case SolveStatus::PrimalInfeasible:
      case SolveStatus::DualInfeasible: break;
      case SolveStatus::MaxIter:
      case SolveStatus::Numerical: ++res.failed_probes; break;
    }
    if (feasible) {
      lo = mid;
      res.any_feasible = true;
      res.design = std::move(d);
      res.design.note = "rate " + std::to_string(mid);
    } else {
      hi = mid;
    }
  }
  res.bracket_lo = lo;
  res.bracket_hi = hi;
  res.rate = lo;
  if (!res.any_feasible) {
    res.design.method = method;
    res.design.status = SolveStatus::PrimalInfeasible;
    res.design.Q = MatC::Zero(cfg.n_tx, cfg.n_tx);
    res.design.b = VecC::Zero(cfg.n_tx);
    res.design.power = 0.0;
    res.note = "no probed rate was feasible within the power budget";
  } else if (res.failed_probes > 0) {
    res.note = std::to_string(res.failed_probes) + " probe(s) failed numerically";
  }
  return res;
}

}  // namespace swiptsec
