#include "swiptsec/montecarlo.hpp"

#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace swiptsec {

namespace {

struct Tally {
  long secrecy = 0;
  std::vector<long> eh;
  std::vector<long> worst_eve;

  explicit Tally(const ScenarioConfig& cfg)
      : eh(cfg.n_er, 0), worst_eve(cfg.n_eve, 0) {}

  void merge(const Tally& o) {
    secrecy += o.secrecy;
    for (size_t i = 0; i < eh.size(); ++i) eh[i] += o.eh[i];
    for (size_t i = 0; i < worst_eve.size(); ++i) worst_eve[i] += o.worst_eve[i];
  }
};

void run_trial(const BeamformingDesign& design, const ChannelSet& cs,
               const ScenarioConfig& cfg, double receiver_rate, std::uint64_t seed,
               Tally& tally) {
  std::mt19937_64 rng(seed);
  const RealizedChannels rc = sample_errors(cs, rng);

  double worst_info = 0.0;
  int worst_idx = -1;
  for (int i = 0; i < cfg.n_eve; ++i) {
    const double info = eavesdropper_information(design.Q, rc.H[i], cfg.sigma_e_sq);
    if (worst_idx < 0 || info > worst_info) {
      worst_info = info;
      worst_idx = i;
    }
  }
  if (worst_idx >= 0) ++tally.worst_eve[worst_idx];
  if (std::max(0.0, receiver_rate - worst_info) < cfg.rate_target) ++tally.secrecy;
  for (int k = 0; k < cfg.n_er; ++k)
    if (harvested_power(design.Q, rc.g[k], cfg.eh_efficiency[k]) < cfg.eh_targets[k])
      ++tally.eh[k];
}

OutageReport finish(const Tally& tally, int trials, const ScenarioConfig& cfg) {
  auto ci = [trials](double r) { return 1.96 * std::sqrt(r * (1.0 - r) / trials); };
  OutageReport rep;
  rep.trials = trials;
  rep.secrecy_violations = static_cast<int>(tally.secrecy);
  rep.secrecy_outage_rate = static_cast<double>(tally.secrecy) / trials;
  rep.secrecy_ci_halfwidth = ci(rep.secrecy_outage_rate);
  for (int k = 0; k < cfg.n_er; ++k) {
    rep.eh_violations.push_back(static_cast<int>(tally.eh[k]));
    rep.eh_outage_rate.push_back(static_cast<double>(tally.eh[k]) / trials);
    rep.eh_ci_halfwidth.push_back(ci(rep.eh_outage_rate.back()));
  }
  for (long c : tally.worst_eve) rep.worst_eve_histogram.push_back(static_cast<int>(c));
  return rep;
}

double receiver_rate_of(const BeamformingDesign& design, const ChannelSet& cs,
                        const ScenarioConfig& cfg) {
  // The information receiver's channel is exactly known, so its rate does not
  // vary across trials.
  return std::log2(1.0 + std::max(0.0, std::real(cs.h.dot(design.Q * cs.h))) /
                             cfg.sigma_d_sq);
}

}  // namespace

OutageReport validate_design_serial(const BeamformingDesign& design, const ChannelSet& cs,
                                    const ScenarioConfig& cfg, int trials,
                                    std::uint64_t base_seed) {
  if (trials < 1) throw std::invalid_argument("validate_design: trials must be >= 1");
  cfg.validate();
  const double rrate = receiver_rate_of(design, cs, cfg);
  Tally tally(cfg);
  for (int t = 0; t < trials; ++t)
    run_trial(design, cs, cfg, rrate, base_seed ^ static_cast<std::uint64_t>(t), tally);
  return finish(tally, trials, cfg);
}

OutageReport validate_design(const BeamformingDesign& design, const ChannelSet& cs,
                             const ScenarioConfig& cfg, int trials,
                             std::uint64_t base_seed) {
  if (trials < 1) throw std::invalid_argument("validate_design: trials must be >= 1");
  cfg.validate();
  const double rrate = receiver_rate_of(design, cs, cfg);
  Tally total(cfg);
#ifdef _OPENMP
#pragma omp parallel
  {
    Tally local(cfg);
#pragma omp for schedule(static)
    for (int t = 0; t < trials; ++t)
      run_trial(design, cs, cfg, rrate, base_seed ^ static_cast<std::uint64_t>(t), local);
#pragma omp critical
    total.merge(local);
  }
#else
  for (int t = 0; t < trials; ++t)
    run_trial(design, cs, cfg, rrate, base_seed ^ static_cast<std::uint64_t>(t), total);
#endif
  return finish(total, trials, cfg);
}

double feasibility_rate(const ScenarioConfig& cfg, MethodTag method, int n_instances,
                        std::mt19937_64& rng, const SolverSettings& settings) {
  if (n_instances < 1) throw std::invalid_argument("feasibility_rate: need >= 1 instances");
  int feasible = 0;
  for (int i = 0; i < n_instances; ++i) {
    const ChannelSet cs = sample_channels(cfg, rng);
    if (solve_power_min(cs, cfg, method, settings).status == SolveStatus::Optimal)
      ++feasible;
  }
  return static_cast<double>(feasible) / n_instances;
}

}  // namespace swiptsec
