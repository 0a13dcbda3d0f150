#pragma once

#include <cstdint>
#include <vector>

#include "swiptsec/design.hpp"
#include "swiptsec/scenario.hpp"
#include "swiptsec/solver.hpp"

// Validates a design against the true probabilistic constraints by sampling
// CSI errors and evaluating the exact system model (log-det eavesdropper
// information, realized harvested power) — no restriction involved.

namespace swiptsec {

struct OutageReport {
  int trials = 0;
  int secrecy_violations = 0;
  double secrecy_outage_rate = 0.0;
  double secrecy_ci_halfwidth = 0.0;  // binomial 95% half-width
  std::vector<int> eh_violations;     // per energy receiver
  std::vector<double> eh_outage_rate;
  std::vector<double> eh_ci_halfwidth;
  // How often eavesdropper i extracted the most information; empty when L=0.
  std::vector<int> worst_eve_histogram;
};

// Tallies, over `trials` independent error draws, how often the realized
// secrecy rate falls below cfg.rate_target (strictly) and how often each
// receiver harvests less than its target (strictly). Trial t draws from a
// generator seeded with base_seed ^ t, so the tally never depends on thread
// count or scheduling.
OutageReport validate_design(const BeamformingDesign& design, const ChannelSet& cs,
                             const ScenarioConfig& cfg, int trials, std::uint64_t base_seed);

// Single-threaded reference with bit-identical output, kept for testing the
// parallel tally and for benchmarking.
OutageReport validate_design_serial(const BeamformingDesign& design, const ChannelSet& cs,
                                    const ScenarioConfig& cfg, int trials,
                                    std::uint64_t base_seed);

// Fraction of freshly sampled channel sets for which the method's
// power-minimization program reports Optimal.
double feasibility_rate(const ScenarioConfig& cfg, MethodTag method, int n_instances,
                        std::mt19937_64& rng, const SolverSettings& settings = {});

}  // namespace swiptsec
