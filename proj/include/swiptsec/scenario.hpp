#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "swiptsec/hermitian.hpp"

// Problem instances: system dimensions, statistical CSI model, QoS targets,
// and seeded generation of random channel realizations.

namespace swiptsec {

struct PathLoss {
  double l_c = 1.0;      // reference gain
  double exponent = 0.0; // decay exponent
  double distance = 1.0; // meters
  // Linear channel-power gain l_c * d^(-exponent), absorbed into the sampled
  // channel entries.
  double gain() const;
};

// CSI error covariance specification. Default is eps_sq * I per receiver;
// explicit PSD matrices (e.g. loaded from file) override it when present.
struct ErrorScale {
  double eps_sq = 0.0;
  std::vector<MatC> er_cov;   // size n_er when used, each n_tx x n_tx
  std::vector<MatC> eve_cov;  // size n_eve when used, each (n_tx*n_e) square
  bool has_explicit() const { return !er_cov.empty() || !eve_cov.empty(); }
};

struct ScenarioConfig {
  int n_tx = 1;   // transmit antennas
  int n_er = 0;   // energy-harvesting receivers
  int n_eve = 0;  // eavesdroppers
  std::vector<int> eve_antennas;  // length n_eve
  double sigma_d_sq = 1.0;  // information receiver noise power (linear)
  double sigma_e_sq = 1.0;  // eavesdropper noise power (linear)
  double p_secrecy = 0.1;   // secrecy outage tolerance in (0,1]
  double q_eh = 0.1;        // energy outage tolerance in (0,1]
  double rate_target = 1.0;            // R, bits/s/Hz
  std::vector<double> eh_targets;      // length n_er, linear units
  std::vector<double> eh_efficiency;   // length n_er, in (0,1]
  double power_budget = 1.0;           // P_T, linear (rate-maximization only)
  PathLoss pathloss;
  ErrorScale error_scale;
  std::uint64_t rng_seed = 0;

  // Throws std::invalid_argument on inconsistent dimensions or out-of-range
  // parameters.
  void validate() const;
};

// One drawn instance. Estimated channels plus the error covariances (and
// their cached PSD square roots, used by the per-trial error sampler).
struct ChannelSet {
  VecC h;                              // info-receiver channel, exactly known
  std::vector<VecC> g_hat;             // estimated ER channels
  std::vector<MatC> H_hat;             // estimated Eve channels, n_tx x n_e
  std::vector<MatC> R_g;               // ER error covariances
  std::vector<MatC> R_H;               // Eve error covariances over vec(delta)
  std::vector<MatC> R_g_sqrt, R_H_sqrt;
};

struct RealizedChannels {
  std::vector<VecC> g;
  std::vector<MatC> H;
};

// Draws estimated channels entrywise i.i.d. circular Gaussian with variance
// pathloss.gain()/n_tx per complex entry, in the fixed order h, g_hat[0..],
// H_hat[0..] (column-major), real part before imaginary part. Covariances
// come from cfg.error_scale. Deterministic for a fixed generator state.
ChannelSet sample_channels(const ScenarioConfig& cfg, std::mt19937_64& rng);

// Draws g = g_hat + R_g^(1/2) u and H = H_hat + unvec(R_H^(1/2) v) with u, v
// standard circular Gaussian; ERs first, then eavesdroppers.
RealizedChannels sample_errors(const ChannelSet& cs, std::mt19937_64& rng);

// Dense complex matrix text format: rows*cols whitespace-separated "re im"
// pairs, row-major.
MatC load_complex_matrix(const std::string& path, int rows, int cols);

}  // namespace swiptsec
