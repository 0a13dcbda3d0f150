#include "swiptsec/scenario.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace swiptsec {

namespace {

void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(std::string("scenario config: ") + what);
}

// Hermitian within 1e-10 asymmetry and eigenvalues >= -1e-10.
void check_psd_spec(const MatC& R, int side, const char* what) {
  if (R.rows() != side || R.cols() != side)
    throw std::invalid_argument(std::string("scenario config: wrong covariance size for ") + what);
  if (!is_hermitian(R, 1e-10))
    throw std::invalid_argument(std::string("scenario config: covariance not Hermitian for ") +
                                what);
  Eigen::SelfAdjointEigenSolver<MatC> eig(R, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-10)
    throw std::invalid_argument(std::string("scenario config: covariance not PSD for ") + what);
}

struct ComplexDrawer {
  std::mt19937_64& rng;
  std::normal_distribution<double> nd{0.0, 1.0};
  // One complex sample with the given per-complex-entry variance; real part
  // drawn before imaginary part.
  Cplx operator()(double var) {
    const double sd = std::sqrt(0.5 * var);
    const double re = sd * nd(rng);
    const double im = sd * nd(rng);
    return {re, im};
  }
};

}  // namespace

double PathLoss::gain() const { return l_c * std::pow(distance, -exponent); }

void ScenarioConfig::validate() const {
  require(n_tx >= 1, "n_tx must be positive");
  require(n_er >= 0 && n_eve >= 0, "receiver counts must be nonnegative");
  require(static_cast<int>(eve_antennas.size()) == n_eve, "eve_antennas length must equal n_eve");
  for (int ne : eve_antennas) require(ne >= 1, "eve antenna counts must be positive");
  require(sigma_d_sq > 0 && sigma_e_sq > 0, "noise powers must be positive");
  require(p_secrecy > 0 && p_secrecy <= 1, "p_secrecy must lie in (0,1]");
  require(q_eh > 0 && q_eh <= 1, "q_eh must lie in (0,1]");
  require(rate_target >= 0, "rate_target must be nonnegative");
  require(static_cast<int>(eh_targets.size()) == n_er, "eh_targets length must equal n_er");
  for (double eta : eh_targets) require(eta >= 0, "eh targets must be nonnegative");
  require(static_cast<int>(eh_efficiency.size()) == n_er, "eh_efficiency length must equal n_er");
  for (double xi : eh_efficiency) require(xi > 0 && xi <= 1, "eh efficiencies must lie in (0,1]");
  require(power_budget > 0, "power_budget must be positive");
  require(pathloss.l_c > 0, "pathloss reference gain must be positive");
  require(pathloss.distance > 0, "pathloss distance must be positive");
  require(error_scale.eps_sq >= 0, "error_scale eps_sq must be nonnegative");
  if (error_scale.has_explicit()) {
    require(static_cast<int>(error_scale.er_cov.size()) == n_er,
            "explicit er covariances must cover every ER");
    require(static_cast<int>(error_scale.eve_cov.size()) == n_eve,
            "explicit eve covariances must cover every eavesdropper");
    for (int k = 0; k < n_er; ++k) check_psd_spec(error_scale.er_cov[k], n_tx, "ER");
    for (int i = 0; i < n_eve; ++i)
      check_psd_spec(error_scale.eve_cov[i], n_tx * eve_antennas[i], "eavesdropper");
  }
}

ChannelSet sample_channels(const ScenarioConfig& cfg, std::mt19937_64& rng) {
  cfg.validate();
  const double var = cfg.pathloss.gain() / cfg.n_tx;
  ComplexDrawer draw{rng};

  ChannelSet cs;
  cs.h.resize(cfg.n_tx);
  for (int t = 0; t < cfg.n_tx; ++t) cs.h[t] = draw(var);
  cs.g_hat.resize(cfg.n_er);
  for (int k = 0; k < cfg.n_er; ++k) {
    cs.g_hat[k].resize(cfg.n_tx);
    for (int t = 0; t < cfg.n_tx; ++t) cs.g_hat[k][t] = draw(var);
  }
  cs.H_hat.resize(cfg.n_eve);
  for (int i = 0; i < cfg.n_eve; ++i) {
    cs.H_hat[i].resize(cfg.n_tx, cfg.eve_antennas[i]);
    for (int c = 0; c < cfg.eve_antennas[i]; ++c)
      for (int r = 0; r < cfg.n_tx; ++r) cs.H_hat[i](r, c) = draw(var);
  }

  cs.R_g.resize(cfg.n_er);
  cs.R_g_sqrt.resize(cfg.n_er);
  for (int k = 0; k < cfg.n_er; ++k) {
    cs.R_g[k] = cfg.error_scale.has_explicit()
                    ? cfg.error_scale.er_cov[k]
                    : MatC(cfg.error_scale.eps_sq * MatC::Identity(cfg.n_tx, cfg.n_tx));
    cs.R_g_sqrt[k] = psd_sqrt(cs.R_g[k]);
  }
  cs.R_H.resize(cfg.n_eve);
  cs.R_H_sqrt.resize(cfg.n_eve);
  for (int i = 0; i < cfg.n_eve; ++i) {
    const int side = cfg.n_tx * cfg.eve_antennas[i];
    cs.R_H[i] = cfg.error_scale.has_explicit()
                    ? cfg.error_scale.eve_cov[i]
                    : MatC(cfg.error_scale.eps_sq * MatC::Identity(side, side));
    cs.R_H_sqrt[i] = psd_sqrt(cs.R_H[i]);
  }
  return cs;
}

RealizedChannels sample_errors(const ChannelSet& cs, std::mt19937_64& rng) {
  ComplexDrawer draw{rng};
  const int n_tx = static_cast<int>(cs.h.size());

  RealizedChannels rc;
  rc.g.resize(cs.g_hat.size());
  for (size_t k = 0; k < cs.g_hat.size(); ++k) {
    VecC u(n_tx);
    for (int t = 0; t < n_tx; ++t) u[t] = draw(1.0);
    rc.g[k] = cs.g_hat[k] + cs.R_g_sqrt[k] * u;
  }
  rc.H.resize(cs.H_hat.size());
  for (size_t i = 0; i < cs.H_hat.size(); ++i) {
    const int len = static_cast<int>(cs.R_H_sqrt[i].rows());
    VecC v(len);
    for (int t = 0; t < len; ++t) v[t] = draw(1.0);
    const VecC delta = cs.R_H_sqrt[i] * v;
    rc.H[i] = cs.H_hat[i] +
              Eigen::Map<const MatC>(delta.data(), cs.H_hat[i].rows(), cs.H_hat[i].cols());
  }
  return rc;
}

MatC load_complex_matrix(const std::string& path, int rows, int cols) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix file: " + path);
  MatC M(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      double re, im;
      if (!(in >> re >> im))
        throw std::runtime_error("matrix file too short or malformed: " + path);
      M(r, c) = {re, im};
    }
  return M;
}

}  // namespace swiptsec
