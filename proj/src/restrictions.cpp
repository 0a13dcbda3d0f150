#include "swiptsec/restrictions.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace swiptsec {

namespace {

// Regularized lower incomplete gamma P(a,x), series branch.
double gamma_p_series(double a, double x) {
  double ap = a, term = 1.0 / a, sum = term;
  for (int n = 0; n < 500; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Complement Q(a,x) via Lentz continued fraction, valid for x >= a+1.
double gamma_q_contfrac(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, f = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return f * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_p(double a, double x) {
  if (x <= 0.0) return 0.0;
  return x < a + 1.0 ? gamma_p_series(a, x) : 1.0 - gamma_q_contfrac(a, x);
}

// Shared builder state and the affine pieces every restriction reuses.
struct Common {
  const ChannelSet& cs;
  const ScenarioConfig& cfg;
  int n, dq, L, K;
  double rate_coef;  // sigma_e^2 / 2^R

  MatC q_of(const VecR& x) const { return reconstruct_hermitian(smat(VecR(x.head(dq)))); }
  double h_quad(const MatC& Q) const { return std::real(cs.h.dot(Q * cs.h)); }
  // Receiver-rate surplus of the secrecy margin; what remains after the
  // eavesdropper-side mean term is subtracted.
  double tau_eve(const MatC& Q, int i) const {
    const MatC& H = cs.H_hat[i];
    return rate_coef * (1.0 + h_quad(Q) / cfg.sigma_d_sq) - cfg.sigma_e_sq -
           std::real((H.adjoint() * Q * H).trace());
  }
  MatC eve_S(const MatC& Q, int i) const {
    return cs.R_H_sqrt[i] * kron_identity_left(cfg.eve_antennas[i], Q) * cs.R_H_sqrt[i];
  }
  VecC eve_w(const MatC& Q, int i) const {
    const MatC& Hh = cs.H_hat[i];
    Eigen::Map<const VecC> hv(Hh.data(), Hh.size());
    return cs.R_H_sqrt[i] * (kron_identity_left(cfg.eve_antennas[i], Q) * hv);
  }
  MatC er_A(const MatC& Q, int k) const { return cs.R_g_sqrt[k] * Q * cs.R_g_sqrt[k]; }
  VecC er_w(const MatC& Q, int k) const { return cs.R_g_sqrt[k] * (Q * cs.g_hat[k]); }
  double er_theta(const MatC& Q, int k) const {
    return std::real(cs.g_hat[k].dot(Q * cs.g_hat[k])) -
           cfg.eh_targets[k] / cfg.eh_efficiency[k];
  }
};

Common make_common(const ChannelSet& cs, const ScenarioConfig& cfg) {
  cfg.validate();
  if (!(cfg.rate_target > 0.0))
    throw std::invalid_argument("power-min builders require rate_target > 0");
  auto bad = [](const char* what) {
    throw std::invalid_argument(std::string("channel set does not match config: ") + what);
  };
  if (static_cast<int>(cs.h.size()) != cfg.n_tx) bad("h length");
  if (static_cast<int>(cs.g_hat.size()) != cfg.n_er ||
      static_cast<int>(cs.R_g_sqrt.size()) != cfg.n_er)
    bad("ER channel count");
  if (static_cast<int>(cs.H_hat.size()) != cfg.n_eve ||
      static_cast<int>(cs.R_H_sqrt.size()) != cfg.n_eve)
    bad("eavesdropper channel count");
  for (int i = 0; i < cfg.n_eve; ++i) {
    if (cs.H_hat[i].rows() != cfg.n_tx || cs.H_hat[i].cols() != cfg.eve_antennas[i])
      bad("eavesdropper channel shape");
    if (cs.R_H_sqrt[i].rows() != cfg.n_tx * cfg.eve_antennas[i]) bad("eavesdropper covariance");
  }
  Common cm{cs,
            cfg,
            cfg.n_tx,
            svec_dim(2 * cfg.n_tx),
            cfg.n_eve,
            cfg.n_er,
            cfg.sigma_e_sq / std::exp2(cfg.rate_target)};
  return cm;
}

VecR embed_cvec(const VecC& w) {
  VecR r(2 * w.size());
  r.head(w.size()) = w.real();
  r.tail(w.size()) = w.imag();
  return r;
}

void set_trace_objective(ConicProgram& prog, const Common& cm) {
  prog.c.head(cm.dq) = 0.5 * svec(MatR(MatR::Identity(2 * cm.n, 2 * cm.n)));
}

// ||tail(x)|| <= x[head_var], with the tail rows compressed to at most
// rank+1 rows before entering the program.
ConicBlock norm_le_var(const std::string& label, int nvars, int head_var,
                       const std::function<VecR(const VecR&)>& tail) {
  VecR probe = VecR::Zero(nvars);
  const VecR t0 = tail(probe);
  MatR T(t0.size(), nvars);
  for (int j = 0; j < nvars; ++j) {
    probe[j] = 1.0;
    T.col(j) = tail(probe) - t0;
    probe[j] = 0.0;
  }
  auto [U, u0] = compress_norm_rows(T, t0);
  const int m = static_cast<int>(U.rows());
  ConicBlock blk;
  blk.label = label;
  // An identically-zero tail leaves only the bound x[head_var] >= 0; a 1-row
  // second-order cone would be a degenerate copy of it.
  blk.cone = m > 0 ? ConeTag::second_order(1 + m) : ConeTag::nonneg(1);
  blk.A = MatR::Zero(1 + m, nvars);
  blk.b = VecR::Zero(1 + m);
  blk.A(0, head_var) = -1.0;
  if (m > 0) {
    blk.A.bottomRows(m) = -U;
    blk.b.tail(m) = u0;
  }
  return blk;
}

int add_block(ConicProgram& prog, ConicBlock blk) {
  return prog.add_block(std::move(blk.label), blk.cone, std::move(blk.A), std::move(blk.b));
}

// An exactly-zero error covariance collapses a robust receiver block to its
// nominal constraint. Emitting the degenerate limit instead (zero deviation
// matrices inside LMI or norm blocks) leaves redundant multipliers whose dual
// is non-unique and stalls the interior-point iteration.
bool zero_covariance(const MatC& sqrt_cov) { return sqrt_cov.squaredNorm() == 0.0; }

void add_nominal_eve_margin(ConicProgram& prog, const Common& cm, int i) {
  add_block(prog, block_from_affine("eve" + std::to_string(i) + "/margin", ConeTag::nonneg(1),
                                    prog.num_vars, [&cm, i](const VecR& x) {
                                      VecR r(1);
                                      r[0] = cm.tau_eve(cm.q_of(x), i);
                                      return r;
                                    }));
}

void add_nominal_er_margin(ConicProgram& prog, const Common& cm, int k) {
  add_block(prog, block_from_affine("er" + std::to_string(k) + "/margin", ConeTag::nonneg(1),
                                    prog.num_vars, [&cm, k](const VecR& x) {
                                      VecR r(1);
                                      r[0] = cm.er_theta(cm.q_of(x), k);
                                      return r;
                                    }));
}

void pin_vars_to_zero(ConicProgram& prog, const std::string& label, const std::vector<int>& vars) {
  if (vars.empty()) return;
  const int m = static_cast<int>(vars.size());
  MatR A = MatR::Zero(m, prog.num_vars);
  for (int r = 0; r < m; ++r) A(r, vars[r]) = 1.0;
  prog.add_block(label, ConeTag::zero(m), std::move(A), VecR::Zero(m));
}

void add_nonneg_bounds(ConicProgram& prog, const std::string& label, const std::vector<int>& vars) {
  if (vars.empty()) return;
  const int m = static_cast<int>(vars.size());
  MatR A = MatR::Zero(m, prog.num_vars);
  for (int r = 0; r < m; ++r) A(r, vars[r]) = -1.0;
  prog.add_block(label, ConeTag::nonneg(m), std::move(A), VecR::Zero(m));
}

// Q PSD plus, when no eavesdropper row carries it, the explicit receiver-rate
// floor h^H Q h >= (2^R - 1) sigma_d^2.
void add_common_tail(ConicProgram& prog, const Common& cm) {
  MatR A = MatR::Zero(cm.dq, prog.num_vars);
  A.leftCols(cm.dq) = -MatR::Identity(cm.dq, cm.dq);
  prog.add_block("Q/psd", ConeTag::psd(2 * cm.n), std::move(A), VecR::Zero(cm.dq));
  if (cm.L == 0) {
    const double floor = (std::exp2(cm.cfg.rate_target) - 1.0) * cm.cfg.sigma_d_sq;
    add_block(prog, block_from_affine("rate-floor", ConeTag::nonneg(1), prog.num_vars,
                                     [&](const VecR& x) {
                                       VecR r(1);
                                       r[0] = cm.h_quad(cm.q_of(x)) - floor;
                                       return r;
                                     }));
  }
}

}  // namespace

double chi2_inv_cdf(double prob, int dof) {
  if (!(prob > 0.0 && prob < 1.0))
    throw std::invalid_argument("chi2_inv_cdf: prob must lie strictly in (0,1)");
  if (dof < 1) throw std::invalid_argument("chi2_inv_cdf: dof must be positive");
  const double a = 0.5 * dof;
  auto cdf = [a](double x) { return gamma_p(a, 0.5 * x); };
  double lo = 0.0, hi = std::max(1.0, static_cast<double>(dof));
  while (cdf(hi) < prob) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) < prob ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double solve_v(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("solve_v: p must lie strictly in (0,1)");
  const double c = std::sqrt(-std::log(p));
  return 0.5 * (c + std::sqrt(c * c + 2.0));
}

RestrictionParams make_restriction_params(const ScenarioConfig& cfg) {
  if (!(cfg.p_secrecy < 1.0) || !(cfg.q_eh < 1.0))
    throw std::invalid_argument("restriction parameters are undefined for outage tolerance 1");
  RestrictionParams rp;
  rp.gamma_eve.resize(cfg.n_eve);
  for (int i = 0; i < cfg.n_eve; ++i)
    rp.gamma_eve[i] =
        std::sqrt(chi2_inv_cdf(1.0 - cfg.p_secrecy, 2 * cfg.n_tx * cfg.eve_antennas[i]) / 2.0);
  rp.gamma_er = std::sqrt(chi2_inv_cdf(1.0 - cfg.q_eh, 2 * cfg.n_tx) / 2.0);
  rp.v_secrecy = solve_v(cfg.p_secrecy);
  rp.v_eh = solve_v(cfg.q_eh);
  rp.neg_ln_p = -std::log(cfg.p_secrecy);
  rp.neg_ln_q = -std::log(cfg.q_eh);
  rp.sqrt_m2ln_p = std::sqrt(2.0 * rp.neg_ln_p);
  rp.sqrt_m2ln_q = std::sqrt(2.0 * rp.neg_ln_q);
  return rp;
}

ConicProgram build_power_min_bti(const ChannelSet& cs, const ScenarioConfig& cfg) {
  const Common cm = make_common(cs, cfg);
  const RestrictionParams rp = make_restriction_params(cfg);
  ConicProgram prog(cm.dq + 2 * cm.L + 2 * cm.K);
  prog.name_range("Q", 0, cm.dq);
  if (cm.L + cm.K > 0) prog.name_range("slacks", cm.dq, 2 * cm.L + 2 * cm.K);
  set_trace_objective(prog, cm);

  for (int i = 0; i < cm.L; ++i) {
    const std::string tag = "eve" + std::to_string(i);
    const int psi = cm.dq + 2 * i, omega = psi + 1;
    const int side = 2 * cm.n * cfg.eve_antennas[i];
    add_block(prog, block_from_affine(
        tag + "/margin", ConeTag::nonneg(1), prog.num_vars, [&, i, psi, omega](const VecR& x) {
          const MatC Q = cm.q_of(x);
          VecR r(1);
          r[0] = cm.tau_eve(Q, i) - std::real(cm.eve_S(Q, i).trace()) -
                 rp.sqrt_m2ln_p * x[psi] - rp.neg_ln_p * x[omega];
          return r;
        }));
    add_block(prog, norm_le_var(tag + "/deviation-norm", prog.num_vars, psi,
                                [&, i](const VecR& x) {
                                  const MatC Q = cm.q_of(x);
                                  const VecR sm = svec(embed_hermitian(cm.eve_S(Q, i)));
                                  const VecR wv = embed_cvec(cm.eve_w(Q, i));
                                  VecR t(sm.size() + wv.size());
                                  t << sm / std::sqrt(2.0), std::sqrt(2.0) * wv;
                                  return t;
                                }));
    add_block(prog, block_from_affine(
        tag + "/shift-bound", ConeTag::psd(side), prog.num_vars, [&, i, omega](const VecR& x) {
          const MatC Q = cm.q_of(x);
          const int s = 2 * cm.n * cfg.eve_antennas[i];
          return svec(MatR(x[omega] * MatR::Identity(s, s) - embed_hermitian(cm.eve_S(Q, i))));
        }));
  }

  for (int k = 0; k < cm.K; ++k) {
    const std::string tag = "er" + std::to_string(k);
    const int nu = cm.dq + 2 * cm.L + 2 * k, phi = nu + 1;
    add_block(prog, block_from_affine(
        tag + "/margin", ConeTag::nonneg(1), prog.num_vars, [&, k, nu, phi](const VecR& x) {
          const MatC Q = cm.q_of(x);
          VecR r(1);
          r[0] = std::real(cm.er_A(Q, k).trace()) - rp.sqrt_m2ln_q * x[nu] -
                 rp.neg_ln_q * x[phi] + cm.er_theta(Q, k);
          return r;
        }));
    add_block(prog, norm_le_var(tag + "/deviation-norm", prog.num_vars, nu,
                                [&, k](const VecR& x) {
                                  const MatC Q = cm.q_of(x);
                                  const VecR am = svec(embed_hermitian(cm.er_A(Q, k)));
                                  const VecR wv = embed_cvec(cm.er_w(Q, k));
                                  VecR t(am.size() + wv.size());
                                  t << am / std::sqrt(2.0), std::sqrt(2.0) * wv;
                                  return t;
                                }));
    add_block(prog, block_from_affine(
        tag + "/shift-bound", ConeTag::psd(2 * cm.n), prog.num_vars, [&, k, phi](const VecR& x) {
          const MatC Q = cm.q_of(x);
          return svec(
              MatR(x[phi] * MatR::Identity(2 * cm.n, 2 * cm.n) + embed_hermitian(cm.er_A(Q, k))));
        }));
  }

  if (cm.L + cm.K > 0) {
    const int ns = 2 * cm.L + 2 * cm.K;
    MatR A = MatR::Zero(ns, prog.num_vars);
    A.rightCols(ns) = -MatR::Identity(ns, ns);
    prog.add_block("slack-bounds", ConeTag::nonneg(ns), std::move(A), VecR::Zero(ns));
  }
  add_common_tail(prog, cm);
  return prog;
}

ConicProgram build_power_min_sproc(const ChannelSet& cs, const ScenarioConfig& cfg) {
  const Common cm = make_common(cs, cfg);
  const RestrictionParams rp = make_restriction_params(cfg);
  ConicProgram prog(cm.dq + cm.L + cm.K);
  prog.name_range("Q", 0, cm.dq);
  if (cm.L + cm.K > 0) prog.name_range("multipliers", cm.dq, cm.L + cm.K);
  set_trace_objective(prog, cm);

  std::vector<int> kept, pinned;
  for (int i = 0; i < cm.L; ++i) {
    const int mu = cm.dq + i;
    if (zero_covariance(cs.R_H_sqrt[i])) {
      add_nominal_eve_margin(prog, cm, i);
      pinned.push_back(mu);
      continue;
    }
    kept.push_back(mu);
    const int mc = cm.n * cfg.eve_antennas[i];  // complex side of the ball block
    const double gamma_sq = rp.gamma_eve[i] * rp.gamma_eve[i];
    add_block(prog, block_from_affine(
        "eve" + std::to_string(i) + "/ball-implication", ConeTag::psd(2 * (mc + 1)),
        prog.num_vars, [&, i, mu, mc, gamma_sq](const VecR& x) {
          const MatC Q = cm.q_of(x);
          MatC Th(mc + 1, mc + 1);
          Th.topLeftCorner(mc, mc) = x[mu] * MatC::Identity(mc, mc) - cm.eve_S(Q, i);
          const VecC w = cm.eve_w(Q, i);
          Th.topRightCorner(mc, 1) = -w;
          Th.bottomLeftCorner(1, mc) = -w.adjoint();
          Th(mc, mc) = cm.tau_eve(Q, i) - x[mu] * gamma_sq;
          return svec(embed_hermitian(Th));
        }));
  }
  for (int k = 0; k < cm.K; ++k) {
    const int mu = cm.dq + cm.L + k;
    if (zero_covariance(cs.R_g_sqrt[k])) {
      add_nominal_er_margin(prog, cm, k);
      pinned.push_back(mu);
      continue;
    }
    kept.push_back(mu);
    const double gamma_sq = rp.gamma_er * rp.gamma_er;
    add_block(prog, block_from_affine(
        "er" + std::to_string(k) + "/ball-implication", ConeTag::psd(2 * (cm.n + 1)),
        prog.num_vars, [&, k, mu, gamma_sq](const VecR& x) {
          const MatC Q = cm.q_of(x);
          MatC Up(cm.n + 1, cm.n + 1);
          Up.topLeftCorner(cm.n, cm.n) = x[mu] * MatC::Identity(cm.n, cm.n) + cm.er_A(Q, k);
          const VecC w = cm.er_w(Q, k);
          Up.topRightCorner(cm.n, 1) = w;
          Up.bottomLeftCorner(1, cm.n) = w.adjoint();
          Up(cm.n, cm.n) = cm.er_theta(Q, k) - x[mu] * gamma_sq;
          return svec(embed_hermitian(Up));
        }));
  }
  add_nonneg_bounds(prog, "multiplier-bounds", kept);
  pin_vars_to_zero(prog, "unused-multipliers", pinned);
  add_common_tail(prog, cm);
  return prog;
}

ConicProgram build_power_min_ldi(const ChannelSet& cs, const ScenarioConfig& cfg) {
  const Common cm = make_common(cs, cfg);
  const RestrictionParams rp = make_restriction_params(cfg);
  const double sqrt_ln_p = std::sqrt(rp.neg_ln_p), sqrt_ln_q = std::sqrt(rp.neg_ln_q);
  ConicProgram prog(cm.dq + 2 * cm.L + 2 * cm.K);
  prog.name_range("Q", 0, cm.dq);
  if (cm.L + cm.K > 0) prog.name_range("slacks", cm.dq, 2 * cm.L + 2 * cm.K);
  set_trace_objective(prog, cm);

  std::vector<int> pinned;
  for (int i = 0; i < cm.L; ++i) {
    const std::string tag = "eve" + std::to_string(i);
    const int psi = cm.dq + 2 * i, omega = psi + 1;
    if (zero_covariance(cs.R_H_sqrt[i])) {
      add_nominal_eve_margin(prog, cm, i);
      pinned.push_back(psi);
      pinned.push_back(omega);
      continue;
    }
    add_block(prog, block_from_affine(
        tag + "/margin", ConeTag::nonneg(1), prog.num_vars,
        [&, i, psi, omega](const VecR& x) {
          const MatC Q = cm.q_of(x);
          VecR r(1);
          r[0] = cm.tau_eve(Q, i) - std::real(cm.eve_S(Q, i).trace()) -
                 2.0 * sqrt_ln_p * (x[psi] + x[omega]);
          return r;
        }));
    add_block(prog, norm_le_var(tag + "/mean-norm", prog.num_vars, psi, [&, i](const VecR& x) {
                return VecR(embed_cvec(cm.eve_w(cm.q_of(x), i)) / std::sqrt(2.0));
              }));
    add_block(prog, norm_le_var(tag + "/spread-norm", prog.num_vars, omega,
                                [&, i](const VecR& x) {
                                  return VecR(rp.v_secrecy *
                                              svec(embed_hermitian(cm.eve_S(cm.q_of(x), i))) /
                                              std::sqrt(2.0));
                                }));
  }
  for (int k = 0; k < cm.K; ++k) {
    const std::string tag = "er" + std::to_string(k);
    const int nu = cm.dq + 2 * cm.L + 2 * k, phi = nu + 1;
    if (zero_covariance(cs.R_g_sqrt[k])) {
      add_nominal_er_margin(prog, cm, k);
      pinned.push_back(nu);
      pinned.push_back(phi);
      continue;
    }
    add_block(prog, block_from_affine(
        tag + "/margin", ConeTag::nonneg(1), prog.num_vars, [&, k, nu, phi](const VecR& x) {
          const MatC Q = cm.q_of(x);
          VecR r(1);
          r[0] = std::real(cm.er_A(Q, k).trace()) + cm.er_theta(Q, k) -
                 2.0 * sqrt_ln_q * (x[nu] + x[phi]);
          return r;
        }));
    add_block(prog, norm_le_var(tag + "/mean-norm", prog.num_vars, nu, [&, k](const VecR& x) {
                return VecR(embed_cvec(cm.er_w(cm.q_of(x), k)) / std::sqrt(2.0));
              }));
    add_block(prog, norm_le_var(tag + "/spread-norm", prog.num_vars, phi,
                                [&, k](const VecR& x) {
                                  return VecR(rp.v_eh *
                                              svec(embed_hermitian(cm.er_A(cm.q_of(x), k))) /
                                              std::sqrt(2.0));
                                }));
  }
  pin_vars_to_zero(prog, "unused-slacks", pinned);
  add_common_tail(prog, cm);
  return prog;
}

ConicProgram build_power_min_nonrobust(const ChannelSet& cs, const ScenarioConfig& cfg) {
  const Common cm = make_common(cs, cfg);
  ConicProgram prog(cm.dq);
  prog.name_range("Q", 0, cm.dq);
  set_trace_objective(prog, cm);
  for (int i = 0; i < cm.L; ++i)
    add_block(prog, block_from_affine("eve" + std::to_string(i) + "/margin", ConeTag::nonneg(1),
                                     prog.num_vars, [&, i](const VecR& x) {
                                       VecR r(1);
                                       r[0] = cm.tau_eve(cm.q_of(x), i);
                                       return r;
                                     }));
  for (int k = 0; k < cm.K; ++k)
    add_block(prog, block_from_affine(
        "er" + std::to_string(k) + "/margin", ConeTag::nonneg(1), prog.num_vars,
        [&, k](const VecR& x) {
          const MatC Q = cm.q_of(x);
          VecR r(1);
          r[0] = cfg.eh_efficiency[k] * std::real(cs.g_hat[k].dot(Q * cs.g_hat[k])) -
                 cfg.eh_targets[k];
          return r;
        }));
  add_common_tail(prog, cm);
  return prog;
}

ConicProgram build_power_min(MethodTag method, const ChannelSet& cs, const ScenarioConfig& cfg) {
  switch (method) {
    case MethodTag::BTI: return build_power_min_bti(cs, cfg);
    case MethodTag::SProcedure: return build_power_min_sproc(cs, cfg);
    case MethodTag::LDI: return build_power_min_ldi(cs, cfg);
    case MethodTag::NonRobust: return build_power_min_nonrobust(cs, cfg);
    case MethodTag::MRT: break;
  }
  throw std::invalid_argument("no conic program for this method");
}

BeamformingDesign mrt_design(const ChannelSet& cs, const ScenarioConfig& cfg) {
  cfg.validate();
  const double hn2 = cs.h.squaredNorm();
  if (!(hn2 > 1e-300)) throw std::invalid_argument("mrt_design: zero receiver channel");
  BeamformingDesign d;
  d.method = MethodTag::MRT;
  d.status = SolveStatus::Optimal;
  d.Q = (cfg.power_budget / hn2) * (cs.h * cs.h.adjoint());
  d.b = std::sqrt(cfg.power_budget / hn2) * cs.h;
  d.power = cfg.power_budget;
  d.rank_ratio = 0.0;
  return d;
}

}  // namespace swiptsec
