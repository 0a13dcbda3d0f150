#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "swiptsec/design.hpp"
#include "swiptsec/restrictions.hpp"
#include "swiptsec/solver.hpp"

using namespace swiptsec;

namespace {

ScenarioConfig small_cfg() {
  ScenarioConfig cfg;
  cfg.n_tx = 4;
  cfg.n_er = 1;
  cfg.n_eve = 1;
  cfg.eve_antennas = {2};
  cfg.sigma_d_sq = 0.5;
  cfg.sigma_e_sq = 1.0;
  cfg.p_secrecy = 0.1;
  cfg.q_eh = 0.1;
  cfg.rate_target = 1.0;
  cfg.eh_targets = {0.1};
  cfg.eh_efficiency = {0.5};
  cfg.power_budget = 10.0;
  cfg.error_scale.eps_sq = 0.01;
  cfg.rng_seed = 6;
  return cfg;
}

ScenarioConfig wide_cfg() {
  ScenarioConfig cfg;
  cfg.n_tx = 8;
  cfg.n_er = 3;
  cfg.n_eve = 2;
  cfg.eve_antennas = {2, 2};
  cfg.eh_targets = {0.05, 0.05, 0.05};
  cfg.eh_efficiency = {0.5, 0.5, 0.5};
  cfg.rate_target = 1.0;
  cfg.error_scale.eps_sq = 0.002;
  cfg.rng_seed = 11;
  return cfg;
}

SolverSettings test_settings() {
  SolverSettings st;
  st.check_weak_duality = true;
  return st;
}

double solved_power(const ChannelSet& cs, const ScenarioConfig& cfg, MethodTag m) {
  BeamformingDesign d = solve_power_min(cs, cfg, m, test_settings());
  REQUIRE(d.status == SolveStatus::Optimal);
  return d.power;
}

const ConicBlock& find_block(const ConicProgram& prog, const std::string& label) {
  for (const auto& b : prog.blocks)
    if (b.label == label) return b;
  FAIL("missing block ", label);
  return prog.blocks.front();
}

}  // namespace

TEST_CASE("chi-square quantiles match frozen oracle values") {
  // Reference values computed with 50-digit arithmetic.
  CHECK(chi2_inv_cdf(0.5, 2) == doctest::Approx(1.3862943611198906).epsilon(1e-10));
  CHECK(chi2_inv_cdf(0.9, 2) == doctest::Approx(4.6051701859880914).epsilon(1e-10));
  CHECK(chi2_inv_cdf(0.9, 36) == doctest::Approx(47.212173894937364).epsilon(1e-10));
  CHECK(chi2_inv_cdf(0.95, 1) == doctest::Approx(3.841458820694126).epsilon(1e-10));
  CHECK(chi2_inv_cdf(0.3, 5) == doctest::Approx(2.9999081327599063).epsilon(1e-10));
  CHECK(chi2_inv_cdf(0.9, 16) == doctest::Approx(23.541828923096112).epsilon(1e-10));
}

TEST_CASE("chi-square quantile is monotone and rejects bad arguments") {
  CHECK(chi2_inv_cdf(0.9, 36) > chi2_inv_cdf(0.9, 16));
  CHECK(chi2_inv_cdf(0.99, 4) > chi2_inv_cdf(0.9, 4));
  CHECK_THROWS_AS(chi2_inv_cdf(0.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(chi2_inv_cdf(1.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(chi2_inv_cdf(0.5, 0), std::invalid_argument);
}

TEST_CASE("deviation parameter v solves its fixed-point equation") {
  CHECK(solve_v(0.1) == doctest::Approx(1.7958472461669101).epsilon(1e-12));
  CHECK(solve_v(std::exp(-1.0)) ==
        doctest::Approx(0.5 * (1.0 + std::sqrt(3.0))).epsilon(1e-12));
  for (double p : {0.3, 0.05, 0.9, 1e-4}) {
    const double v = solve_v(p);
    CHECK(v > 1.0 / std::sqrt(2.0));
    CHECK((1.0 - 1.0 / (2.0 * v * v)) * v ==
          doctest::Approx(std::sqrt(-std::log(p))).epsilon(1e-12));
  }
  CHECK_THROWS_AS(solve_v(0.0), std::invalid_argument);
  CHECK_THROWS_AS(solve_v(1.0), std::invalid_argument);
}

TEST_CASE("restriction parameters: ball radii use the right degrees of freedom") {
  ScenarioConfig cfg = wide_cfg();  // n_tx=8, eve antennas 2 -> dof 32; ER dof 16
  cfg.p_secrecy = 0.1;
  cfg.q_eh = 0.1;
  RestrictionParams rp = make_restriction_params(cfg);
  REQUIRE(rp.gamma_eve.size() == 2);
  CHECK(rp.gamma_eve[0] == doctest::Approx(std::sqrt(chi2_inv_cdf(0.9, 32) / 2.0)));
  CHECK(rp.gamma_eve[1] == rp.gamma_eve[0]);
  CHECK(rp.gamma_er == doctest::Approx(std::sqrt(chi2_inv_cdf(0.9, 16) / 2.0)));
  CHECK(rp.sqrt_m2ln_p == doctest::Approx(std::sqrt(-2.0 * std::log(0.1))));
  CHECK(rp.neg_ln_q == doctest::Approx(-std::log(0.1)));
  CHECK(rp.v_secrecy == doctest::Approx(solve_v(0.1)));

  // A 3-antenna eavesdropper has dof 2*8*3 = 48.
  ScenarioConfig mixed = cfg;
  mixed.eve_antennas = {2, 3};
  RestrictionParams rp2 = make_restriction_params(mixed);
  CHECK(rp2.gamma_eve[1] == doctest::Approx(std::sqrt(chi2_inv_cdf(0.9, 48) / 2.0)));
  CHECK(rp2.gamma_eve[1] > rp2.gamma_eve[0]);

  ScenarioConfig degenerate = cfg;
  degenerate.p_secrecy = 1.0;
  CHECK_THROWS_AS(make_restriction_params(degenerate), std::invalid_argument);
}

TEST_CASE("concentration-bound program has the expected block structure") {
  ScenarioConfig cfg = wide_cfg();
  std::mt19937_64 rng(cfg.rng_seed);
  ChannelSet cs = sample_channels(cfg, rng);
  ConicProgram prog = build_power_min_bti(cs, cfg);
  prog.validate();

  const int dq = svec_dim(16);
  CHECK(prog.num_vars == dq + 2 * 2 + 2 * 3);
  CHECK(prog.range("Q").count == dq);
  // 2 eve margins + 3 ER margins + joint slack bounds
  CHECK(prog.count_blocks(ConeKind::Nonneg) == 6);
  CHECK(prog.count_blocks(ConeKind::SecondOrder) == 5);
  // 2 eve shift bounds + 3 ER shift bounds + Q itself
  CHECK(prog.count_blocks(ConeKind::Psd) == 6);
  CHECK(prog.count_blocks(ConeKind::Zero) == 0);

  CHECK(find_block(prog, "eve0/shift-bound").cone.dim == 32);
  CHECK(find_block(prog, "er2/shift-bound").cone.dim == 16);
  CHECK(find_block(prog, "Q/psd").cone.dim == 16);
  CHECK(find_block(prog, "slack-bounds").cone.dim == 10);
  // Norm rows are compressed: tails depend on Q coordinates only.
  CHECK(find_block(prog, "eve0/deviation-norm").cone.dim <= dq + 2);
  CHECK(find_block(prog, "eve0/deviation-norm").cone.dim >= 2);

  // The objective is tr(Q).
  std::mt19937_64 rng2(3);
  VecR x = VecR::Zero(prog.num_vars);
  for (int j = 0; j < dq; ++j) x[j] = std::uniform_real_distribution<>(-1, 1)(rng2);
  const MatC Q = reconstruct_hermitian(smat(VecR(x.head(dq))));
  CHECK(prog.c.dot(x) == doctest::Approx(std::real(Q.trace())).epsilon(1e-12));
}

TEST_CASE("ball-implication program has the expected block structure") {
  ScenarioConfig cfg = wide_cfg();
  std::mt19937_64 rng(cfg.rng_seed);
  ChannelSet cs = sample_channels(cfg, rng);
  ConicProgram prog = build_power_min_sproc(cs, cfg);
  prog.validate();

  CHECK(prog.num_vars == svec_dim(16) + 5);
  CHECK(prog.count_blocks(ConeKind::SecondOrder) == 0);
  CHECK(prog.count_blocks(ConeKind::Nonneg) == 1);
  CHECK(find_block(prog, "multiplier-bounds").cone.dim == 5);
  CHECK(prog.count_blocks(ConeKind::Psd) == 6);
  // Embedded sides: eavesdropper 2*(8*2+1) = 34, ER 2*(8+1) = 18.
  CHECK(find_block(prog, "eve1/ball-implication").cone.dim == 34);
  CHECK(find_block(prog, "er0/ball-implication").cone.dim == 18);
}

TEST_CASE("deviation-decomposition program has the expected block structure") {
  ScenarioConfig cfg = wide_cfg();
  std::mt19937_64 rng(cfg.rng_seed);
  ChannelSet cs = sample_channels(cfg, rng);
  ConicProgram prog = build_power_min_ldi(cs, cfg);
  prog.validate();

  CHECK(prog.num_vars == svec_dim(16) + 10);
  CHECK(prog.count_blocks(ConeKind::Psd) == 1);  // only Q
  CHECK(prog.count_blocks(ConeKind::SecondOrder) == 10);
  CHECK(prog.count_blocks(ConeKind::Nonneg) == 5);  // one margin per receiver
}

TEST_CASE("estimate-as-truth program is all linear besides the covariance cone") {
  ScenarioConfig cfg = wide_cfg();
  std::mt19937_64 rng(cfg.rng_seed);
  ChannelSet cs = sample_channels(cfg, rng);
  ConicProgram prog = build_power_min_nonrobust(cs, cfg);
  prog.validate();
  CHECK(prog.num_vars == svec_dim(16));
  CHECK(prog.count_blocks(ConeKind::Psd) == 1);
  CHECK(prog.count_blocks(ConeKind::SecondOrder) == 0);
  CHECK(prog.count_blocks(ConeKind::Nonneg) == 5);
}

TEST_CASE("builders reject inconsistent inputs") {
  ScenarioConfig cfg = small_cfg();
  std::mt19937_64 rng(cfg.rng_seed);
  ChannelSet cs = sample_channels(cfg, rng);

  ScenarioConfig zero_rate = cfg;
  zero_rate.rate_target = 0.0;
  CHECK_THROWS_AS(build_power_min_bti(cs, zero_rate), std::invalid_argument);

  ScenarioConfig other = wide_cfg();
  CHECK_THROWS_AS(build_power_min_sproc(cs, other), std::invalid_argument);
}

TEST_CASE("without eavesdroppers and harvesters the optimum is the rate floor") {
  ScenarioConfig cfg;
  cfg.n_tx = 4;
  cfg.sigma_d_sq = 0.7;
  cfg.rate_target = 2.0;
  cfg.rng_seed = 21;
  std::mt19937_64 rng(cfg.rng_seed);
  ChannelSet cs = sample_channels(cfg, rng);

  ConicProgram prog = build_power_min_nonrobust(cs, cfg);
  CHECK(find_block(prog, "rate-floor").cone.kind == ConeKind::Nonneg);

  BeamformingDesign d = solve_power_min(cs, cfg, MethodTag::NonRobust, test_settings());
  REQUIRE(d.status == SolveStatus::Optimal);
  const double expect = (std::exp2(2.0) - 1.0) * 0.7 / cs.h.squaredNorm();
  CHECK(d.power == doctest::Approx(expect).epsilon(1e-6));
  CHECK(d.rank_ratio < 1e-6);
  // Optimal covariance beams along the receiver channel.
  const double align = std::abs(cs.h.normalized().dot(d.b.normalized()));
  CHECK(align == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("all restrictions collapse to the estimate-as-truth optimum at zero uncertainty") {
  ScenarioConfig cfg = small_cfg();
  cfg.error_scale.eps_sq = 0.0;
  std::mt19937_64 rng(cfg.rng_seed);
  ChannelSet cs = sample_channels(cfg, rng);

  const double base = solved_power(cs, cfg, MethodTag::NonRobust);
  CHECK(base > 0.0);
  for (MethodTag m : {MethodTag::BTI, MethodTag::SProcedure, MethodTag::LDI}) {
    const double pw = solved_power(cs, cfg, m);
    CHECK(pw == doctest::Approx(base).epsilon(5e-4));
  }
}

TEST_CASE("a receiver overshadowed by the eavesdropper is reported infeasible") {
  // At this draw the estimated problem is solvable with brute power, but no
  // transmit covariance survives the 1% CSI error ball.
  ScenarioConfig cfg = small_cfg();
  cfg.rng_seed = 2;
  std::mt19937_64 rng(cfg.rng_seed);
  ChannelSet cs = sample_channels(cfg, rng);

  BeamformingDesign nr = solve_power_min(cs, cfg, MethodTag::NonRobust, test_settings());
  CHECK(nr.status == SolveStatus::Optimal);
  for (MethodTag m : {MethodTag::BTI, MethodTag::SProcedure, MethodTag::LDI}) {
    BeamformingDesign d = solve_power_min(cs, cfg, m, test_settings());
    CHECK(d.status == SolveStatus::PrimalInfeasible);
    CHECK(d.power == 0.0);
  }
}

TEST_CASE("tightening the outage tolerances never lowers the optimal power") {
  ScenarioConfig cfg = small_cfg();
  std::mt19937_64 rng(cfg.rng_seed);
  ChannelSet cs = sample_channels(cfg, rng);

  ScenarioConfig tight = cfg;
  tight.p_secrecy = 0.01;
  tight.q_eh = 0.01;
  for (MethodTag m : {MethodTag::BTI, MethodTag::SProcedure, MethodTag::LDI}) {
    const double loose_pw = solved_power(cs, cfg, m);
    const double tight_pw = solved_power(cs, tight, m);
    CHECK(tight_pw >= loose_pw * (1.0 - 5e-4));
    CHECK(loose_pw > solved_power(cs, cfg, MethodTag::NonRobust) * (1.0 - 5e-4));
  }
}

TEST_CASE("restricted designs meet the probabilistic constraints on sampled errors") {
  ScenarioConfig cfg = small_cfg();
  std::mt19937_64 rng(cfg.rng_seed);
  ChannelSet cs = sample_channels(cfg, rng);

  for (MethodTag m : {MethodTag::BTI, MethodTag::SProcedure, MethodTag::LDI}) {
    CAPTURE(method_name(m));
    BeamformingDesign d = solve_power_min(cs, cfg, m, test_settings());
    REQUIRE(d.status == SolveStatus::Optimal);

    std::mt19937_64 noise(12345);
    const int trials = 2000;
    int secrecy_miss = 0, energy_miss = 0;
    for (int t = 0; t < trials; ++t) {
      RealizedChannels rc = sample_errors(cs, noise);
      if (secrecy_rate_exact(d.Q, cs.h, rc.H, cfg.sigma_d_sq, cfg.sigma_e_sq) <
          cfg.rate_target)
        ++secrecy_miss;
      if (harvested_power(d.Q, rc.g[0], cfg.eh_efficiency[0]) < cfg.eh_targets[0])
        ++energy_miss;
    }
    // Restrictions guarantee at most p (resp. q) violation probability; allow
    // for binomial noise on 2000 draws.
    CHECK(secrecy_miss <= static_cast<int>(trials * (cfg.p_secrecy + 0.03)));
    CHECK(energy_miss <= static_cast<int>(trials * (cfg.q_eh + 0.03)));
  }
}

TEST_CASE("full-budget beamforming along the receiver channel") {
  ScenarioConfig cfg = small_cfg();
  std::mt19937_64 rng(cfg.rng_seed);
  ChannelSet cs = sample_channels(cfg, rng);
  BeamformingDesign d = mrt_design(cs, cfg);
  CHECK(d.status == SolveStatus::Optimal);
  CHECK(std::real(d.Q.trace()) == doctest::Approx(cfg.power_budget).epsilon(1e-12));
  CHECK(d.power == doctest::Approx(cfg.power_budget));
  CHECK(d.rank_ratio == 0.0);
  const MatC resid = d.Q - d.b * d.b.adjoint();
  CHECK(resid.norm() < 1e-10 * cfg.power_budget);
  const VecC steered = d.Q * cs.h;
  CHECK((steered - cfg.power_budget * cs.h).norm() < 1e-10 * cfg.power_budget * cs.h.norm());
}

TEST_CASE("program dispatcher covers the four conic methods only") {
  ScenarioConfig cfg = small_cfg();
  std::mt19937_64 rng(cfg.rng_seed);
  ChannelSet cs = sample_channels(cfg, rng);
  CHECK(build_power_min(MethodTag::BTI, cs, cfg).has_range("slacks"));
  CHECK(build_power_min(MethodTag::SProcedure, cs, cfg).has_range("multipliers"));
  CHECK_THROWS_AS(build_power_min(MethodTag::MRT, cs, cfg), std::invalid_argument);
}
