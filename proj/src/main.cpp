// Batch experiment runner: builds robust secrecy-SWIPT designs over seeded
// instance sets, writes one CSV row per solve plus a manifest that allows any
// run to be regenerated byte-for-byte (wall_ms excluded).

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>

#include "swiptsec/config_io.hpp"
#include "swiptsec/design.hpp"
#include "swiptsec/montecarlo.hpp"
#include "swiptsec/restrictions.hpp"
#include "swiptsec/scenario.hpp"
#include "swiptsec/srm.hpp"

#ifndef SWIPTSEC_VERSION
#define SWIPTSEC_VERSION "unknown"
#endif

namespace {

using namespace swiptsec;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

// ---------------------------------------------------------------------------
// Sweep grammar: name=start:stop:step (inclusive endpoints, fixed stride).

struct VarySpec {
  std::string name;  // one of r, eta, p, q, pq, pt, eps (case-insensitive)
  std::vector<double> values;
  bool active = false;
};

VarySpec parse_vary(const std::string& text) {
  VarySpec v;
  const size_t eq = text.find('=');
  if (eq == std::string::npos)
    throw std::invalid_argument("--vary expects name=start:stop:step, got '" + text + "'");
  v.name = lower(text.substr(0, eq));
  static const std::vector<std::string> known = {"r", "eta", "p", "q", "pq", "pt", "eps"};
  if (std::find(known.begin(), known.end(), v.name) == known.end())
    throw std::invalid_argument("unknown sweep variable '" + v.name +
                                "' (expected R, eta, p, q, pq, Pt, or eps)");
  double start, stop, step;
  char colon1, colon2;
  std::istringstream ss(text.substr(eq + 1));
  if (!(ss >> start >> colon1 >> stop >> colon2 >> step) || colon1 != ':' || colon2 != ':')
    throw std::invalid_argument("--vary expects name=start:stop:step, got '" + text + "'");
  if (step == 0.0) {
    if (start != stop) throw std::invalid_argument("--vary step must be nonzero");
    v.values.push_back(start);
  } else {
    const long n = std::lround(std::floor((stop - start) / step + 1e-9));
    if (n < 0) throw std::invalid_argument("--vary range is empty");
    for (long i = 0; i <= n; ++i) v.values.push_back(start + static_cast<double>(i) * step);
  }
  v.active = true;
  return v;
}

void apply_vary(ScenarioConfig& cfg, const std::string& name, double value) {
  if (name == "r") {
    cfg.rate_target = value;
  } else if (name == "eta") {
    std::fill(cfg.eh_targets.begin(), cfg.eh_targets.end(), value);
  } else if (name == "p") {
    cfg.p_secrecy = value;
  } else if (name == "q") {
    cfg.q_eh = value;
  } else if (name == "pq") {
    cfg.p_secrecy = value;
    cfg.q_eh = value;
  } else if (name == "pt") {
    cfg.power_budget = value;
  } else if (name == "eps") {
    if (cfg.error_scale.has_explicit())
      throw std::invalid_argument("cannot sweep eps: config uses explicit covariance matrices");
    cfg.error_scale.eps_sq = value;
  }
}

// ---------------------------------------------------------------------------
// Run plan and per-task execution.

enum class RunKind { Power, Srm, Feasibility, Validate };

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> methods{"bti"};
  int instances = 1;
  std::optional<std::uint64_t> seed;
  int fail_budget = 0;
  int threads = 0;
  int max_iter = 0;
  bool solver_log = false;
  bool dump_program = false;
};

struct RunPlan {
  RunKind kind = RunKind::Power;
  ScenarioConfig base;
  std::vector<MethodTag> methods;
  int instances = 1;
  std::uint64_t base_seed = 0;
  VarySpec vary;
  int validate_trials = 0;  // 0: no Monte-Carlo columns
  double tol_rate = 1e-3;
  int fail_budget = 0;
  int max_iter = 0;  // 0: solver default
  bool solver_log = false;
  bool dump_program = false;
  std::string out_dir;
};

struct Row {
  std::uint64_t seed = 0;
  std::string method;
  double rate = 0.0, eta = 0.0, p = 0.0, q = 0.0;
  std::string status;
  double power = 0.0, rank_ratio = 0.0;
  int iters = 0;
  double wall_ms = 0.0;
  double pt = 0.0;
  double secrecy_outage = 0.0, secrecy_ci = 0.0, eh_outage = 0.0, eh_ci = 0.0;
  bool failed = false;  // MaxIter/Numerical (or a thrown build error)
};

struct Task {
  ScenarioConfig cfg;
  MethodTag method = MethodTag::BTI;
  std::uint64_t seed = 0;
  int row = 0;
};

std::vector<MethodTag> resolve_methods(const std::vector<std::string>& names, RunKind kind) {
  std::vector<MethodTag> out;
  auto push = [&out](MethodTag m) {
    if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
  };
  for (const auto& raw : names) {
    const std::string n = lower(raw);
    if (n == "all") {
      push(MethodTag::BTI);
      push(MethodTag::SProcedure);
      push(MethodTag::LDI);
      push(kind == RunKind::Srm ? MethodTag::MRT : MethodTag::NonRobust);
    } else {
      push(parse_method(n));
    }
  }
  if (out.empty()) throw std::invalid_argument("no methods selected");
  return out;
}

void dump_program_text(const Task& t, const RunPlan& plan) {
  if (t.method == MethodTag::MRT) return;
  ScenarioConfig cfg = t.cfg;
  if (plan.kind == RunKind::Srm && cfg.rate_target <= 0.0) cfg.rate_target = 1.0;
  std::mt19937_64 rng(t.seed);
  ChannelSet cs = sample_channels(cfg, rng);
  ConicProgram prog = build_power_min(t.method, cs, cfg);
  std::ofstream out(plan.out_dir + "/program.txt");
  out << "method " << method_name(t.method) << "\n";
  out << "num_vars " << prog.num_vars << "\n";
  for (const auto& [name, range] : prog.ranges)
    out << "range " << name << " offset " << range.offset << " count " << range.count << "\n";
  for (const auto& blk : prog.blocks) {
    const char* kind = "zero";
    switch (blk.cone.kind) {
      case ConeKind::Zero: kind = "zero"; break;
      case ConeKind::Nonneg: kind = "nonneg"; break;
      case ConeKind::SecondOrder: kind = "soc"; break;
      case ConeKind::Psd: kind = "psd"; break;
    }
    out << "block " << blk.label << " cone " << kind << " dim " << blk.cone.dim << " rows "
        << blk.cone.rows() << "\n";
  }
}

Row run_task(const Task& t, const RunPlan& plan) {
  Row row;
  row.seed = t.seed;
  row.method = method_name(t.method);
  row.rate = t.cfg.rate_target;
  row.eta = t.cfg.eh_targets.empty() ? 0.0 : t.cfg.eh_targets.front();
  row.p = t.cfg.p_secrecy;
  row.q = t.cfg.q_eh;
  row.pt = t.cfg.power_budget;

  const auto t0 = std::chrono::steady_clock::now();
  try {
    std::mt19937_64 rng(t.seed);
    const ChannelSet cs = sample_channels(t.cfg, rng);

    SolverSettings solver;
    if (plan.max_iter > 0) solver.max_iter = plan.max_iter;
    if (plan.solver_log)
      solver.iter_log_path = plan.out_dir + "/iters_row" + std::to_string(t.row) + ".csv";

    BeamformingDesign design;
    if (plan.kind == RunKind::Srm) {
      if (t.method == MethodTag::MRT) {
        design = solve_power_min(cs, t.cfg, MethodTag::MRT, solver);
        // MRT claims the rate it achieves at the channel estimates.
        row.rate = secrecy_rate_exact(design.Q, cs.h, cs.H_hat, t.cfg.sigma_d_sq,
                                      t.cfg.sigma_e_sq);
      } else {
        SrmSettings srm;
        srm.tol_rate = plan.tol_rate;
        srm.solver = solver;
        SrmResult r = solve_rate_max(cs, t.cfg, t.method, srm);
        design = std::move(r.design);
        row.rate = r.rate;
      }
    } else {
      design = solve_power_min(cs, t.cfg, t.method, solver);
    }

    row.status = status_name(design.status);
    row.power = design.power;
    row.rank_ratio = design.rank_ratio;
    row.iters = design.iterations;
    row.failed =
        design.status == SolveStatus::MaxIter || design.status == SolveStatus::Numerical;

    if (plan.validate_trials > 0) {
      if (design.feasible() && row.rate > 0.0) {
        ScenarioConfig at_rate = t.cfg;
        at_rate.rate_target = row.rate;  // validate against the reported rate
        const OutageReport rep =
            validate_design(design, cs, at_rate, plan.validate_trials, t.seed);
        row.secrecy_outage = rep.secrecy_outage_rate;
        row.secrecy_ci = rep.secrecy_ci_halfwidth;
        for (size_t k = 0; k < rep.eh_outage_rate.size(); ++k) {
          if (rep.eh_outage_rate[k] >= row.eh_outage) {
            row.eh_outage = rep.eh_outage_rate[k];
            row.eh_ci = rep.eh_ci_halfwidth[k];
          }
        }
      } else {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        row.secrecy_outage = row.secrecy_ci = row.eh_outage = row.eh_ci = nan;
      }
    }
  } catch (const std::exception& e) {
    row.status = "Numerical";
    row.failed = true;
#pragma omp critical(cli_stderr)
    std::cerr << "task " << t.row << " failed: " << e.what() << "\n";
  }
  row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count();
  return row;
}

// ---------------------------------------------------------------------------
// CSV + manifest output.

std::string csv_header(const RunPlan& plan) {
  std::string h = "seed,method,R,eta,p,q,status,power,rank_ratio,iters,wall_ms";
  if (plan.kind == RunKind::Srm) h += ",pt";
  if (plan.validate_trials > 0) h += ",secrecy_outage,secrecy_ci,eh_outage,eh_ci";
  return h;
}

std::string csv_line(const Row& r, const RunPlan& plan) {
  std::string line = std::to_string(r.seed) + "," + r.method + "," + fmt(r.rate) + "," +
                     fmt(r.eta) + "," + fmt(r.p) + "," + fmt(r.q) + "," + r.status + "," +
                     fmt(r.power) + "," + fmt(r.rank_ratio) + "," + std::to_string(r.iters) +
                     "," + fmt(r.wall_ms);
  if (plan.kind == RunKind::Srm) line += "," + fmt(r.pt);
  if (plan.validate_trials > 0)
    line += "," + fmt(r.secrecy_outage) + "," + fmt(r.secrecy_ci) + "," + fmt(r.eh_outage) +
            "," + fmt(r.eh_ci);
  return line;
}

int execute_plan(const RunPlan& plan, const std::vector<std::string>& argv_tokens) {
  std::filesystem::create_directories(plan.out_dir);

  // Task grid: sweep point (outer) x instance x method; row order is fixed so
  // the CSV is identical no matter how many threads run the pool.
  std::vector<double> points =
      plan.vary.active ? plan.vary.values : std::vector<double>{0.0};
  std::vector<Task> tasks;
  for (double value : points) {
    ScenarioConfig cfg = plan.base;
    if (plan.vary.active) {
      apply_vary(cfg, plan.vary.name, value);
      cfg.validate();
    }
    for (int i = 0; i < plan.instances; ++i)
      for (MethodTag m : plan.methods) {
        Task t;
        t.cfg = cfg;
        t.method = m;
        t.seed = plan.base_seed + static_cast<std::uint64_t>(i);
        t.row = static_cast<int>(tasks.size());
        tasks.push_back(std::move(t));
      }
  }

  if (plan.dump_program && !tasks.empty()) dump_program_text(tasks.front(), plan);

  std::vector<Row> rows(tasks.size());
  const int n = static_cast<int>(tasks.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) rows[i] = run_task(tasks[i], plan);

  std::ofstream csv(plan.out_dir + "/results.csv");
  if (!csv) {
    std::cerr << "cannot write " << plan.out_dir << "/results.csv\n";
    return 2;
  }
  csv << csv_header(plan) << "\n";
  for (const auto& r : rows) csv << csv_line(r, plan) << "\n";
  csv.close();

  RunManifest manifest;
  manifest.version = SWIPTSEC_VERSION;
  manifest.command = argv_tokens;
  manifest.config = plan.base;
  save_manifest(manifest, plan.out_dir + "/manifest.json");

  if (plan.kind == RunKind::Feasibility) {
    // Summary table: feasibility rate per sweep point and method.
    std::printf("%-14s", plan.vary.active ? plan.vary.name.c_str() : "point");
    for (MethodTag m : plan.methods) std::printf(" %12s", method_name(m));
    std::printf("\n");
    size_t idx = 0;
    for (double value : points) {
      std::printf("%-14s", fmt(plan.vary.active ? value : 0.0).c_str());
      for (size_t m = 0; m < plan.methods.size(); ++m) {
        int feasible = 0;
        for (int i = 0; i < plan.instances; ++i)
          if (rows[idx + static_cast<size_t>(i) * plan.methods.size() + m].status == "Optimal")
            ++feasible;
        std::printf(" %12s", fmt(static_cast<double>(feasible) / plan.instances).c_str());
      }
      std::printf("\n");
      idx += static_cast<size_t>(plan.instances) * plan.methods.size();
    }
  }

  int failures = 0;
  for (const auto& r : rows) failures += r.failed ? 1 : 0;
  std::printf("wrote %zu rows to %s/results.csv (solver failures: %d)\n", rows.size(),
              plan.out_dir.c_str(), failures);
  return failures > plan.fail_budget ? 3 : 0;
}

// ---------------------------------------------------------------------------
// Argument plumbing.

void add_common(CLI::App* sub, CommonOpts& o) {
  sub->add_option("--config", o.config_path, "config file (JSON)")->required();
  sub->add_option("--out", o.out_dir, "output directory for results.csv + manifest.json")
      ->required();
  sub->add_option("--methods,--method", o.methods,
                  "comma-separated: bti, sproc, ldi, nonrobust, mrt, all")
      ->delimiter(',');
  sub->add_option("--instances", o.instances, "independent channel draws")
      ->check(CLI::PositiveNumber);
  sub->add_option("--seed", o.seed, "base seed (default: rng_seed from config)");
  sub->add_option("--fail-budget", o.fail_budget,
                  "max numerically-failed solves before exit code 3");
  sub->add_option("--threads", o.threads, "worker threads (overrides SWIPTSEC_THREADS)");
  sub->add_option("--max-iter", o.max_iter, "interior-point iteration cap per solve")
      ->check(CLI::PositiveNumber);
  sub->add_flag("--solver-log", o.solver_log, "write per-solve iteration logs");
  sub->add_flag("--dump-program", o.dump_program, "write first task's conic block layout");
}

RunPlan make_plan(RunKind kind, const CommonOpts& o, const std::string& vary_text,
                  int validate_trials, double tol_rate) {
  RunPlan plan;
  plan.kind = kind;
  plan.base = load_config(o.config_path);
  plan.methods = resolve_methods(o.methods, kind);
  plan.instances = o.instances;
  plan.base_seed = o.seed.value_or(plan.base.rng_seed);
  if (!vary_text.empty()) plan.vary = parse_vary(vary_text);
  plan.validate_trials = validate_trials;
  plan.tol_rate = tol_rate;
  plan.fail_budget = o.fail_budget;
  plan.max_iter = o.max_iter;
  plan.solver_log = o.solver_log;
  plan.dump_program = o.dump_program;
  plan.out_dir = o.out_dir;
  if (kind != RunKind::Srm && plan.base.rate_target <= 0.0 &&
      !(plan.vary.active && plan.vary.name == "r"))
    throw std::invalid_argument("rate_target must be positive for power-minimization runs");
  for (MethodTag m : plan.methods)
    if (kind != RunKind::Srm && m == MethodTag::MRT)
      throw std::invalid_argument("mrt is only available under solve-srm");
  return plan;
}

void set_thread_count(int cli_threads) {
#ifdef _OPENMP
  int n = cli_threads;
  if (n <= 0) {
    if (const char* env = std::getenv("SWIPTSEC_THREADS")) n = std::atoi(env);
  }
  if (n > 0) omp_set_num_threads(n);
#else
  (void)cli_threads;
#endif
}

int run_cli(const std::vector<std::string>& tokens);

int cmd_replay(const std::string& manifest_path, const std::string& out_dir) {
  const RunManifest m = load_manifest(manifest_path);
  std::filesystem::create_directories(out_dir);
  const std::string cfg_path = out_dir + "/config.json";
  {
    std::ofstream f(cfg_path);
    f << config_to_json_text(m.config);
  }
  std::vector<std::string> tokens = m.command;
  auto patch = [&tokens](const std::string& flag, const std::string& value) {
    for (size_t i = 0; i < tokens.size(); ++i) {
      if (tokens[i] == flag && i + 1 < tokens.size()) {
        tokens[i + 1] = value;
        return;
      }
      if (tokens[i].rfind(flag + "=", 0) == 0) {
        tokens[i] = flag + "=" + value;
        return;
      }
    }
    tokens.push_back(flag);
    tokens.push_back(value);
  };
  patch("--config", cfg_path);
  patch("--out", out_dir);
  return run_cli(tokens);
}

int run_cli(const std::vector<std::string>& tokens) {
  CLI::App app{"robust secrecy-SWIPT beamforming experiment runner"};
  app.set_version_flag("--version", std::string(SWIPTSEC_VERSION));
  app.require_subcommand(1);

  CommonOpts power_o, srm_o, feas_o, sweep_o, val_o;
  std::string srm_vary, feas_vary, sweep_vary;
  int srm_validate = 0, val_trials = 10000;
  double srm_tol = 1e-3;
  std::string replay_manifest, replay_out;

  CLI::App* power = app.add_subcommand("solve-power", "fixed-rate power minimization");
  add_common(power, power_o);

  CLI::App* srm = app.add_subcommand("solve-srm", "secrecy rate maximization by bisection");
  srm->alias("srm");
  add_common(srm, srm_o);
  srm->add_option("--vary", srm_vary, "sweep grammar name=start:stop:step");
  srm->add_option("--validate", srm_validate, "Monte-Carlo trials per feasible design");
  srm->add_option("--tol-rate", srm_tol, "bisection rate tolerance")->check(CLI::PositiveNumber);

  CLI::App* feas = app.add_subcommand("feasibility", "feasibility rate per method");
  add_common(feas, feas_o);
  feas->add_option("--vary", feas_vary, "sweep grammar name=start:stop:step");

  CLI::App* sweep = app.add_subcommand("sweep", "power minimization over a parameter grid");
  add_common(sweep, sweep_o);
  sweep->add_option("--vary", sweep_vary, "sweep grammar name=start:stop:step")->required();

  CLI::App* val = app.add_subcommand("validate", "solve then Monte-Carlo outage estimation");
  add_common(val, val_o);
  val->add_option("--trials", val_trials, "Monte-Carlo trials per design")
      ->check(CLI::PositiveNumber);

  CLI::App* replay = app.add_subcommand("replay", "re-run a manifest byte-identically");
  replay->add_option("manifest", replay_manifest, "path to manifest.json")->required();
  replay->add_option("--out", replay_out, "output directory")->required();

  std::vector<const char*> argv;
  argv.reserve(tokens.size());
  for (const auto& t : tokens) argv.push_back(t.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (replay->parsed()) return cmd_replay(replay_manifest, replay_out);
    RunPlan plan;
    const CommonOpts* opts = nullptr;
    if (power->parsed()) {
      plan = make_plan(RunKind::Power, power_o, "", 0, 1e-3);
      opts = &power_o;
    } else if (srm->parsed()) {
      plan = make_plan(RunKind::Srm, srm_o, srm_vary, srm_validate, srm_tol);
      opts = &srm_o;
    } else if (feas->parsed()) {
      plan = make_plan(RunKind::Feasibility, feas_o, feas_vary, 0, 1e-3);
      opts = &feas_o;
    } else if (sweep->parsed()) {
      plan = make_plan(RunKind::Power, sweep_o, sweep_vary, 0, 1e-3);
      opts = &sweep_o;
    } else if (val->parsed()) {
      plan = make_plan(RunKind::Validate, val_o, "", val_trials, 1e-3);
      opts = &val_o;
    } else {
      return 2;
    }
    set_thread_count(opts->threads);
    return execute_plan(plan, tokens);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> tokens(argv, argv + argc);
  return run_cli(tokens);
}
