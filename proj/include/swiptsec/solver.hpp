#pragma once

#include <string>
#include <vector>

#include "swiptsec/conic.hpp"

// Primal-dual interior-point solver for the conic IR, built on a homogeneous
// self-dual embedding with Nesterov-Todd scaling and a Mehrotra
// predictor-corrector. Each iteration eliminates the cone block of the KKT
// system in closed form and factors the remaining quasidefinite core with the
// regularized LDL^T kernel.

namespace swiptsec {

enum class SolveStatus { Optimal, PrimalInfeasible, DualInfeasible, MaxIter, Numerical };

const char* status_name(SolveStatus s);

struct SolverSettings {
  double tol_gap = 1e-7;
  double tol_feas = 1e-7;
  // Accepted when progress stalls (step collapse or iteration limit) with the
  // iterate already this close; the result is still marked Optimal but the
  // message says "reduced accuracy".
  double tol_gap_soft = 1e-4;
  double tol_feas_soft = 1e-5;
  int max_iter = 200;
  double step_fraction = 0.99;    // fraction-to-boundary
  double tau_kappa_ratio = 1e-6;  // tau/kappa threshold that triggers
                                  // infeasibility classification
  double static_reg = 1e-9;       // KKT regularization
  bool check_weak_duality = false;  // verify primal obj >= dual obj each iterate
  std::string iter_log_path;        // per-iteration CSV log when non-empty
};

struct ConeSolution {
  SolveStatus status = SolveStatus::Numerical;
  // Optimal/MaxIter/Numerical: x is the tau-scaled primal iterate and
  // block_dual the tau-scaled dual per block. PrimalInfeasible: block_dual
  // holds a dual ray normalized to <b,y> + <h,z> = -1. DualInfeasible: x is a
  // primal ray normalized to <c,x> = -1.
  VecR x;
  std::vector<VecR> block_dual;
  double primal_obj = 0.0;
  double dual_obj = 0.0;
  double rel_gap = 0.0;
  double pres = 0.0;
  double dres = 0.0;
  double tau = 0.0;
  double kappa = 0.0;
  int iterations = 0;
  std::string message;

  bool ok() const { return status == SolveStatus::Optimal; }
};

ConeSolution solve(const ConicProgram& prog, const SolverSettings& settings = {});

}  // namespace swiptsec
