#pragma once

#include <string>
#include <vector>

#include "swiptsec/hermitian.hpp"
#include "swiptsec/scenario.hpp"
#include "swiptsec/solver.hpp"

// Beamformer recovery from a solved transmit covariance, plus the exact
// (non-restricted) performance metrics used for validation.

namespace swiptsec {

enum class MethodTag { BTI, SProcedure, LDI, NonRobust, MRT };

const char* method_name(MethodTag m);
// Accepts bti, sproc, ldi, nonrobust, mrt (case-insensitive).
MethodTag parse_method(const std::string& name);

struct BeamformingDesign {
  MethodTag method = MethodTag::NonRobust;
  MatC Q;  // Hermitian PSD transmit covariance
  VecC b;  // dominant-eigenpair beamformer, ||b||^2 = lambda_1
  double power = 0.0;       // tr(Q)
  double rank_ratio = 0.0;  // lambda_2 / lambda_1
  bool negligible = false;  // lambda_1 < 1e-12: no information transfer
  // solver diagnostics
  SolveStatus status = SolveStatus::Numerical;
  int iterations = 0;
  double wall_ms = 0.0;
  std::string note;

  bool feasible() const { return status == SolveStatus::Optimal; }
};

struct ExtractResult {
  VecC b;
  double rank_ratio = 0.0;
  bool negligible = false;
};

// b = sqrt(lambda_1) u_1 from the dominant eigenpair of Q; Q ~ 0 is flagged
// rather than an error.
ExtractResult extract_beamformer(const MatC& Q);

// log2 det(I + H^H Q H / sigma_e^2), the information leaked to one
// eavesdropper, in bits.
double eavesdropper_information(const MatC& Q, const MatC& H, double sigma_e_sq);

// min over eavesdroppers of {log2(1 + h^H Q h / sigma_d^2)
//   - log2 det(I + H^H Q H / sigma_e^2)}^+, in bits. Empty eavesdropper list
// gives the receiver rate alone.
double secrecy_rate_exact(const MatC& Q, const VecC& h, const std::vector<MatC>& eves,
                          double sigma_d_sq, double sigma_e_sq);

double harvested_power(const MatC& Q, const VecC& g, double xi);

// Builds the method's power-minimization program, solves it, and extracts the
// design (MRT bypasses the solver). Wall time covers build+solve.
BeamformingDesign solve_power_min(const ChannelSet& cs, const ScenarioConfig& cfg,
                                  MethodTag method, const SolverSettings& settings = {});

}  // namespace swiptsec
