#pragma once

#include <Eigen/Dense>

// Dense symmetric-indefinite kernels used by the interior-point solver. Both
// a straightforward serial implementation and an OpenMP-blocked one are kept;
// they produce the same factor (the blocked variant differs only in rounding)
// and the test suite cross-checks them.

namespace swiptsec::kernels {

using MatR = Eigen::MatrixXd;
using VecR = Eigen::VectorXd;

struct LdlOptions {
  // A pivot with magnitude below eps_pivot * scale(M) is replaced by
  // expected_sign * delta_pivot (signed dynamic regularization).
  double eps_pivot = 1e-14;
  double delta_pivot = 1e-9;
  int block = 96;
};

struct LdlReport {
  int bumped = 0;
};

// In-place LDL^T without pivoting: on return the strict lower triangle of M
// holds the unit-lower factor and the diagonal holds D. Only the lower
// triangle of the input is referenced. expected_sign gives the sign each
// pivot must take when regularization kicks in (quasidefinite usage).
LdlReport ldl_factor_serial(MatR& M, const Eigen::VectorXi& expected_sign,
                            const LdlOptions& opt = {});
LdlReport ldl_factor_parallel(MatR& M, const Eigen::VectorXi& expected_sign,
                              const LdlOptions& opt = {});

// Solves (L D L^T) x = rhs in place given a factored matrix.
void ldl_solve_in_place(const MatR& F, VecR& rhs);

// Number of worker threads: SWIPTSEC_THREADS when set, else the OpenMP
// default (1 in builds without OpenMP).
int thread_count();

// Applies thread_count() to the OpenMP runtime. Called once at startup by
// entry points; safe to call repeatedly.
void apply_thread_count();

}  // namespace swiptsec::kernels
