#include "swiptsec/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace swiptsec::kernels {

namespace {

double pivot_scale(const MatR& M) {
  double s = 1.0;
  for (Eigen::Index k = 0; k < M.rows(); ++k) s = std::max(s, std::abs(M(k, k)));
  return s;
}

// Regularizes one pivot if needed; returns whether it was bumped.
inline bool fix_pivot(double& d, int sign, double floor_mag, double delta) {
  if (std::abs(d) >= floor_mag) return false;
  d = (sign < 0 ? -delta : delta);
  return true;
}

// Unblocked factorization of the leading block M(k0:k0+nb, k0:k0+nb) with the
// panel below it, using columns already factored inside the block.
int factor_panel(MatR& M, Eigen::Index k0, Eigen::Index nb, const Eigen::VectorXi& sign,
                 double floor_mag, double delta) {
  const Eigen::Index n = M.rows();
  int bumped = 0;
  for (Eigen::Index k = k0; k < k0 + nb; ++k) {
    double d = M(k, k);
    for (Eigen::Index j = k0; j < k; ++j) d -= M(k, j) * M(k, j) * M(j, j);
    bumped += fix_pivot(d, sign[k], floor_mag, delta) ? 1 : 0;
    M(k, k) = d;
    if (k + 1 < n) {
      auto col = M.col(k).segment(k + 1, n - k - 1);
      for (Eigen::Index j = k0; j < k; ++j)
        col.noalias() -= (M(k, j) * M(j, j)) * M.col(j).segment(k + 1, n - k - 1);
      col /= d;
    }
  }
  return bumped;
}

}  // namespace

LdlReport ldl_factor_serial(MatR& M, const Eigen::VectorXi& expected_sign,
                            const LdlOptions& opt) {
  const Eigen::Index n = M.rows();
  if (M.cols() != n || expected_sign.size() != n)
    throw std::invalid_argument("ldl_factor_serial: dimension mismatch");
  const double floor_mag = opt.eps_pivot * pivot_scale(M);
  LdlReport rep;
  for (Eigen::Index k = 0; k < n; ++k) {
    double d = M(k, k);
    rep.bumped += fix_pivot(d, expected_sign[k], floor_mag, opt.delta_pivot) ? 1 : 0;
    M(k, k) = d;
    if (k + 1 == n) break;
    auto v = M.col(k).segment(k + 1, n - k - 1);
    // Rank-one update of the trailing lower triangle, then scale the column.
    for (Eigen::Index j = k + 1; j < n; ++j)
      M.col(j).segment(j, n - j).noalias() -= (v[j - k - 1] / d) * v.segment(j - k - 1, n - j);
    v /= d;
  }
  return rep;
}

LdlReport ldl_factor_parallel(MatR& M, const Eigen::VectorXi& expected_sign,
                              const LdlOptions& opt) {
  const Eigen::Index n = M.rows();
  if (M.cols() != n || expected_sign.size() != n)
    throw std::invalid_argument("ldl_factor_parallel: dimension mismatch");
  const double floor_mag = opt.eps_pivot * pivot_scale(M);
  const Eigen::Index nb = std::max<Eigen::Index>(8, opt.block);
  LdlReport rep;
  for (Eigen::Index k0 = 0; k0 < n; k0 += nb) {
    const Eigen::Index kb = std::min(nb, n - k0);
    rep.bumped += factor_panel(M, k0, kb, expected_sign, floor_mag, opt.delta_pivot);
    const Eigen::Index t0 = k0 + kb;
    if (t0 >= n) break;
    // Trailing update: M22 -= P D P' with P the factored panel rows below the
    // diagonal block. Tiles are disjoint, so the schedule cannot change the
    // result.
    const auto P = M.block(t0, k0, n - t0, kb);
    const VecR d = M.diagonal().segment(k0, kb);
    const MatR PD = P * d.asDiagonal();
    const Eigen::Index tile = 128;
    const Eigen::Index ntiles = (n - t0 + tile - 1) / tile;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
    for (Eigen::Index ij = 0; ij < ntiles * ntiles; ++ij) {
      const Eigen::Index ti = ij / ntiles, tj = ij % ntiles;
      if (ti < tj) continue;
      const Eigen::Index r0 = t0 + ti * tile, c0 = t0 + tj * tile;
      const Eigen::Index rn = std::min(tile, n - r0), cn = std::min(tile, n - c0);
      M.block(r0, c0, rn, cn).noalias() -=
          PD.middleRows(r0 - t0, rn) * P.middleRows(c0 - t0, cn).transpose();
    }
  }
  return rep;
}

void ldl_solve_in_place(const MatR& F, VecR& rhs) {
  const Eigen::Index n = F.rows();
  if (rhs.size() != n) throw std::invalid_argument("ldl_solve_in_place: size mismatch");
  F.triangularView<Eigen::UnitLower>().solveInPlace(rhs);
  rhs.array() /= F.diagonal().array();
  F.triangularView<Eigen::UnitLower>().transpose().solveInPlace(rhs);
}

int thread_count() {
  if (const char* env = std::getenv("SWIPTSEC_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void apply_thread_count() {
#ifdef _OPENMP
  omp_set_num_threads(thread_count());
#endif
}

}  // namespace swiptsec::kernels
