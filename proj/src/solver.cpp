#include "swiptsec/solver.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "swiptsec/detail/cones.hpp"
#include "swiptsec/kernels.hpp"

namespace swiptsec {

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::PrimalInfeasible: return "PrimalInfeasible";
    case SolveStatus::DualInfeasible: return "DualInfeasible";
    case SolveStatus::MaxIter: return "MaxIter";
    case SolveStatus::Numerical: return "Numerical";
  }
  return "?";
}

namespace {

using detail::Scaling;
using detail::Seg;

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Kkt {
  // Reduced quasidefinite core [[H + dI, A'], [A, -dI]], factored in place.
  MatR F;
  Eigen::VectorXi sign;
  int n = 0, p = 0;
};

struct Hsd {
  // data
  int n = 0, m = 0, p = 0;
  MatR G, A;
  VecR c, h, b;
  std::vector<Seg> segs;
  double deg = 0;
  // iterate
  VecR x, y, z, s;
  double tau = 1, kappa = 1;
  std::vector<Scaling> sc;
};

struct Dir {
  VecR x, y, z, s;
  double tau = 0, kappa = 0;
};

void build_kkt(const Hsd& w, double reg, Kkt& k) {
  const int n = w.n, p = w.p;
  k.n = n;
  k.p = p;
  k.F.setZero(n + p, n + p);
  MatR H = MatR::Zero(n, n);
  for (size_t j = 0; j < w.segs.size(); ++j) {
    const Seg& seg = w.segs[j];
    const auto Gj = w.G.middleRows(seg.offset, seg.rows);
    MatR X(seg.rows, n);
    for (int t = 0; t < n; ++t)
      X.col(t) = detail::apply_WtW_inv(seg, w.sc[j], VecR(Gj.col(t)));
    H.noalias() += Gj.transpose() * X;
  }
  H = 0.5 * (H + H.transpose()).eval();
  k.F.topLeftCorner(n, n) = H + reg * MatR::Identity(n, n);
  if (p > 0) {
    k.F.bottomLeftCorner(p, n) = w.A;
    k.F.topRightCorner(n, p) = w.A.transpose();
    k.F.bottomRightCorner(p, p) = -reg * MatR::Identity(p, p);
  }
  k.sign.resize(n + p);
  k.sign.head(n).setOnes();
  k.sign.tail(p).setConstant(-1);
  kernels::LdlOptions opt;
  opt.delta_pivot = std::max(reg, 1e-9);
  kernels::ldl_factor_parallel(k.F, k.sign, opt);
}

// Solves the 3x3 system
//   [0   A'  G' ] [dx]   [bx]
//   [A   0   0  ] [dy] = [by]
//   [G   0  -W'W] [dz]   [bz]
// through the reduced core, with one round of iterative refinement.
void solve3(const Hsd& w, const Kkt& k, const VecR& bx, const VecR& by, const VecR& bz,
            VecR& dx, VecR& dy, VecR& dz) {
  const int n = w.n, p = w.p;
  auto wtw_inv_all = [&](const VecR& v) {
    VecR out(w.m);
    for (size_t j = 0; j < w.segs.size(); ++j) {
      const Seg& seg = w.segs[j];
      out.segment(seg.offset, seg.rows) =
          detail::apply_WtW_inv(seg, w.sc[j], VecR(v.segment(seg.offset, seg.rows)));
    }
    return out;
  };

  VecR rhs(n + p);
  rhs.head(n) = bx + w.G.transpose() * wtw_inv_all(bz);
  rhs.tail(p) = by;

  auto backsolve = [&](const VecR& r) {
    VecR u = r;
    kernels::ldl_solve_in_place(k.F, u);
    return u;
  };
  VecR u = backsolve(rhs);
  dx = u.head(n);
  dy = u.tail(p);
  dz = wtw_inv_all(VecR(w.G * dx - bz));

  // One refinement pass against the unreduced equations.
  VecR r1 = bx - (w.A.transpose() * dy + w.G.transpose() * dz);
  VecR r2 = by - w.A * dx;
  VecR r3(w.m);
  for (size_t j = 0; j < w.segs.size(); ++j) {
    const Seg& seg = w.segs[j];
    r3.segment(seg.offset, seg.rows) =
        bz.segment(seg.offset, seg.rows) -
        (w.G.middleRows(seg.offset, seg.rows) * dx -
         detail::apply_WtW(seg, w.sc[j], VecR(dz.segment(seg.offset, seg.rows))));
  }
  const double rnorm = std::sqrt(r1.squaredNorm() + r2.squaredNorm() + r3.squaredNorm());
  const double bnorm = std::sqrt(bx.squaredNorm() + by.squaredNorm() + bz.squaredNorm());
  if (rnorm > 1e-11 * std::max(1.0, bnorm)) {
    VecR rr(n + p);
    rr.head(n) = r1 + w.G.transpose() * wtw_inv_all(r3);
    rr.tail(p) = r2;
    VecR du = backsolve(rr);
    dx += du.head(n);
    dy += du.tail(p);
    dz = wtw_inv_all(VecR(w.G * dx - bz));
  }
}

struct TauStep {
  VecR u1x, u1y, u1z;  // solution of the tau column
  double denom = 0;
};

// Assembles a full direction for the given centering weight.
Dir assemble_direction(const Hsd& w, const Kkt& k, const TauStep& tc, double one_minus_sigma,
                       const VecR& rx, const VecR& ry, const VecR& rz, double rt,
                       const std::vector<VecR>& bs, double bkap) {
  // bz = -(1-sigma) rz - W'(lambda \ bs)
  VecR bz(w.m);
  std::vector<VecR> ldiv(w.segs.size());
  for (size_t j = 0; j < w.segs.size(); ++j) {
    const Seg& seg = w.segs[j];
    ldiv[j] = detail::jordan_div_lambda(seg, w.sc[j], bs[j]);
    bz.segment(seg.offset, seg.rows) =
        -one_minus_sigma * rz.segment(seg.offset, seg.rows) -
        detail::apply_Wt(seg, w.sc[j], ldiv[j]);
  }
  VecR u2x, u2y, u2z;
  solve3(w, k, VecR(-one_minus_sigma * rx), VecR(-one_minus_sigma * ry), bz, u2x, u2y, u2z);

  Dir d;
  d.tau = (one_minus_sigma * rt + bkap / w.tau + w.c.dot(u2x) + w.b.dot(u2y) + w.h.dot(u2z)) /
          tc.denom;
  d.x = u2x + d.tau * tc.u1x;
  d.y = u2y + d.tau * tc.u1y;
  d.z = u2z + d.tau * tc.u1z;
  d.s.resize(w.m);
  for (size_t j = 0; j < w.segs.size(); ++j) {
    const Seg& seg = w.segs[j];
    d.s.segment(seg.offset, seg.rows) = detail::apply_Wt(
        seg, w.sc[j],
        VecR(ldiv[j] - detail::apply_W(seg, w.sc[j], VecR(d.z.segment(seg.offset, seg.rows)))));
  }
  d.kappa = (bkap - w.kappa * d.tau) / w.tau;
  return d;
}

double full_max_step(const Hsd& w, const Dir& d, std::vector<VecR>& ds_sc,
                     std::vector<VecR>& dz_sc) {
  double amax = kInf;
  for (size_t j = 0; j < w.segs.size(); ++j) {
    const Seg& seg = w.segs[j];
    ds_sc[j] = detail::apply_Winv_t(seg, w.sc[j], VecR(d.s.segment(seg.offset, seg.rows)));
    dz_sc[j] = detail::apply_W(seg, w.sc[j], VecR(d.z.segment(seg.offset, seg.rows)));
    amax = std::min(amax, detail::max_step_scaled(seg, w.sc[j], ds_sc[j]));
    amax = std::min(amax, detail::max_step_scaled(seg, w.sc[j], dz_sc[j]));
  }
  if (d.tau < 0) amax = std::min(amax, -w.tau / d.tau);
  if (d.kappa < 0) amax = std::min(amax, -w.kappa / d.kappa);
  return amax;
}

}  // namespace

ConeSolution solve(const ConicProgram& prog, const SolverSettings& st) {
  prog.validate();

  Hsd w;
  w.n = prog.num_vars;
  w.c = prog.c;

  // Split blocks into equalities (zero cone) and cone rows.
  int m = 0, p = 0;
  for (const auto& blk : prog.blocks)
    (blk.cone.kind == ConeKind::Zero ? p : m) += blk.cone.rows();
  w.m = m;
  w.p = p;
  w.G.setZero(m, w.n);
  w.h.setZero(m);
  w.A.setZero(p, w.n);
  w.b.setZero(p);

  struct BlockSlot {
    bool eq;
    int offset;
    int rows;
  };
  std::vector<BlockSlot> slots;
  {
    int mo = 0, po = 0;
    for (const auto& blk : prog.blocks) {
      const int rows = blk.cone.rows();
      if (blk.cone.kind == ConeKind::Zero) {
        w.A.middleRows(po, rows) = blk.A;
        w.b.segment(po, rows) = blk.b;
        slots.push_back({true, po, rows});
        po += rows;
      } else {
        w.G.middleRows(mo, rows) = blk.A;
        w.h.segment(mo, rows) = blk.b;
        w.segs.push_back({blk.cone.kind, blk.cone.dim, rows, mo});
        slots.push_back({false, mo, rows});
        mo += rows;
      }
    }
  }
  if (m == 0) throw std::invalid_argument("solve: program has no cone constraints");
  w.deg = detail::cone_degree(w.segs);

  // Unit initialization on the central ray.
  w.x = VecR::Zero(w.n);
  w.y = VecR::Zero(w.p);
  w.s.resize(m);
  w.z.resize(m);
  for (const auto& seg : w.segs) {
    VecR e = detail::cone_e(seg);
    w.s.segment(seg.offset, seg.rows) = e;
    w.z.segment(seg.offset, seg.rows) = e;
  }
  w.sc.resize(w.segs.size());

  const double normb = w.b.norm(), normh = w.h.norm(), normc = w.c.norm();
  double col_scale = 1.0;
  for (int t = 0; t < w.n; ++t)
    col_scale = std::max(col_scale, std::sqrt(w.G.col(t).squaredNorm() + w.A.col(t).squaredNorm()));

  std::ofstream log;
  if (!st.iter_log_path.empty()) {
    log.open(st.iter_log_path);
    log << "iter,mu,pres,dres,relgap,pobj,dobj,tau,kappa,sigma,alpha\n";
  }

  ConeSolution sol;
  auto fill_scaled_solution = [&](SolveStatus status, const std::string& msg) {
    sol.status = status;
    sol.message = msg;
    sol.x = w.x / w.tau;
    sol.block_dual.clear();
    for (size_t bi = 0; bi < prog.blocks.size(); ++bi) {
      const auto& slot = slots[bi];
      sol.block_dual.push_back(slot.eq ? VecR(w.y.segment(slot.offset, slot.rows) / w.tau)
                                       : VecR(w.z.segment(slot.offset, slot.rows) / w.tau));
    }
    sol.tau = w.tau;
    sol.kappa = w.kappa;
  };

  std::vector<VecR> bs(w.segs.size()), ds_sc(w.segs.size()), dz_sc(w.segs.size());
  Kkt kkt;
  double sigma_logged = 0.0, alpha_logged = 0.0;

  // Late iterations can corrupt a nearly-converged iterate (the KKT system
  // turns singular as mu -> 0), so remember the best one and fall back to it
  // on any stall instead of returning whatever the last step produced.
  struct BestIterate {
    double merit = std::numeric_limits<double>::infinity();
    int it = 0;
    VecR x, y, z, s;
    double tau = 1.0, kappa = 1.0;
    double pobj = 0.0, dobj = 0.0, rel_gap = 0.0, pres = 0.0, dres = 0.0;
  } best;
  auto restore_best = [&]() {
    if (!std::isfinite(best.merit)) return;
    w.x = best.x;
    w.y = best.y;
    w.z = best.z;
    w.s = best.s;
    w.tau = best.tau;
    w.kappa = best.kappa;
    sol.primal_obj = best.pobj;
    sol.dual_obj = best.dobj;
    sol.rel_gap = best.rel_gap;
    sol.pres = best.pres;
    sol.dres = best.dres;
  };
  auto soft_converged = [&]() {
    return best.pres <= st.tol_feas_soft && best.dres <= st.tol_feas_soft &&
           best.rel_gap <= st.tol_gap_soft;
  };
  auto stalled_exit = [&](const char* hard_msg) {
    restore_best();
    if (soft_converged())
      fill_scaled_solution(SolveStatus::Optimal, "converged to reduced accuracy");
    else
      fill_scaled_solution(SolveStatus::Numerical, hard_msg);
  };

  for (int it = 0;; ++it) {
    // Residuals of the homogeneous embedding.
    VecR rx = w.A.transpose() * w.y + w.G.transpose() * w.z + w.c * w.tau;
    VecR ry = w.A * w.x - w.b * w.tau;
    VecR rz = w.s + w.G * w.x - w.h * w.tau;
    const double rt = w.kappa + w.c.dot(w.x) + w.b.dot(w.y) + w.h.dot(w.z);

    const double pobj = w.c.dot(w.x) / w.tau;
    const double dobj = -(w.b.dot(w.y) + w.h.dot(w.z)) / w.tau;
    const double pres =
        std::max(w.p ? ry.norm() / (1.0 + normb) : 0.0, rz.norm() / (1.0 + normh)) / w.tau;
    const double dres = rx.norm() / (1.0 + normc) / w.tau;
    const double gap_abs = w.s.dot(w.z) / (w.tau * w.tau);
    const double rel_gap = gap_abs / std::max(1.0, std::abs(pobj));
    const double mu = (w.s.dot(w.z) + w.tau * w.kappa) / (w.deg + 1.0);

    if (log.is_open()) {
      char line[256];
      std::snprintf(line, sizeof(line), "%d,%.6e,%.6e,%.6e,%.6e,%.10e,%.10e,%.3e,%.3e,%.3e,%.3e\n",
                    it, mu, pres, dres, rel_gap, pobj, dobj, w.tau, w.kappa, sigma_logged,
                    alpha_logged);
      log << line;
    }

    // Weak duality, corrected for the iterate's own infeasibility. The exact
    // identity pobj - dobj = (s'z + tau*kappa)/tau^2 - kappa/tau
    //                        + (x'rx - y'ry - z'rz)/tau^2
    // makes the allowance below a true bound whenever the iterate stays in
    // its cones, so a violation means a corrupted iterate, not a loose gate.
    if (st.check_weak_duality) {
      const double allowance =
          (std::abs(rx.dot(w.x)) + std::abs(ry.dot(w.y)) + std::abs(rz.dot(w.z))) /
              (w.tau * w.tau) +
          w.kappa / w.tau;
      const double slack = allowance + 1e-9 * (1.0 + std::abs(pobj) + std::abs(dobj));
      if (pobj - dobj < -slack)
        throw std::logic_error("solver invariant violated: primal objective fell below dual");
    }

    sol.primal_obj = pobj;
    sol.dual_obj = dobj;
    sol.rel_gap = rel_gap;
    sol.pres = pres;
    sol.dres = dres;
    sol.iterations = it;

    const double merit = std::max({pres, dres, rel_gap});
    if (merit < best.merit) {
      best.merit = merit;
      best.it = it;
      best.x = w.x;
      best.y = w.y;
      best.z = w.z;
      best.s = w.s;
      best.tau = w.tau;
      best.kappa = w.kappa;
      best.pobj = pobj;
      best.dobj = dobj;
      best.rel_gap = rel_gap;
      best.pres = pres;
      best.dres = dres;
    }

    if (pres <= st.tol_feas && dres <= st.tol_feas &&
        (rel_gap <= st.tol_gap ||
         std::abs(pobj - dobj) <= st.tol_gap * std::max(1.0, std::abs(pobj)))) {
      fill_scaled_solution(SolveStatus::Optimal, "converged");
      return sol;
    }

    if (w.tau <= st.tau_kappa_ratio * w.kappa) {
      // Classify the divergence via the certificate residuals.
      const double pin_gap = -(w.b.dot(w.y) + w.h.dot(w.z));
      const double din_gap = -w.c.dot(w.x);
      const double yz = std::max(1e-300, std::sqrt(w.y.squaredNorm() + w.z.squaredNorm()));
      const double xn = std::max(1e-300, w.x.norm());
      const double pres_cert = (w.A.transpose() * w.y + w.G.transpose() * w.z).norm();
      const double dres_cert =
          std::sqrt((w.A * w.x).squaredNorm() + (w.s + w.G * w.x).squaredNorm());
      const bool pin = pin_gap > 0 && pres_cert <= 1e-5 * col_scale * yz;
      const bool din = din_gap > 0 && dres_cert <= 1e-5 * col_scale * xn;
      if (pin && (!din || pin_gap / yz >= din_gap / xn)) {
        sol.status = SolveStatus::PrimalInfeasible;
        sol.message = "dual improving ray certifies primal infeasibility";
        sol.x = VecR::Zero(w.n);
        sol.block_dual.clear();
        for (size_t bi = 0; bi < prog.blocks.size(); ++bi) {
          const auto& slot = slots[bi];
          sol.block_dual.push_back(slot.eq ? VecR(w.y.segment(slot.offset, slot.rows) / pin_gap)
                                           : VecR(w.z.segment(slot.offset, slot.rows) / pin_gap));
        }
        sol.tau = w.tau;
        sol.kappa = w.kappa;
        return sol;
      }
      if (din) {
        sol.status = SolveStatus::DualInfeasible;
        sol.message = "primal improving ray certifies dual infeasibility (unbounded objective)";
        sol.x = w.x / din_gap;
        sol.block_dual.clear();
        for (size_t bi = 0; bi < prog.blocks.size(); ++bi)
          sol.block_dual.push_back(VecR::Zero(slots[bi].rows));
        sol.tau = w.tau;
        sol.kappa = w.kappa;
        return sol;
      }
      stalled_exit("tau collapsed without a valid certificate");
      return sol;
    }

    if (it >= st.max_iter) {
      restore_best();
      if (soft_converged())
        fill_scaled_solution(SolveStatus::Optimal, "converged to reduced accuracy");
      else
        fill_scaled_solution(SolveStatus::MaxIter, "iteration limit reached");
      return sol;
    }

    // No improvement for a while on the optimality side: further steps only
    // degrade the iterate.
    if (w.kappa <= w.tau && it >= best.it + 8 && merit > best.merit) {
      stalled_exit("stalled without further progress");
      return sol;
    }

    // Nesterov-Todd scalings and the factored reduced KKT core.
    try {
      for (size_t j = 0; j < w.segs.size(); ++j)
        detail::compute_scaling(w.segs[j], w.s, w.z, w.sc[j]);
      build_kkt(w, st.static_reg, kkt);
    } catch (const std::runtime_error& e) {
      stalled_exit(e.what());
      return sol;
    }

    TauStep tc;
    solve3(w, kkt, VecR(-w.c), w.b, w.h, tc.u1x, tc.u1y, tc.u1z);
    tc.denom = w.kappa / w.tau - (w.c.dot(tc.u1x) + w.b.dot(tc.u1y) + w.h.dot(tc.u1z));
    if (!std::isfinite(tc.denom) || std::abs(tc.denom) < 1e-300) {
      stalled_exit("singular tau column");
      return sol;
    }

    // Predictor (affine) direction.
    for (size_t j = 0; j < w.segs.size(); ++j)
      bs[j] = -detail::jordan_prod(w.segs[j], w.sc[j].lambda, w.sc[j].lambda);
    Dir aff = assemble_direction(w, kkt, tc, 1.0, rx, ry, rz, rt, bs, -w.tau * w.kappa);
    const double a_aff = std::min(1.0, full_max_step(w, aff, ds_sc, dz_sc));

    // Centering weight from the affine step.
    const double sigma = std::min(0.9999, std::max(1e-8, std::pow(1.0 - a_aff, 3)));

    // Corrector: second-order terms from the affine direction.
    for (size_t j = 0; j < w.segs.size(); ++j) {
      const Seg& seg = w.segs[j];
      bs[j] = sigma * mu * detail::cone_e(seg) -
              detail::jordan_prod(seg, w.sc[j].lambda, w.sc[j].lambda) -
              detail::jordan_prod(seg, ds_sc[j], dz_sc[j]);
    }
    const double bkap = sigma * mu - w.tau * w.kappa - aff.tau * aff.kappa;
    Dir dir = assemble_direction(w, kkt, tc, 1.0 - sigma, rx, ry, rz, rt, bs, bkap);

    double a_max = full_max_step(w, dir, ds_sc, dz_sc);
    double alpha = std::min(1.0, st.step_fraction * a_max);
    if (!(alpha > 1e-9)) {
      stalled_exit("step length collapsed");
      return sol;
    }

    w.x += alpha * dir.x;
    w.y += alpha * dir.y;
    w.z += alpha * dir.z;
    w.s += alpha * dir.s;
    w.tau += alpha * dir.tau;
    w.kappa += alpha * dir.kappa;
    sigma_logged = sigma;
    alpha_logged = alpha;
  }
}

}  // namespace swiptsec
