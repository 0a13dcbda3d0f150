#include "swiptsec/design.hpp"

#include <cctype>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "swiptsec/restrictions.hpp"

namespace swiptsec {

namespace {
constexpr double kLog2E = 1.4426950408889634;  // 1/ln 2

// Spectrum ratios above this trigger a polish re-solve; ratios the polish must
// reach before its result replaces the original solution.
constexpr double kPolishTrigger = 1e-6;
constexpr double kPolishAccept = 1e-4;

// Same feasible set with transmit power capped at `cap`, objective swapped to
// the intended receiver's gain. Interior-point iterates stall mid-face when
// the optimal face is flat; maximizing the gain picks out its sharpest point.
ConicProgram gain_max_at_cap(const ConicProgram& prog, const VecC& h, double cap) {
  ConicProgram out = prog;
  const VarRange qr = out.range("Q");
  const int side = svec_side(qr.count);
  MatR row = MatR::Zero(1, out.num_vars);
  row.block(0, qr.offset, 1, qr.count) =
      0.5 * svec(MatR::Identity(side, side)).transpose();
  VecR rhs(1);
  rhs << cap;
  out.add_block("power-cap", ConeTag::nonneg(1), row, rhs);
  out.c.setZero();
  const MatC hh = h * h.adjoint();
  out.c.segment(qr.offset, qr.count) =
      -0.5 * svec(embed_hermitian(hh)) / std::max(1e-300, h.squaredNorm());
  return out;
}
}  // namespace

double eavesdropper_information(const MatC& Q, const MatC& H, double sigma_e_sq) {
  const MatC C = H.adjoint() * Q * H / sigma_e_sq;
  Eigen::SelfAdjointEigenSolver<MatC> eig(0.5 * (C + C.adjoint()), Eigen::EigenvaluesOnly);
  double nats = 0.0;
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i)
    nats += std::log1p(std::max(0.0, eig.eigenvalues()[i]));
  return nats * kLog2E;
}

const char* method_name(MethodTag m) {
  switch (m) {
    case MethodTag::BTI: return "bti";
    case MethodTag::SProcedure: return "sproc";
    case MethodTag::LDI: return "ldi";
    case MethodTag::NonRobust: return "nonrobust";
    case MethodTag::MRT: return "mrt";
  }
  return "?";
}

MethodTag parse_method(const std::string& name) {
  std::string s;
  for (char c : name) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "bti") return MethodTag::BTI;
  if (s == "sproc" || s == "s-proc" || s == "sprocedure") return MethodTag::SProcedure;
  if (s == "ldi") return MethodTag::LDI;
  if (s == "nonrobust" || s == "non-robust") return MethodTag::NonRobust;
  if (s == "mrt") return MethodTag::MRT;
  throw std::invalid_argument("unknown method: " + name);
}

ExtractResult extract_beamformer(const MatC& Q) {
  if (!is_hermitian(Q, 1e-8))
    throw std::invalid_argument("extract_beamformer: input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<MatC> eig(0.5 * (Q + Q.adjoint()));
  const VecR& lam = eig.eigenvalues();  // ascending
  const Eigen::Index n = lam.size();
  ExtractResult r;
  const double l1 = lam[n - 1];
  const double l2 = n >= 2 ? std::max(0.0, lam[n - 2]) : 0.0;
  r.negligible = l1 < 1e-12;
  r.rank_ratio = l2 / std::max(l1, 1e-300);
  r.b = std::sqrt(std::max(0.0, l1)) * eig.eigenvectors().col(n - 1);
  return r;
}

double secrecy_rate_exact(const MatC& Q, const VecC& h, const std::vector<MatC>& eves,
                          double sigma_d_sq, double sigma_e_sq) {
  const double snr = std::max(0.0, std::real(h.dot(Q * h)) / sigma_d_sq);
  double rate = std::log1p(snr) * kLog2E;
  double worst = 0.0;
  for (const MatC& H : eves) worst = std::max(worst, eavesdropper_information(Q, H, sigma_e_sq));
  return std::max(0.0, rate - worst);
}

double harvested_power(const MatC& Q, const VecC& g, double xi) {
  return xi * std::real(g.dot(Q * g));
}

BeamformingDesign solve_power_min(const ChannelSet& cs, const ScenarioConfig& cfg,
                                  MethodTag method, const SolverSettings& settings) {
  const auto t0 = std::chrono::steady_clock::now();
  BeamformingDesign d;
  if (method == MethodTag::MRT) {
    d = mrt_design(cs, cfg);
  } else {
    d.method = method;
    ConicProgram prog = build_power_min(method, cs, cfg);
    ConeSolution sol = solve(prog, settings);
    d.status = sol.status;
    d.iterations = sol.iterations;
    d.note = sol.message;
    if (sol.ok()) {
      d.Q = extract_q(prog, sol.x);
      d.power = std::real(d.Q.trace());
      ExtractResult er = extract_beamformer(d.Q);
      d.b = er.b;
      d.rank_ratio = er.rank_ratio;
      d.negligible = er.negligible;
      if (!d.negligible && d.rank_ratio > kPolishTrigger) {
        for (double slack : {1e-5, 1e-4}) {
          const double cap = d.power * (1.0 + slack);
          SolverSettings ps = settings;
          ps.iter_log_path.clear();
          const ConicProgram pprog = gain_max_at_cap(prog, cs.h, cap);
          ConeSolution psol = solve(pprog, ps);
          d.iterations += psol.iterations;
          if (!psol.ok()) continue;
          const MatC Q2 = extract_q(pprog, psol.x);
          const double tr2 = std::real(Q2.trace());
          ExtractResult er2 = extract_beamformer(Q2);
          if (er2.rank_ratio < d.rank_ratio && er2.rank_ratio <= kPolishAccept &&
              tr2 <= cap * (1.0 + 1e-7)) {
            d.Q = Q2;
            d.power = tr2;
            d.b = er2.b;
            d.rank_ratio = er2.rank_ratio;
            d.negligible = er2.negligible;
            d.note = d.note.empty() ? "rank-polished" : d.note + "; rank-polished";
            break;
          }
        }
      }
    } else {
      d.Q = MatC::Zero(cfg.n_tx, cfg.n_tx);
      d.b = VecC::Zero(cfg.n_tx);
    }
  }
  d.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                  .count();
  return d;
}

}  // namespace swiptsec
