#include "swiptsec/detail/cones.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace swiptsec::detail {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void compute_scaling(const Seg& seg, const VecR& s, const VecR& z, Scaling& sc) {
  const auto sv = s.segment(seg.offset, seg.rows);
  const auto zv = z.segment(seg.offset, seg.rows);
  switch (seg.kind) {
    case ConeKind::Nonneg: {
      if ((sv.array() <= 0).any() || (zv.array() <= 0).any())
        throw std::runtime_error("scaling: nonneg iterate left the interior");
      sc.w = (sv.array() / zv.array()).sqrt().matrix();
      sc.lambda = (sv.array() * zv.array()).sqrt().matrix();
      return;
    }
    case ConeKind::SecondOrder: {
      const int d = seg.rows;
      const double zres = zv[0] * zv[0] - zv.tail(d - 1).squaredNorm();
      const double sres = sv[0] * sv[0] - sv.tail(d - 1).squaredNorm();
      if (zres <= 0 || sres <= 0 || zv[0] <= 0 || sv[0] <= 0)
        throw std::runtime_error("scaling: soc iterate left the interior");
      const double znorm = std::sqrt(zres), snorm = std::sqrt(sres);
      VecR zt = zv / znorm, st = sv / snorm;
      // Plain inner product here: it makes wbar unit-hyperbolic.
      const double gamma = std::sqrt(0.5 * (1.0 + zt.dot(st)));
      sc.wbar.resize(d);
      sc.wbar[0] = (st[0] + zt[0]) / (2.0 * gamma);
      sc.wbar.tail(d - 1) = (st.tail(d - 1) - zt.tail(d - 1)) / (2.0 * gamma);
      sc.eta = std::sqrt(snorm / znorm);
      // lambda = W z via the same closed form apply_W uses.
      const double wv = sc.wbar.tail(d - 1).dot(zv.tail(d - 1));
      sc.lambda.resize(d);
      sc.lambda[0] = sc.eta * (sc.wbar[0] * zv[0] + wv);
      sc.lambda.tail(d - 1) =
          sc.eta * (zv.tail(d - 1) + (wv / (1.0 + sc.wbar[0])) * sc.wbar.tail(d - 1) +
                    zv[0] * sc.wbar.tail(d - 1));
      return;
    }
    case ConeKind::Psd: {
      MatR S = smat(VecR(sv)), Z = smat(VecR(zv));
      Eigen::LLT<MatR> ls(S), lz(Z);
      if (ls.info() != Eigen::Success || lz.info() != Eigen::Success)
        throw std::runtime_error("scaling: psd iterate left the interior");
      MatR Ls = ls.matrixL();
      MatR Lz = lz.matrixL();
      Eigen::JacobiSVD<MatR> svd(MatR(Lz.transpose() * Ls),
                                 Eigen::ComputeFullU | Eigen::ComputeFullV);
      sc.sigma = svd.singularValues();
      if (sc.sigma.minCoeff() <= 0)
        throw std::runtime_error("scaling: psd scaled frame is singular");
      const VecR si = sc.sigma.array().sqrt().inverse().matrix();
      sc.R = Ls * svd.matrixV() * si.asDiagonal();
      sc.Rinv = si.asDiagonal() * svd.matrixU().transpose() * Lz.transpose();
      sc.M = sc.R * sc.R.transpose();
      sc.Minv = sc.Rinv.transpose() * sc.Rinv;
      sc.lambda = svec(MatR(sc.sigma.asDiagonal()));
      return;
    }
    case ConeKind::Zero: break;
  }
  throw std::logic_error("compute_scaling: unexpected cone");
}

VecR apply_W(const Seg& seg, const Scaling& sc, const VecR& v) {
  switch (seg.kind) {
    case ConeKind::Nonneg: return sc.w.cwiseProduct(v);
    case ConeKind::SecondOrder: {
      const int d = seg.rows;
      const double wv = sc.wbar.tail(d - 1).dot(v.tail(d - 1));
      VecR r(d);
      r[0] = sc.wbar[0] * v[0] + wv;
      r.tail(d - 1) =
          v.tail(d - 1) + (wv / (1.0 + sc.wbar[0])) * sc.wbar.tail(d - 1) + v[0] * sc.wbar.tail(d - 1);
      return sc.eta * r;
    }
    case ConeKind::Psd: return svec(MatR(sc.R.transpose() * smat(v) * sc.R));
    case ConeKind::Zero: break;
  }
  throw std::logic_error("apply_W");
}

VecR apply_Wt(const Seg& seg, const Scaling& sc, const VecR& v) {
  if (seg.kind == ConeKind::Psd) return svec(MatR(sc.R * smat(v) * sc.R.transpose()));
  return apply_W(seg, sc, v);  // diagonal and soc scalings are symmetric
}

VecR apply_Winv_t(const Seg& seg, const Scaling& sc, const VecR& v) {
  switch (seg.kind) {
    case ConeKind::Nonneg: return v.cwiseQuotient(sc.w);
    case ConeKind::SecondOrder: {
      // W^{-1} = eta^{-1} J Wbar J: the scaling form with the tail negated.
      const int d = seg.rows;
      const double wv = sc.wbar.tail(d - 1).dot(v.tail(d - 1));
      VecR r(d);
      r[0] = sc.wbar[0] * v[0] - wv;
      r.tail(d - 1) =
          v.tail(d - 1) + (wv / (1.0 + sc.wbar[0])) * sc.wbar.tail(d - 1) - v[0] * sc.wbar.tail(d - 1);
      return r / sc.eta;
    }
    case ConeKind::Psd: return svec(MatR(sc.Rinv * smat(v) * sc.Rinv.transpose()));
    case ConeKind::Zero: break;
  }
  throw std::logic_error("apply_Winv_t");
}

VecR apply_WtW(const Seg& seg, const Scaling& sc, const VecR& v) {
  switch (seg.kind) {
    case ConeKind::Nonneg: return v.cwiseProduct(sc.w.cwiseAbs2());
    case ConeKind::SecondOrder: return apply_Wt(seg, sc, apply_W(seg, sc, v));
    case ConeKind::Psd: return svec(MatR(sc.M * smat(v) * sc.M));
    case ConeKind::Zero: break;
  }
  throw std::logic_error("apply_WtW");
}

VecR apply_WtW_inv(const Seg& seg, const Scaling& sc, const VecR& v) {
  switch (seg.kind) {
    case ConeKind::Nonneg: return v.cwiseQuotient(sc.w.cwiseAbs2());
    case ConeKind::SecondOrder: {
      VecR t = apply_Winv_t(seg, sc, v);
      return apply_Winv_t(seg, sc, t);
    }
    case ConeKind::Psd: return svec(MatR(sc.Minv * smat(v) * sc.Minv));
    case ConeKind::Zero: break;
  }
  throw std::logic_error("apply_WtW_inv");
}

VecR cone_e(const Seg& seg) {
  if (seg.kind == ConeKind::Psd) return svec(MatR(MatR::Identity(seg.dim, seg.dim)));
  VecR e = VecR::Zero(seg.rows);
  if (seg.kind == ConeKind::SecondOrder)
    e[0] = 1.0;
  else
    e.setOnes();
  return e;
}

VecR jordan_prod(const Seg& seg, const VecR& u, const VecR& v) {
  switch (seg.kind) {
    case ConeKind::Nonneg: return u.cwiseProduct(v);
    case ConeKind::SecondOrder: {
      const int d = seg.rows;
      VecR r(d);
      r[0] = u.dot(v);
      r.tail(d - 1) = u[0] * v.tail(d - 1) + v[0] * u.tail(d - 1);
      return r;
    }
    case ConeKind::Psd: {
      MatR U = smat(u), V = smat(v);
      return svec(MatR(0.5 * (U * V + V * U)));
    }
    case ConeKind::Zero: break;
  }
  throw std::logic_error("jordan_prod");
}

VecR jordan_div_lambda(const Seg& seg, const Scaling& sc, const VecR& u) {
  switch (seg.kind) {
    case ConeKind::Nonneg: return u.cwiseQuotient(sc.lambda);
    case ConeKind::SecondOrder: {
      const int d = seg.rows;
      const VecR& l = sc.lambda;
      const double den = l[0] * l[0] - l.tail(d - 1).squaredNorm();
      VecR x(d);
      x[0] = (l[0] * u[0] - l.tail(d - 1).dot(u.tail(d - 1))) / den;
      x.tail(d - 1) = (u.tail(d - 1) - x[0] * l.tail(d - 1)) / l[0];
      return x;
    }
    case ConeKind::Psd: {
      MatR U = smat(u);
      MatR X(seg.dim, seg.dim);
      for (int i = 0; i < seg.dim; ++i)
        for (int j = 0; j < seg.dim; ++j) X(i, j) = 2.0 * U(i, j) / (sc.sigma[i] + sc.sigma[j]);
      return svec(X);
    }
    case ConeKind::Zero: break;
  }
  throw std::logic_error("jordan_div_lambda");
}

double max_step_scaled(const Seg& seg, const Scaling& sc, const VecR& d) {
  switch (seg.kind) {
    case ConeKind::Nonneg: {
      double amax = kInf;
      for (int i = 0; i < seg.rows; ++i)
        if (d[i] < 0) amax = std::min(amax, -sc.lambda[i] / d[i]);
      return amax;
    }
    case ConeKind::SecondOrder: {
      const int n = seg.rows;
      const VecR& l = sc.lambda;
      const double a = d[0] * d[0] - d.tail(n - 1).squaredNorm();
      const double b = l[0] * d[0] - l.tail(n - 1).dot(d.tail(n - 1));
      const double c = l[0] * l[0] - l.tail(n - 1).squaredNorm();
      double amax = kInf;
      const double disc = b * b - a * c;
      if (a < 0) {
        amax = (b + std::sqrt(std::max(0.0, disc))) / (-a);
      } else if (b < 0 && disc >= 0) {
        if (a > 0)
          amax = (-b - std::sqrt(disc)) / a;
        else
          amax = -c / (2.0 * b);
      }
      if (d[0] < 0) amax = std::min(amax, -l[0] / d[0]);
      return amax;
    }
    case ConeKind::Psd: {
      MatR D = smat(d);
      for (int i = 0; i < seg.dim; ++i)
        for (int j = 0; j < seg.dim; ++j) D(i, j) /= std::sqrt(sc.sigma[i] * sc.sigma[j]);
      Eigen::SelfAdjointEigenSolver<MatR> eig(D, Eigen::EigenvaluesOnly);
      const double nu = eig.eigenvalues().minCoeff();
      return nu >= 0 ? kInf : 1.0 / (-nu);
    }
    case ConeKind::Zero: break;
  }
  throw std::logic_error("max_step_scaled");
}

bool in_cone(const Seg& seg, const VecR& v, double margin) {
  switch (seg.kind) {
    case ConeKind::Nonneg: return v.minCoeff() >= margin;
    case ConeKind::SecondOrder: return v[0] - margin >= v.tail(seg.rows - 1).norm();
    case ConeKind::Psd: {
      Eigen::SelfAdjointEigenSolver<MatR> eig(smat(v), Eigen::EigenvaluesOnly);
      return eig.eigenvalues().minCoeff() >= margin;
    }
    case ConeKind::Zero: return v.cwiseAbs().maxCoeff() <= std::abs(margin);
  }
  return false;
}

double cone_degree(const std::vector<Seg>& segs) {
  double deg = 0;
  for (const auto& seg : segs) {
    if (seg.kind == ConeKind::Nonneg) deg += seg.rows;
    if (seg.kind == ConeKind::SecondOrder) deg += 1;
    if (seg.kind == ConeKind::Psd) deg += seg.dim;
  }
  return deg;
}

}  // namespace swiptsec::detail
