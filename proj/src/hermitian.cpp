#include "swiptsec/hermitian.hpp"

#include <cmath>
#include <stdexcept>

namespace swiptsec {

int svec_side(int dim) {
  const int side = static_cast<int>((std::sqrt(8.0 * dim + 1.0) - 1.0) / 2.0 + 0.5);
  if (dim < 1 || svec_dim(side) != dim)
    throw std::invalid_argument("svec_side: dimension is not triangular");
  return side;
}

bool is_hermitian(const MatC& S, double tol) {
  if (S.rows() != S.cols()) return false;
  const double scale = std::max(1.0, S.cwiseAbs().maxCoeff());
  return (S - S.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

MatR embed_hermitian(const MatC& S) {
  const Eigen::Index n = S.rows();
  if (S.cols() != n) throw std::invalid_argument("embed_hermitian: square input required");
  MatR E(2 * n, 2 * n);
  const MatR X = S.real();
  const MatR Y = S.imag();
  E.topLeftCorner(n, n) = X;
  E.topRightCorner(n, n) = -Y;
  E.bottomLeftCorner(n, n) = Y;
  E.bottomRightCorner(n, n) = X;
  return E;
}

MatC reconstruct_hermitian(const MatR& E) {
  const Eigen::Index m = E.rows();
  if (E.cols() != m || m % 2 != 0)
    throw std::invalid_argument("reconstruct_hermitian: even-sided square input required");
  const Eigen::Index n = m / 2;
  const MatR S11 = E.topLeftCorner(n, n);
  const MatR S12 = E.topRightCorner(n, n);
  const MatR S22 = E.bottomRightCorner(n, n);
  const MatR X = 0.5 * (S11 + S22);
  const MatR Y = 0.5 * (S12.transpose() - S12);
  MatC Q = X.cast<Cplx>() + Cplx(0.0, 1.0) * Y.cast<Cplx>();
  // Symmetrize away any residual asymmetry of the real input.
  return 0.5 * (Q + Q.adjoint());
}

MatC kron_identity_left(int copies, const MatC& Q) {
  if (copies < 1) throw std::invalid_argument("kron_identity_left: copies must be >= 1");
  const Eigen::Index n = Q.rows();
  if (Q.cols() != n) throw std::invalid_argument("kron_identity_left: square input required");
  MatC K = MatC::Zero(copies * n, copies * n);
  for (int c = 0; c < copies; ++c) K.block(c * n, c * n, n, n) = Q;
  return K;
}

VecR svec(const MatR& S) {
  const Eigen::Index n = S.rows();
  if (S.cols() != n) throw std::invalid_argument("svec: square input required");
  static const double rt2 = std::sqrt(2.0);
  VecR v(svec_dim(static_cast<int>(n)));
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    v[k++] = S(j, j);
    for (Eigen::Index i = j + 1; i < n; ++i)
      v[k++] = rt2 * 0.5 * (S(i, j) + S(j, i));
  }
  return v;
}

MatR smat(const VecR& v) {
  const int n = svec_side(static_cast<int>(v.size()));
  static const double inv_rt2 = 1.0 / std::sqrt(2.0);
  MatR S(n, n);
  Eigen::Index k = 0;
  for (int j = 0; j < n; ++j) {
    S(j, j) = v[k++];
    for (int i = j + 1; i < n; ++i) {
      S(i, j) = inv_rt2 * v[k];
      S(j, i) = inv_rt2 * v[k];
      ++k;
    }
  }
  return S;
}

MatC psd_sqrt(const MatC& S, double neg_tol) {
  if (!is_hermitian(S, 1e-10))
    throw std::invalid_argument("psd_sqrt: input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<MatC> eig(0.5 * (S + S.adjoint()));
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("psd_sqrt: eigendecomposition failed");
  VecR lam = eig.eigenvalues();
  const double scale = std::max(1.0, lam.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam[i] < -neg_tol * scale)
      throw std::invalid_argument("psd_sqrt: input has a significantly negative eigenvalue");
    // Zero out eigendecomposition noise so rank-deficient inputs keep an
    // exactly rank-deficient root (sqrt would amplify eps-level residue to
    // sqrt(eps)).
    lam[i] = lam[i] <= 1e-13 * scale ? 0.0 : std::sqrt(lam[i]);
  }
  return eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().adjoint();
}

LogDetBound logdet_lb_check(const MatC& A) {
  if (!is_hermitian(A, 1e-10))
    throw std::invalid_argument("logdet_lb_check: input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<MatC> eig(0.5 * (A + A.adjoint()),
                                          Eigen::EigenvaluesOnly);
  const VecR lam = eig.eigenvalues();
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    const double v = 1.0 + lam[i];
    if (v <= 0.0) throw std::invalid_argument("logdet_lb_check: I + A is not positive definite");
    log_det += std::log(v);
  }
  return LogDetBound{std::exp(log_det), 1.0 + lam.sum()};
}

double trace_herm_product(const MatC& C, const MatC& Q) {
  if (C.rows() != Q.rows() || C.cols() != Q.cols())
    throw std::invalid_argument("trace_herm_product: dimension mismatch");
  return (C.cwiseProduct(Q.conjugate())).sum().real();
}

}  // namespace swiptsec
