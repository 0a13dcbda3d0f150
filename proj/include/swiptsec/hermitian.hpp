#pragma once

#include <Eigen/Dense>
#include <complex>

// Dense complex-Hermitian helpers: the real symmetric embedding used to pose
// complex PSD constraints over real symmetric cones, the scaled vectorization
// svec/smat, Hermitian square roots, and the log-det lower bound check.

namespace swiptsec {

using Cplx = std::complex<double>;
using MatC = Eigen::MatrixXcd;
using VecC = Eigen::VectorXcd;
using MatR = Eigen::MatrixXd;
using VecR = Eigen::VectorXd;

constexpr int svec_dim(int side) { return side * (side + 1) / 2; }

// Inverse of svec_dim; throws if dim is not a triangular number.
int svec_side(int dim);

bool is_hermitian(const MatC& S, double tol = 1e-12);

// S = X + iY (Hermitian) -> [[X, -Y], [Y, X]], real symmetric, eigenvalues of
// S each duplicated. PSD is preserved in both directions.
MatR embed_hermitian(const MatC& S);

// Inverse of embed_hermitian. Arbitrary symmetric input is first projected
// onto the embedding-form subspace, so reconstruct(embed(S)) == S exactly and
// general symmetric matrices map to their nearest Hermitian representative.
MatC reconstruct_hermitian(const MatR& E);

// I_copies (x) Q, i.e. block-diagonal with `copies` copies of Q.
MatC kron_identity_left(int copies, const MatC& Q);

// Column-major lower-triangle vectorization with off-diagonal entries scaled
// by sqrt(2), so dot(svec(A), svec(B)) == trace(A*B) for symmetric A, B.
VecR svec(const MatR& S);
MatR smat(const VecR& v);

// Hermitian square root via eigendecomposition. Eigenvalues in
// [-neg_tol * scale, 0) are clamped to zero; anything lower throws.
MatC psd_sqrt(const MatC& S, double neg_tol = 1e-8);

// Both sides of det(I + A) >= 1 + trace(A) for Hermitian PSD A. Equality
// holds exactly when A has rank <= 1.
struct LogDetBound {
  double det_side;
  double trace_side;
};
LogDetBound logdet_lb_check(const MatC& A);

// trace(C * Q) for Hermitian C, Q (real by symmetry).
double trace_herm_product(const MatC& C, const MatC& Q);

}  // namespace swiptsec
