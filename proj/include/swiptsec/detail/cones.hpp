#pragma once

#include <vector>

#include "swiptsec/conic.hpp"

// Cone-wise primitives of the interior-point solver: Nesterov-Todd scalings,
// Jordan-algebra operations, and exact step-to-boundary computations. Kept in
// a separate header so their algebraic identities can be property-tested.

namespace swiptsec::detail {

struct Seg {
  ConeKind kind;
  int dim;     // cone dimension (rows for nonneg/soc, matrix side for psd)
  int rows;    // row count in the stacked cone vector
  int offset;  // offset into the stacked cone vector
};

// Nesterov-Todd scaling state for one cone segment. For every cone,
// lambda = W z = W^{-T} s at the point the scaling was computed from.
struct Scaling {
  // nonneg
  VecR w;  // W = diag(w)
  // soc
  double eta = 0.0;
  VecR wbar;
  // psd
  MatR R, Rinv, M, Minv;  // M = R R^T
  VecR sigma;             // scaled-frame eigenvalues
  VecR lambda;
};

// Throws std::runtime_error when the iterate is not strictly interior.
void compute_scaling(const Seg& seg, const VecR& s, const VecR& z, Scaling& sc);

VecR apply_W(const Seg& seg, const Scaling& sc, const VecR& v);
VecR apply_Wt(const Seg& seg, const Scaling& sc, const VecR& v);
VecR apply_Winv_t(const Seg& seg, const Scaling& sc, const VecR& v);
VecR apply_WtW(const Seg& seg, const Scaling& sc, const VecR& v);
VecR apply_WtW_inv(const Seg& seg, const Scaling& sc, const VecR& v);

VecR cone_e(const Seg& seg);
VecR jordan_prod(const Seg& seg, const VecR& u, const VecR& v);
// Solves lambda o x = u for x.
VecR jordan_div_lambda(const Seg& seg, const Scaling& sc, const VecR& u);

// Largest alpha with lambda + alpha * d still in the cone (+inf if never
// leaving).
double max_step_scaled(const Seg& seg, const Scaling& sc, const VecR& d);

// Whether a segment-local point is inside the cone with the given margin.
bool in_cone(const Seg& seg, const VecR& v, double margin = 0.0);

double cone_degree(const std::vector<Seg>& segs);

}  // namespace swiptsec::detail
