#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "swiptsec/hermitian.hpp"

// Block-structured conic program IR. A program is
//   minimize c' x   subject to   b_j - A_j x  in  K_j  for every block j,
// where K_j is one of {0}, the nonnegative orthant, a second-order cone, or a
// PSD cone over real symmetric matrices in svec coordinates.

namespace swiptsec {

enum class ConeKind { Zero, Nonneg, SecondOrder, Psd };

const char* cone_name(ConeKind kind);

struct ConeTag {
  ConeKind kind = ConeKind::Zero;
  int dim = 0;  // Zero/Nonneg/SecondOrder: row count; Psd: matrix side

  int rows() const { return kind == ConeKind::Psd ? svec_dim(dim) : dim; }

  static ConeTag zero(int d) { return {ConeKind::Zero, d}; }
  static ConeTag nonneg(int d) { return {ConeKind::Nonneg, d}; }
  static ConeTag second_order(int d) { return {ConeKind::SecondOrder, d}; }
  static ConeTag psd(int side) { return {ConeKind::Psd, side}; }
};

struct ConicBlock {
  std::string label;
  ConeTag cone;
  MatR A;
  VecR b;
};

struct VarRange {
  int offset = 0;
  int count = 0;
};

struct ConicProgram {
  int num_vars = 0;
  VecR c;
  std::vector<ConicBlock> blocks;
  std::vector<std::pair<std::string, VarRange>> ranges;

  ConicProgram() = default;
  explicit ConicProgram(int nvars) : num_vars(nvars), c(VecR::Zero(nvars)) {}

  // Returns the block index. Dimensions are checked immediately.
  int add_block(std::string label, ConeTag cone, MatR A, VecR b);

  void name_range(const std::string& name, int offset, int count);
  bool has_range(const std::string& name) const;
  const VarRange& range(const std::string& name) const;

  int total_cone_rows() const;
  int count_blocks(ConeKind kind) const;

  // Throws std::invalid_argument on any structural defect (dimension
  // mismatches, non-finite entries, overlapping named ranges).
  void validate() const;

  // Complete plain-text dump, suitable for diffing two programs or feeding
  // an external solver.
  void dump(std::ostream& os) const;
};

// Pulls a named svec-of-embedding segment out of a solution vector and maps
// it back to a complex Hermitian matrix.
MatC extract_q(const ConicProgram& prog, const VecR& x, const std::string& name = "Q");

// Builds a block by evaluating an affine residual r(x) = b - A x at the
// origin and at the unit vectors. The callback must be affine in x.
ConicBlock block_from_affine(std::string label, ConeTag cone, int num_vars,
                             const std::function<VecR(const VecR&)>& residual);

// Exact compression of stacked norm rows: returns (U, u0) with at most
// rank(T) + 1 rows such that ||U x + u0|| == ||T x + t0|| for every x.
std::pair<MatR, VecR> compress_norm_rows(const MatR& T, const VecR& t0,
                                         double rel_tol = 1e-13);

}  // namespace swiptsec
