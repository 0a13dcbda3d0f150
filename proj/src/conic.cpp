#include "swiptsec/conic.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace swiptsec {

const char* cone_name(ConeKind kind) {
  switch (kind) {
    case ConeKind::Zero: return "zero";
    case ConeKind::Nonneg: return "nonneg";
    case ConeKind::SecondOrder: return "soc";
    case ConeKind::Psd: return "psd";
  }
  return "?";
}

int ConicProgram::add_block(std::string label, ConeTag cone, MatR A, VecR b) {
  if (cone.dim < 1) throw std::invalid_argument("add_block: empty cone in '" + label + "'");
  if (A.rows() != cone.rows() || b.size() != cone.rows() || A.cols() != num_vars)
    throw std::invalid_argument("add_block: dimension mismatch in '" + label + "'");
  blocks.push_back(ConicBlock{std::move(label), cone, std::move(A), std::move(b)});
  return static_cast<int>(blocks.size()) - 1;
}

void ConicProgram::name_range(const std::string& name, int offset, int count) {
  if (has_range(name)) throw std::invalid_argument("name_range: duplicate '" + name + "'");
  if (offset < 0 || count < 1 || offset + count > num_vars)
    throw std::invalid_argument("name_range: '" + name + "' out of bounds");
  ranges.emplace_back(name, VarRange{offset, count});
}

bool ConicProgram::has_range(const std::string& name) const {
  for (const auto& [n, r] : ranges)
    if (n == name) return true;
  return false;
}

const VarRange& ConicProgram::range(const std::string& name) const {
  for (const auto& [n, r] : ranges)
    if (n == name) return r;
  throw std::invalid_argument("range: unknown name '" + name + "'");
}

int ConicProgram::total_cone_rows() const {
  int rows = 0;
  for (const auto& blk : blocks) rows += blk.cone.rows();
  return rows;
}

int ConicProgram::count_blocks(ConeKind kind) const {
  int n = 0;
  for (const auto& blk : blocks) n += (blk.cone.kind == kind) ? 1 : 0;
  return n;
}

void ConicProgram::validate() const {
  if (num_vars < 1) throw std::invalid_argument("validate: program has no variables");
  if (c.size() != num_vars) throw std::invalid_argument("validate: objective size mismatch");
  if (!c.allFinite()) throw std::invalid_argument("validate: non-finite objective");
  for (const auto& blk : blocks) {
    const int rows = blk.cone.rows();
    if (blk.cone.dim < 1) throw std::invalid_argument("validate: empty cone in '" + blk.label + "'");
    if (blk.A.rows() != rows || blk.b.size() != rows || blk.A.cols() != num_vars)
      throw std::invalid_argument("validate: dimension mismatch in '" + blk.label + "'");
    if (!blk.A.allFinite() || !blk.b.allFinite())
      throw std::invalid_argument("validate: non-finite entries in '" + blk.label + "'");
  }
  for (size_t i = 0; i < ranges.size(); ++i) {
    const auto& [ni, ri] = ranges[i];
    if (ri.offset < 0 || ri.count < 1 || ri.offset + ri.count > num_vars)
      throw std::invalid_argument("validate: range '" + ni + "' out of bounds");
    for (size_t j = i + 1; j < ranges.size(); ++j) {
      const auto& [nj, rj] = ranges[j];
      const bool disjoint =
          ri.offset + ri.count <= rj.offset || rj.offset + rj.count <= ri.offset;
      if (!disjoint)
        throw std::invalid_argument("validate: ranges '" + ni + "' and '" + nj + "' overlap");
    }
  }
}

namespace {
void dump_vector(std::ostream& os, const VecR& v) {
  char buf[40];
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", v[i]);
    os << (i ? " " : "") << buf;
  }
  os << '\n';
}
}  // namespace

void ConicProgram::dump(std::ostream& os) const {
  os << "swiptsec-conic v1\n";
  os << "vars " << num_vars << '\n';
  os << "objective\n";
  dump_vector(os, c);
  os << "ranges " << ranges.size() << '\n';
  for (const auto& [name, r] : ranges)
    os << name << ' ' << r.offset << ' ' << r.count << '\n';
  os << "blocks " << blocks.size() << '\n';
  for (size_t j = 0; j < blocks.size(); ++j) {
    const auto& blk = blocks[j];
    os << "block " << j << " \"" << blk.label << "\" " << cone_name(blk.cone.kind) << ' '
       << blk.cone.dim << '\n';
    os << "b\n";
    dump_vector(os, blk.b);
    os << "A\n";
    for (Eigen::Index r = 0; r < blk.A.rows(); ++r) dump_vector(os, VecR(blk.A.row(r)));
  }
}

MatC extract_q(const ConicProgram& prog, const VecR& x, const std::string& name) {
  const VarRange& r = prog.range(name);
  if (x.size() != prog.num_vars) throw std::invalid_argument("extract_q: solution size mismatch");
  return reconstruct_hermitian(smat(x.segment(r.offset, r.count)));
}

ConicBlock block_from_affine(std::string label, ConeTag cone, int num_vars,
                             const std::function<VecR(const VecR&)>& residual) {
  const int rows = cone.rows();
  VecR b = residual(VecR::Zero(num_vars));
  if (b.size() != rows)
    throw std::invalid_argument("block_from_affine: residual rows mismatch in '" + label + "'");
  MatR A(rows, num_vars);
  VecR e = VecR::Zero(num_vars);
  for (int t = 0; t < num_vars; ++t) {
    e[t] = 1.0;
    A.col(t) = b - residual(e);
    e[t] = 0.0;
  }
  return ConicBlock{std::move(label), cone, std::move(A), std::move(b)};
}

std::pair<MatR, VecR> compress_norm_rows(const MatR& T, const VecR& t0, double rel_tol) {
  if (t0.size() != T.rows()) throw std::invalid_argument("compress_norm_rows: size mismatch");
  const int n = static_cast<int>(T.cols());
  Eigen::SelfAdjointEigenSolver<MatR> eig(MatR(T.transpose() * T));
  const VecR lam = eig.eigenvalues();
  const double lam_max = lam.size() ? std::max(0.0, lam.maxCoeff()) : 0.0;
  std::vector<int> keep;
  for (int i = 0; i < lam.size(); ++i)
    if (lam[i] > rel_tol * std::max(lam_max, 1e-300)) keep.push_back(i);

  const int r = static_cast<int>(keep.size());
  MatR U(r, n);
  for (int k = 0; k < r; ++k)
    U.row(k) = std::sqrt(lam[keep[k]]) * eig.eigenvectors().col(keep[k]).transpose();

  // Match the cross term: U' u0 = T' t0, solvable because T' t0 lies in the
  // span of the kept eigenvectors up to rel_tol.
  VecR u0(r);
  const VecR Tt0 = T.transpose() * t0;
  for (int k = 0; k < r; ++k)
    u0[k] = eig.eigenvectors().col(keep[k]).dot(Tt0) / std::sqrt(lam[keep[k]]);

  const double resid_sq = t0.squaredNorm() - u0.squaredNorm();
  if (resid_sq > 1e-12 * std::max(1.0, t0.squaredNorm())) {
    // Constant component of t0 orthogonal to range(T): one extra fixed row.
    MatR U2(r + 1, n);
    U2.topRows(r) = U;
    U2.row(r).setZero();
    VecR u2(r + 1);
    u2.head(r) = u0;
    u2[r] = std::sqrt(std::max(0.0, resid_sq));
    return {std::move(U2), std::move(u2)};
  }
  return {std::move(U), std::move(u0)};
}

}  // namespace swiptsec
