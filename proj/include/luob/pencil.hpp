#pragma once

#include "luob/operators.hpp"
#include "luob/polynomial.hpp"
#include "luob/projective.hpp"

#include <functional>
#include <utility>

namespace luob {

/// Linear pencil of a generating family: the matrix-valued multilinear map
///   M(r) = sum_a (prod_p r^(p)[a_p]) * block[a],
/// where a runs over joint basis labels of the cut parties and each block is
/// (complement dimension) x (vector count). Blocks are stored row-major in
/// the cut-party multi-index, matching SpaceShape's flattening.
struct LinearPencil {
  std::vector<int> group_dims;    // per cut party, in declared order
  std::vector<int> group_party;   // original party index per group
  int row_dim = 0;                // complement dimension
  int vector_count = 0;
  std::vector<Matrix> blocks;

  int group_count() const { return static_cast<int>(group_dims.size()); }
  int block_count() const {
    int n = 1;
    for (int d : group_dims) n *= d;
    return n;
  }
  std::vector<int> block_multi(int index) const {
    std::vector<int> multi(group_dims.size());
    for (int g = group_count() - 1; g >= 0; --g) {
      multi[g] = index % group_dims[g];
      index /= group_dims[g];
    }
    return multi;
  }
};

/// Orthonormal generating family spanning the range of h (eigenvectors of the
/// positive eigenvalues).
inline std::vector<PureStateVector> range_basis(const HermitianOperator& h,
                                                const Tolerances& tol = {}) {
  SpectralDecomposition sd = spectral_decompose(h, tol);
  std::vector<PureStateVector> out;
  for (int i = 0; i < sd.rank; ++i)
    out.emplace_back(h.shape(), sd.eigenvectors.col(i), tol);
  return out;
}

/// Build the pencil of a generating family across the given cut.
inline LinearPencil build_pencil(const std::vector<PureStateVector>& vectors,
                                 const std::vector<int>& cut_parties) {
  if (vectors.empty())
    throw ValidationError("build_pencil: no generating vectors");
  const SpaceShape& shape = vectors.front().shape;
  for (const PureStateVector& v : vectors)
    if (v.shape != shape)
      throw ValidationError("build_pencil: generating vectors on different spaces");
  std::vector<bool> in_cut(shape.parties(), false);
  for (int p : cut_parties) {
    if (p < 0 || p >= shape.parties())
      throw ValidationError("build_pencil: cut party out of range");
    if (in_cut[p]) throw ValidationError("build_pencil: repeated cut party");
    in_cut[p] = true;
  }
  LinearPencil pencil;
  int comp_dim = 1;
  for (int p = 0; p < shape.parties(); ++p) {
    if (in_cut[p]) {
      if (shape.dim(p) < 2)
        throw ValidationError("build_pencil: cut party " +
                              SpaceShape::party_label(p) + " has dimension < 2");
      pencil.group_dims.push_back(shape.dim(p));
      pencil.group_party.push_back(p);
    } else {
      comp_dim *= shape.dim(p);
    }
  }
  if (pencil.group_dims.empty())
    throw ValidationError("build_pencil: empty cut");
  if (static_cast<int>(pencil.group_dims.size()) == shape.parties())
    throw ValidationError("build_pencil: cut must be a proper subset of the parties");
  pencil.row_dim = comp_dim;
  pencil.vector_count = static_cast<int>(vectors.size());
  const int nblocks = pencil.block_count();
  pencil.blocks.assign(nblocks, Matrix::Zero(comp_dim, pencil.vector_count));
  std::vector<int> sorted_cut = pencil.group_party;
  for (int i = 0; i < pencil.vector_count; ++i) {
    Matrix resh = vectors[i].reshape(sorted_cut);  // (cut index a) x (complement l)
    for (int a = 0; a < nblocks; ++a)
      pencil.blocks[a].col(i) = resh.row(a).transpose();
  }
  return pencil;
}

/// Evaluate the pencil at a point of the product of projective spaces.
inline Matrix evaluate_pencil(const LinearPencil& pencil,
                              const ProjectivePoint& point) {
  if (point.group_dims() != pencil.group_dims)
    throw ValidationError("evaluate_pencil: point shape mismatch");
  Matrix m = Matrix::Zero(pencil.row_dim, pencil.vector_count);
  for (int a = 0; a < pencil.block_count(); ++a) {
    std::vector<int> multi = pencil.block_multi(a);
    Complex w(1, 0);
    for (int g = 0; g < pencil.group_count(); ++g) w *= point.tuple(g)(multi[g]);
    if (w != Complex(0, 0)) m += w * pencil.blocks[a];
  }
  return m;
}

/// Evaluated pencil at flat chart coordinates (no projective normalization).
inline Matrix evaluate_pencil_flat(const LinearPencil& pencil,
                                   const std::vector<Complex>& coords) {
  Matrix m = Matrix::Zero(pencil.row_dim, pencil.vector_count);
  std::vector<int> offsets(pencil.group_count());
  int off = 0;
  for (int g = 0; g < pencil.group_count(); ++g) {
    offsets[g] = off;
    off += pencil.group_dims[g];
  }
  if (static_cast<int>(coords.size()) != off)
    throw ValidationError("evaluate_pencil_flat: coordinate arity mismatch");
  for (int a = 0; a < pencil.block_count(); ++a) {
    std::vector<int> multi = pencil.block_multi(a);
    Complex w(1, 0);
    for (int g = 0; g < pencil.group_count(); ++g)
      w *= coords[offsets[g] + multi[g]];
    if (w != Complex(0, 0)) m += w * pencil.blocks[a];
  }
  return m;
}

namespace detail {

/// Symbolic entry (row, col) of the evaluated pencil as a multilinear
/// polynomial in the group variables.
inline HomogeneousPolynomial pencil_entry_poly(const LinearPencil& pencil,
                                               int row, int col) {
  HomogeneousPolynomial p(pencil.group_dims);
  const int nvars = p.variable_count();
  for (int a = 0; a < pencil.block_count(); ++a) {
    const Complex c = pencil.blocks[a](row, col);
    if (c == Complex(0, 0)) continue;
    std::vector<int> multi = pencil.block_multi(a);
    HomogeneousPolynomial::Exponents e(nvars, 0);
    for (int g = 0; g < pencil.group_count(); ++g)
      e[p.group_offset(g) + multi[g]] = 1;
    p.add_term(e, c);
  }
  return p;
}

inline HomogeneousPolynomial symbolic_det(
    const std::vector<std::vector<HomogeneousPolynomial>>& m) {
  const int n = static_cast<int>(m.size());
  if (n == 1) return m[0][0];
  HomogeneousPolynomial det;
  for (int j = 0; j < n; ++j) {
    if (m[0][j].is_zero()) continue;
    std::vector<std::vector<HomogeneousPolynomial>> sub;
    sub.reserve(n - 1);
    for (int i = 1; i < n; ++i) {
      std::vector<HomogeneousPolynomial> row;
      row.reserve(n - 1);
      for (int jj = 0; jj < n; ++jj)
        if (jj != j) row.push_back(m[i][jj]);
      sub.push_back(std::move(row));
    }
    HomogeneousPolynomial term = m[0][j] * symbolic_det(sub);
    if (j % 2) term *= Complex(-1, 0);
    if (det.group_count() == 0) det = std::move(term);
    else det += term;
  }
  if (det.group_count() == 0 && !m.empty())
    det = HomogeneousPolynomial(m[0][0].group_dims());
  return det;
}

inline void subsets_of_size(int n, int k, std::vector<std::vector<int>>& out) {
  std::vector<int> cur(k);
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == k) { out.push_back(cur); return; }
    for (int i = start; i <= n - (k - depth); ++i) {
      cur[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  if (k >= 0 && k <= n) rec(0, 0);
}

}  // namespace detail

/// All (k+1) x (k+1) minors of the symbolic pencil, each normalized to unit
/// largest coefficient and pruned. Minors that vanish identically are
/// dropped; the list is empty when every minor vanishes, in which case the
/// rank condition holds everywhere. Asking for minors larger than the matrix
/// is an error; that regime is the caller's full-space convention.
inline std::vector<HomogeneousPolynomial> minor_ideal(const LinearPencil& pencil,
                                                      int k,
                                                      const Tolerances& tol = {}) {
  if (k < 0) throw ValidationError("minor_ideal: negative rank bound");
  const int size = k + 1;
  std::vector<HomogeneousPolynomial> out;
  if (size > pencil.row_dim || size > pencil.vector_count)
    throw ValidationError(
        "minor_ideal: rank bound " + std::to_string(k) + " admits no " +
        std::to_string(size) + "x" + std::to_string(size) + " minors in a " +
        std::to_string(pencil.row_dim) + "x" +
        std::to_string(pencil.vector_count) + " pencil");
  // absolute floor for "identically zero", relative to the block scale
  double scale = 0.0;
  for (const Matrix& b : pencil.blocks) scale = std::max(scale, detail::max_abs(b));
  const double zero_floor = tol.coeff * std::max(1.0, std::pow(scale, size));
  std::vector<std::vector<int>> row_sets, col_sets;
  detail::subsets_of_size(pencil.row_dim, size, row_sets);
  detail::subsets_of_size(pencil.vector_count, size, col_sets);
  for (const auto& rows : row_sets) {
    for (const auto& cols : col_sets) {
      std::vector<std::vector<HomogeneousPolynomial>> sub(size);
      for (int i = 0; i < size; ++i)
        for (int j = 0; j < size; ++j)
          sub[i].push_back(detail::pencil_entry_poly(pencil, rows[i], cols[j]));
      HomogeneousPolynomial det = detail::symbolic_det(sub);
      const double top = det.max_abs_coeff();
      if (top <= zero_floor) continue;
      det *= Complex(1.0 / top, 0);
      out.push_back(det.pruned(tol.coeff));
    }
  }
  return out;
}

/// Substitute r_g = W t_g for one group: t_g becomes a new variable tuple of
/// dimension W.cols(). A single-column W pins the group to a point and the
/// group disappears from the result; with every group pinned the pencil is
/// constant (blocks reduced to one matrix, no variables left).
inline LinearPencil transform_group(const LinearPencil& pencil, int group,
                                    const Matrix& w) {
  if (group < 0 || group >= pencil.group_count())
    throw ValidationError("transform_group: group out of range");
  if (w.rows() != pencil.group_dims[group] || w.cols() < 1 ||
      w.cols() > w.rows())
    throw ValidationError("transform_group: substitution matrix has bad shape");
  LinearPencil out;
  out.group_dims = pencil.group_dims;
  out.group_party = pencil.group_party;
  out.group_dims[group] = static_cast<int>(w.cols());
  out.row_dim = pencil.row_dim;
  out.vector_count = pencil.vector_count;
  out.blocks.assign(out.block_count(),
                    Matrix::Zero(pencil.row_dim, pencil.vector_count));
  for (int a = 0; a < pencil.block_count(); ++a) {
    std::vector<int> multi = pencil.block_multi(a);
    const int old_g = multi[group];
    for (int new_g = 0; new_g < out.group_dims[group]; ++new_g) {
      const Complex c = w(old_g, new_g);
      if (c == Complex(0, 0)) continue;
      std::vector<int> target = multi;
      target[group] = new_g;
      int idx = 0;
      for (int g = 0; g < out.group_count(); ++g)
        idx = idx * out.group_dims[g] + target[g];
      out.blocks[idx] += c * pencil.blocks[a];
    }
  }
  if (out.group_dims[group] == 1) {
    out.group_dims.erase(out.group_dims.begin() + group);
    out.group_party.erase(out.group_party.begin() + group);
  }
  return out;
}

}  // namespace luob
