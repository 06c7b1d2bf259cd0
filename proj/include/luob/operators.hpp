#pragma once

#include "luob/core.hpp"

#include <algorithm>
#include <random>
#include <utility>

namespace luob {

/// A normalized vector on a multipartite space.
struct PureStateVector {
  SpaceShape shape;
  Vector amplitudes;

  PureStateVector(SpaceShape s, Vector a, const Tolerances& tol = {})
      : shape(std::move(s)), amplitudes(std::move(a)) {
    if (amplitudes.size() != shape.total())
      throw ValidationError("PureStateVector: amplitude length != shape total");
    const double n = amplitudes.norm();
    if (std::abs(n - 1.0) > tol.norm)
      throw ValidationError("PureStateVector: not normalized (|norm-1| = " +
                            std::to_string(std::abs(n - 1.0)) + ")");
  }

  /// Reshape to a (prod of row-party dims) x (prod of rest) matrix, rows
  /// indexed by the given parties in declared order.
  Matrix reshape(const std::vector<int>& row_parties) const;
};

/// Semi-positive Hermitian operator on a multipartite space.
class HermitianOperator {
 public:
  HermitianOperator(SpaceShape shape, Matrix m, const Tolerances& tol = {})
      : shape_(std::move(shape)), m_(std::move(m)) {
    const int t = shape_.total();
    if (m_.rows() != t || m_.cols() != t)
      throw ValidationError("HermitianOperator: matrix is " +
                            std::to_string(m_.rows()) + "x" +
                            std::to_string(m_.cols()) + ", expected " +
                            std::to_string(t) + "x" + std::to_string(t));
    const double scale = std::max(1.0, detail::max_abs(m_));
    if (detail::max_abs(m_ - m_.adjoint()) > tol.herm * scale)
      throw ValidationError("HermitianOperator: matrix is not Hermitian");
    m_ = 0.5 * (m_ + m_.adjoint().eval());  // symmetrize away roundoff
  }

  const SpaceShape& shape() const { return shape_; }
  const Matrix& matrix() const { return m_; }
  Complex trace() const { return m_.trace(); }

 private:
  SpaceShape shape_;
  Matrix m_;
};

/// One unitary factor per party, applied as U_1 (x) ... (x) U_p.
class LocalUnitary {
 public:
  LocalUnitary(SpaceShape shape, std::vector<Matrix> factors,
               const Tolerances& tol = {})
      : shape_(std::move(shape)), factors_(std::move(factors)) {
    if (static_cast<int>(factors_.size()) != shape_.parties())
      throw ValidationError("LocalUnitary: factor count != party count");
    for (int p = 0; p < shape_.parties(); ++p) {
      const Matrix& u = factors_[p];
      const int d = shape_.dim(p);
      if (u.rows() != d || u.cols() != d)
        throw ValidationError("LocalUnitary: factor for party " +
                              SpaceShape::party_label(p) + " has wrong size");
      Matrix err = u.adjoint() * u - Matrix::Identity(d, d);
      if (detail::max_abs(err) > tol.unit)
        throw ValidationError("LocalUnitary: factor for party " +
                              SpaceShape::party_label(p) + " is not unitary");
    }
  }

  static LocalUnitary identity(const SpaceShape& shape) {
    std::vector<Matrix> fs;
    for (int p = 0; p < shape.parties(); ++p)
      fs.push_back(Matrix::Identity(shape.dim(p), shape.dim(p)));
    return LocalUnitary(shape, std::move(fs));
  }

  const SpaceShape& shape() const { return shape_; }
  const Matrix& factor(int party) const { return factors_.at(party); }

  /// Dense matrix of the full tensor product.
  Matrix full() const {
    Matrix out = Matrix::Identity(1, 1);
    for (const Matrix& f : factors_) {
      Matrix next(out.rows() * f.rows(), out.cols() * f.cols());
      for (Eigen::Index i = 0; i < out.rows(); ++i)
        for (Eigen::Index j = 0; j < out.cols(); ++j)
          next.block(i * f.rows(), j * f.cols(), f.rows(), f.cols()) =
              out(i, j) * f;
      out = std::move(next);
    }
    return out;
  }

 private:
  SpaceShape shape_;
  std::vector<Matrix> factors_;
};

/// Eigenpairs of a semi-positive operator, eigenvalues descending.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;   // all of them, descending
  Matrix eigenvectors;               // columns, same order
  int rank = 0;                      // count of eigenvalues above cutoff
};

inline Matrix PureStateVector::reshape(const std::vector<int>& row_parties) const {
  if (row_parties.empty())
    throw ValidationError("reshape: empty party list");
  std::vector<bool> is_row(shape.parties(), false);
  for (int p : row_parties) {
    if (p < 0 || p >= shape.parties())
      throw ValidationError("reshape: party index out of range");
    if (is_row[p]) throw ValidationError("reshape: repeated party index");
    is_row[p] = true;
  }
  int nrows = 1, ncols = 1;
  std::vector<int> rows, cols;
  for (int p = 0; p < shape.parties(); ++p) {
    if (is_row[p]) { nrows *= shape.dim(p); rows.push_back(p); }
    else           { ncols *= shape.dim(p); cols.push_back(p); }
  }
  Matrix out = Matrix::Zero(nrows, ncols);
  for (int idx = 0; idx < shape.total(); ++idx) {
    std::vector<int> multi = shape.unflatten(idx);
    int r = 0, c = 0;
    for (int p : rows) r = r * shape.dim(p) + multi[p];
    for (int p : cols) c = c * shape.dim(p) + multi[p];
    out(r, c) = amplitudes(idx);
  }
  return out;
}

/// Eigendecomposition of a semi-positive operator. Rejects operators whose
/// smallest eigenvalue is below -psd * max(1, largest eigenvalue).
inline SpectralDecomposition spectral_decompose(const HermitianOperator& h,
                                                const Tolerances& tol = {}) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix());
  if (es.info() != Eigen::Success)
    throw ValidationError("spectral_decompose: eigensolver failed");
  const int t = static_cast<int>(es.eigenvalues().size());
  SpectralDecomposition out;
  out.eigenvalues.resize(t);
  out.eigenvectors.resize(t, t);
  for (int i = 0; i < t; ++i) {  // Eigen sorts ascending; flip to descending
    out.eigenvalues[i] = es.eigenvalues()(t - 1 - i);
    out.eigenvectors.col(i) = es.eigenvectors().col(t - 1 - i);
  }
  const double lead = t ? std::max(1.0, out.eigenvalues.front()) : 1.0;
  if (t && out.eigenvalues.back() < -tol.psd * lead)
    throw ValidationError("spectral_decompose: operator is not semi-positive "
                          "(min eigenvalue " +
                          std::to_string(out.eigenvalues.back()) + ")");
  const double cutoff = tol.rank * (t ? std::max(out.eigenvalues.front(), 0.0) : 0.0);
  for (double ev : out.eigenvalues)
    if (ev > cutoff && ev > 0.0) ++out.rank;
  // sanity: reconstruction must close
  Matrix rec = Matrix::Zero(t, t);
  for (int i = 0; i < out.rank; ++i)
    rec += out.eigenvalues[i] * out.eigenvectors.col(i) *
           out.eigenvectors.col(i).adjoint();
  for (int i = out.rank; i < t; ++i)
    if (out.eigenvalues[i] > 0.0)
      rec += out.eigenvalues[i] * out.eigenvectors.col(i) *
             out.eigenvectors.col(i).adjoint();
  if (detail::max_abs(rec - h.matrix()) > tol.rec * std::max(1.0, detail::max_abs(h.matrix())))
    throw ValidationError("spectral_decompose: reconstruction residual too large");
  return out;
}

inline int operator_rank(const HermitianOperator& h, const Tolerances& tol = {}) {
  return spectral_decompose(h, tol).rank;
}

/// Build an operator from weighted pure states: sum_i w_i |psi_i><psi_i|.
inline HermitianOperator from_pure_states(const SpaceShape& shape,
                                          const std::vector<PureStateVector>& states,
                                          const std::vector<double>& weights,
                                          const Tolerances& tol = {}) {
  if (states.size() != weights.size())
    throw ValidationError("from_pure_states: state/weight count mismatch");
  Matrix m = Matrix::Zero(shape.total(), shape.total());
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].shape != shape)
      throw ValidationError("from_pure_states: state shape mismatch");
    if (weights[i] < 0.0)
      throw ValidationError("from_pure_states: negative weight");
    m += weights[i] * states[i].amplitudes * states[i].amplitudes.adjoint();
  }
  return HermitianOperator(shape, std::move(m), tol);
}

/// Schmidt rank of a pure state across rows=row_parties vs the rest.
inline int schmidt_rank(const PureStateVector& psi,
                        const std::vector<int>& row_parties,
                        const Tolerances& tol = {}) {
  return numeric_rank(psi.reshape(row_parties), tol.rank);
}

/// (U_1 (x) ... (x) U_p) H (U_1 (x) ... (x) U_p)^dagger.
inline HermitianOperator apply_local_unitary(const HermitianOperator& h,
                                             const LocalUnitary& u,
                                             const Tolerances& tol = {}) {
  if (u.shape() != h.shape())
    throw ValidationError("apply_local_unitary: shape mismatch");
  Matrix full = u.full();
  return HermitianOperator(h.shape(), full * h.matrix() * full.adjoint(), tol);
}

/// Convex mixture sum_i p_i U_i H U_i^dagger. Weights must be a probability
/// vector up to tol.prob.
inline HermitianOperator lu_mixture(const HermitianOperator& h,
                                    const std::vector<LocalUnitary>& us,
                                    const std::vector<double>& probs,
                                    const Tolerances& tol = {}) {
  if (us.size() != probs.size() || us.empty())
    throw ValidationError("lu_mixture: unitary/probability count mismatch");
  double total = 0.0;
  for (double p : probs) {
    if (p < -tol.prob) throw ValidationError("lu_mixture: negative probability");
    total += p;
  }
  if (std::abs(total - 1.0) > tol.prob)
    throw ValidationError("lu_mixture: probabilities sum to " + std::to_string(total));
  Matrix m = Matrix::Zero(h.shape().total(), h.shape().total());
  for (std::size_t i = 0; i < us.size(); ++i) {
    if (us[i].shape() != h.shape())
      throw ValidationError("lu_mixture: unitary shape mismatch");
    Matrix full = us[i].full();
    m += probs[i] * (full * h.matrix() * full.adjoint());
  }
  return HermitianOperator(h.shape(), std::move(m), tol);
}

/// Trace out every party except those listed; kept parties stay in declared
/// order, so the result lives on the corresponding sub-shape.
inline HermitianOperator partial_trace(const HermitianOperator& h,
                                       const std::vector<int>& keep,
                                       const Tolerances& tol = {}) {
  const SpaceShape& shape = h.shape();
  std::vector<bool> kept(shape.parties(), false);
  for (int p : keep) {
    if (p < 0 || p >= shape.parties())
      throw ValidationError("partial_trace: party index out of range");
    if (kept[p]) throw ValidationError("partial_trace: repeated party index");
    kept[p] = true;
  }
  std::vector<int> kept_parties, traced_parties, kept_dims;
  for (int p = 0; p < shape.parties(); ++p)
    (kept[p] ? kept_parties : traced_parties).push_back(p);
  if (kept_parties.empty())
    throw ValidationError("partial_trace: must keep at least one party");
  for (int p : kept_parties) kept_dims.push_back(shape.dim(p));
  SpaceShape out_shape(kept_dims);
  Matrix out = Matrix::Zero(out_shape.total(), out_shape.total());
  const int t = shape.total();
  for (int i = 0; i < t; ++i) {
    std::vector<int> mi = shape.unflatten(i);
    for (int j = 0; j < t; ++j) {
      std::vector<int> mj = shape.unflatten(j);
      bool diag = true;
      for (int p : traced_parties)
        if (mi[p] != mj[p]) { diag = false; break; }
      if (!diag) continue;
      int r = 0, c = 0;
      for (int p : kept_parties) {
        r = r * shape.dim(p) + mi[p];
        c = c * shape.dim(p) + mj[p];
      }
      out(r, c) += h.matrix()(i, j);
    }
  }
  return HermitianOperator(out_shape, std::move(out), tol);
}

/// Swap the two parties of a bipartite operator: S H S^dagger with S the
/// tensor-flip. Requires equal party dimensions.
inline HermitianOperator swap_conjugate(const HermitianOperator& h,
                                        const Tolerances& tol = {}) {
  const SpaceShape& shape = h.shape();
  if (shape.parties() != 2)
    throw ValidationError("swap_conjugate: operator is not bipartite");
  if (shape.dim(0) != shape.dim(1))
    throw ValidationError("swap_conjugate: party dimensions differ");
  const int d = shape.dim(0), t = shape.total();
  auto flip = [d](int idx) { return (idx % d) * d + idx / d; };
  Matrix out(t, t);
  for (int i = 0; i < t; ++i)
    for (int j = 0; j < t; ++j)
      out(flip(i), flip(j)) = h.matrix()(i, j);
  return HermitianOperator(shape, std::move(out), tol);
}

/// Haar-distributed local unitary: per party, QR of a complex Ginibre matrix
/// with the R diagonal's phases folded into Q.
inline LocalUnitary random_local_unitary(const SpaceShape& shape,
                                         std::uint64_t seed,
                                         const Tolerances& tol = {}) {
  std::vector<Matrix> factors;
  for (int p = 0; p < shape.parties(); ++p) {
    std::mt19937_64 rng(detail::mix_seed(seed, 0x10c0 + p));
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int d = shape.dim(p);
    Matrix g(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        g(i, j) = Complex(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < d; ++i) {
      Complex rii = r(i, i);
      Complex phase = std::abs(rii) > 0 ? rii / std::abs(rii) : Complex(1, 0);
      q.col(i) *= phase;
    }
    factors.push_back(std::move(q));
  }
  return LocalUnitary(shape, std::move(factors), tol);
}

/// Largest Schmidt rank (across row_parties vs rest) among normalized states
/// in the range of h: the range eigenbasis itself plus random combinations.
inline int max_schmidt_rank_in_range(const HermitianOperator& h,
                                     const std::vector<int>& row_parties,
                                     std::uint64_t seed,
                                     int random_combinations = 64,
                                     const Tolerances& tol = {}) {
  SpectralDecomposition sd = spectral_decompose(h, tol);
  if (sd.rank == 0) return 0;
  int best = 0;
  auto consider = [&](Vector v) {
    const double n = v.norm();
    if (n <= 0) return;
    PureStateVector psi(h.shape(), v / n, tol);
    best = std::max(best, schmidt_rank(psi, row_parties, tol));
  };
  for (int i = 0; i < sd.rank; ++i) consider(sd.eigenvectors.col(i));
  std::mt19937_64 rng(detail::mix_seed(seed, 0x5c4d));
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int c = 0; c < random_combinations; ++c) {
    Vector v = Vector::Zero(h.shape().total());
    for (int i = 0; i < sd.rank; ++i)
      v += Complex(gauss(rng), gauss(rng)) * sd.eigenvectors.col(i);
    consider(std::move(v));
  }
  return best;
}

}  // namespace luob
