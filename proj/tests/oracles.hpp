#pragma once

// Independent cross-checks for the tests. Everything here recomputes its
// quantity through a different route than the library code it is used to
// check: dense grids and direct SVDs instead of symbolic minors, stacked
// generator matrices instead of spectral decompositions, ratio tests
// instead of coefficient comparisons.

#include "luob/luob.hpp"

#include <Eigen/Dense>

#include <random>
#include <vector>

namespace oracle {

using luob::Complex;
using luob::Matrix;
using luob::Vector;

/// Singular values of the pencil evaluated at a point, descending.
inline Eigen::VectorXd singular_values(const luob::LinearPencil& pencil,
                                       const luob::ProjectivePoint& pt) {
  Matrix m = luob::evaluate_pencil(pencil, pt);
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues();
}

/// Rank of the evaluated pencil by a relative SVD cutoff — the numeric
/// counterpart of the symbolic membership test.
inline int rank_at(const luob::LinearPencil& pencil,
                   const luob::ProjectivePoint& pt, double rank_tol) {
  Eigen::VectorXd s = singular_values(pencil, pt);
  if (s.size() == 0 || s(0) <= 0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rank_tol * s(0)) ++r;
  return r;
}

/// Unit CP^1 representatives (1, z) for z on an n x n grid over
/// [-radius, radius]^2, plus the flipped chart (z, 1) to cover the far cap
/// and the point at infinity.
inline std::vector<Vector> cp1_grid(int n, double radius) {
  std::vector<Vector> out;
  out.reserve(2 * n * n);
  for (int chart = 0; chart < 2; ++chart)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double re = -radius + 2.0 * radius * i / (n - 1);
        const double im = -radius + 2.0 * radius * j / (n - 1);
        Vector v(2);
        if (chart == 0)
          v << Complex(1, 0), Complex(re, im);
        else
          v << Complex(re, im), Complex(1, 0);
        out.push_back(v / v.norm());
      }
  return out;
}

/// Rank of the matrix whose columns are sqrt(weight) * generator — equals
/// the operator rank of sum_i w_i |v_i><v_i| without any eigensolve.
inline int stacked_rank(const std::vector<luob::PureStateVector>& states,
                        const std::vector<double>& weights, double rank_tol) {
  if (states.empty()) return 0;
  const int n = static_cast<int>(states.front().amplitudes.size());
  Matrix m(n, static_cast<int>(states.size()));
  for (std::size_t j = 0; j < states.size(); ++j)
    m.col(static_cast<int>(j)) = std::sqrt(weights[j]) * states[j].amplitudes;
  Eigen::JacobiSVD<Matrix> svd(m);
  Eigen::VectorXd s = svd.singularValues();
  if (s.size() == 0 || s(0) <= 0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rank_tol * s(0)) ++r;
  return r;
}

/// Schmidt rank by direct reshape + SVD.
inline int schmidt_rank_direct(const luob::PureStateVector& psi,
                               const std::vector<int>& row_parties,
                               double rank_tol) {
  Matrix m = psi.reshape(row_parties);
  Eigen::JacobiSVD<Matrix> svd(m);
  Eigen::VectorXd s = svd.singularValues();
  if (s.size() == 0 || s(0) <= 0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rank_tol * s(0)) ++r;
  return r;
}

/// Largest relative deviation of det(M(x)) / p(x) from its value at the
/// first sample, over random points x. For a hypersurface locus the single
/// minor must be the determinant up to one global constant, so the ratio is
/// constant wherever it is well defined.
inline double det_ratio_deviation(const luob::LinearPencil& pencil,
                                  const luob::HomogeneousPolynomial& p,
                                  int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Complex ref(0, 0);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    std::vector<Vector> tuples;
    for (int d : pencil.group_dims) {
      Vector v(d);
      for (int i = 0; i < d; ++i) v(i) = Complex(gauss(rng), gauss(rng));
      tuples.push_back(v);
    }
    luob::ProjectivePoint pt(std::move(tuples));
    Matrix m = luob::evaluate_pencil(pencil, pt);
    if (m.rows() != m.cols()) throw luob::ValidationError("det oracle: not square");
    Complex det = m.determinant();
    Complex val = p.evaluate(pt.flat());
    if (std::abs(val) < 1e-10) continue;  // too close to the locus to divide
    Complex ratio = det / val;
    if (t == 0 || std::abs(ref) == 0.0) {
      ref = ratio;
      continue;
    }
    worst = std::max(worst, std::abs(ratio - ref) / std::abs(ref));
  }
  return worst;
}

/// Random canonical point of a product of projective spaces.
inline luob::ProjectivePoint random_point(const std::vector<int>& dims,
                                          std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Vector> tuples;
  for (int d : dims) {
    Vector v(d);
    for (int i = 0; i < d; ++i) v(i) = Complex(gauss(rng), gauss(rng));
    tuples.push_back(v);
  }
  return luob::ProjectivePoint(std::move(tuples));
}

/// Largest membership residual of a point set: max over points of the
/// largest normalized-minor magnitude.
inline double worst_residual(const luob::DegeneratingLocus& locus,
                             const std::vector<luob::ProjectivePoint>& pts) {
  double worst = 0.0;
  for (const luob::ProjectivePoint& p : pts) {
    std::vector<Complex> coords = p.flat();
    for (const auto& m : locus.minors())
      worst = std::max(worst, std::abs(m.evaluate(coords)));
  }
  return worst;
}

}  // namespace oracle
