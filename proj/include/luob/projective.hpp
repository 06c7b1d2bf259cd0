#pragma once

#include "luob/core.hpp"
#include "luob/polynomial.hpp"

#include <utility>

namespace luob {

/// A point of a product of projective spaces: one homogeneous coordinate
/// tuple per factor. Stored canonicalized: each tuple has unit norm and its
/// first significant coordinate rotated onto the positive real axis, so equal
/// points compare entrywise.
class ProjectivePoint {
 public:
  ProjectivePoint(std::vector<Vector> tuples) : tuples_(std::move(tuples)) {
    if (tuples_.empty())
      throw ValidationError("ProjectivePoint: no coordinate tuples");
    for (Vector& v : tuples_) canonicalize(v);
  }

  static ProjectivePoint from_flat(const std::vector<int>& group_dims,
                                   const std::vector<Complex>& coords) {
    std::vector<Vector> tuples;
    std::size_t at = 0;
    for (int d : group_dims) {
      Vector v(d);
      for (int i = 0; i < d; ++i) v(i) = coords.at(at++);
      tuples.push_back(std::move(v));
    }
    if (at != coords.size())
      throw ValidationError("ProjectivePoint: flat coordinate arity mismatch");
    return ProjectivePoint(std::move(tuples));
  }

  int group_count() const { return static_cast<int>(tuples_.size()); }
  const Vector& tuple(int g) const { return tuples_.at(g); }
  std::vector<int> group_dims() const {
    std::vector<int> d;
    for (const Vector& v : tuples_) d.push_back(static_cast<int>(v.size()));
    return d;
  }

  std::vector<Complex> flat() const {
    std::vector<Complex> out;
    for (const Vector& v : tuples_)
      for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
  }

  /// Largest entrywise deviation across tuples (both already canonical).
  double distance(const ProjectivePoint& other) const {
    if (group_dims() != other.group_dims())
      throw ValidationError("ProjectivePoint::distance: shape mismatch");
    double d = 0.0;
    for (int g = 0; g < group_count(); ++g)
      d = std::max(d, (tuples_[g] - other.tuples_[g]).cwiseAbs().maxCoeff());
    return d;
  }

  bool approx_equal(const ProjectivePoint& other, double tol) const {
    return distance(other) <= tol;
  }

  /// Deterministic ordering (for stable report output).
  bool operator<(const ProjectivePoint& other) const {
    for (int g = 0; g < group_count(); ++g) {
      const Vector& a = tuples_[g];
      const Vector& b = other.tuples_[g];
      if (a.size() != b.size()) return a.size() < b.size();
      for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a(i).real() != b(i).real()) return a(i).real() < b(i).real();
        if (a(i).imag() != b(i).imag()) return a(i).imag() < b(i).imag();
      }
    }
    return false;
  }

  /// "(1:0)" for one group, "(1:1)x(0:1)" for products. Coordinates are
  /// rescaled so the last significant one reads 1 where that is clean.
  std::string to_string() const {
    std::string out;
    for (int g = 0; g < group_count(); ++g) {
      if (g) out += "x";
      out += "(";
      Vector v = tuples_[g];
      // display gauge: make the largest-magnitude coordinate exactly 1
      Eigen::Index piv = 0;
      for (Eigen::Index i = 1; i < v.size(); ++i)
        if (std::abs(v(i)) > std::abs(v(piv)) + 1e-12) piv = i;
      v /= v(piv);
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) out += ":";
        out += detail::format_complex(v(i));
      }
      out += ")";
    }
    return out;
  }

 private:
  static void canonicalize(Vector& v) {
    const double n = v.norm();
    if (!(n > 0))
      throw ValidationError("ProjectivePoint: zero coordinate tuple");
    v /= n;
    const double top = v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (std::abs(v(i)) >= 1e-4 * top) {
        v /= v(i) / std::abs(v(i));
        break;
      }
    }
  }

  std::vector<Vector> tuples_;
};

/// Convenience constructors for tests and fixtures.
inline ProjectivePoint make_point(std::initializer_list<Complex> coords) {
  Vector v(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index i = 0;
  for (Complex c : coords) v(i++) = c;
  return ProjectivePoint({v});
}

inline ProjectivePoint make_product_point(
    std::initializer_list<std::initializer_list<Complex>> groups) {
  std::vector<Vector> tuples;
  for (const auto& g : groups) {
    Vector v(static_cast<Eigen::Index>(g.size()));
    Eigen::Index i = 0;
    for (Complex c : g) v(i++) = c;
    tuples.push_back(std::move(v));
  }
  return ProjectivePoint(std::move(tuples));
}

}  // namespace luob
