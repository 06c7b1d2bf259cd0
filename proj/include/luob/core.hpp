#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace luob {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr const char* kVersion = "0.1.0";

/// Thrown on contract violations (bad shapes, malformed arguments).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown on file-level problems (missing, unreadable, malformed documents).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical thresholds used across the library. All relative unless noted.
struct Tolerances {
  double herm = 1e-10;    // Hermiticity of operator entries
  double unit = 1e-10;    // unitarity of local factors
  double orth = 1e-10;    // orthonormality of eigenvector sets
  double norm = 1e-12;    // state-vector normalization (absolute)
  double prob = 1e-12;    // mixture weights summing to 1 (absolute)
  double rec = 1e-9;      // spectral reconstruction residual
  double psd = 1e-9;      // min eigenvalue >= -psd * max eigenvalue
  double rank = 1e-9;     // singular value counts iff sigma > rank * sigma_max
  double coeff = 1e-12;   // polynomial coefficient pruning
  double member = 1e-7;   // locus membership residual on normalized minors
  double point = 1e-6;    // projective point dedup distance
  double factor = 1e-7;   // linear-factor division remainder
  double cubic = 1e-8;    // Hesse degeneracy: |g^3 - 27| at the moduli pole
  double moduli = 1e-6;   // moduli-value comparison
};

/// Dimensions of the parties of a tensor-product space, in declared order.
/// Basis layout is row-major interleaved: the flat index of |a_1 ... a_p> is
/// sum_i a_i * stride_i with stride_p = 1.
class SpaceShape {
 public:
  SpaceShape() = default;
  explicit SpaceShape(std::vector<int> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw ValidationError("SpaceShape: no parties");
    for (int d : dims_)
      if (d < 1) throw ValidationError("SpaceShape: party dimension < 1");
  }

  int parties() const { return static_cast<int>(dims_.size()); }
  int dim(int party) const { return dims_.at(party); }
  const std::vector<int>& dims() const { return dims_; }
  int total() const {
    return std::accumulate(dims_.begin(), dims_.end(), 1, std::multiplies<>());
  }

  int flatten(const std::vector<int>& multi) const {
    if (multi.size() != dims_.size())
      throw ValidationError("SpaceShape: multi-index arity mismatch");
    int idx = 0;
    for (std::size_t p = 0; p < dims_.size(); ++p) {
      if (multi[p] < 0 || multi[p] >= dims_[p])
        throw ValidationError("SpaceShape: multi-index out of range");
      idx = idx * dims_[p] + multi[p];
    }
    return idx;
  }

  std::vector<int> unflatten(int index) const {
    std::vector<int> multi(dims_.size());
    for (int p = parties() - 1; p >= 0; --p) {
      multi[p] = index % dims_[p];
      index /= dims_[p];
    }
    return multi;
  }

  bool operator==(const SpaceShape& other) const { return dims_ == other.dims_; }
  bool operator!=(const SpaceShape& other) const { return !(*this == other); }

  /// "A", "B", ... in declared order.
  static std::string party_label(int party) {
    std::string s;
    s.push_back(static_cast<char>('A' + party));
    return s;
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t p = 0; p < dims_.size(); ++p) {
      if (p) s += "x";
      s += std::to_string(dims_[p]);
    }
    return s;
  }

 private:
  std::vector<int> dims_;
};

/// Count of singular values above tau * sigma_max.
inline int numeric_rank(const Matrix& m, double tau) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) <= 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tau * sv(0)) ++r;
  return r;
}

namespace detail {

/// splitmix64; used to derive independent sub-seeds deterministically.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace detail

}  // namespace luob
