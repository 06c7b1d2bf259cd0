#pragma once

#include "luob/cubic.hpp"
#include "luob/pencil.hpp"

#include <optional>
#include <random>
#include <utility>

namespace luob {

/// Budget knobs for the randomized locus computations. Defaults are tuned
/// for the desk-scale spaces this library targets (party dimensions <= 4,
/// a handful of generating vectors).
struct SearchParams {
  int starts_per_chart = 60;      // Gauss-Newton starts per affine chart
  int max_iterations = 60;        // per start
  double residual_tol = 1e-11;    // convergence for normalized minors
  int dimension_trials = 3;       // random slices per codimension probe
  int degree_trials = 5;          // random lines for the degree vote
  int max_points = 96;            // extraction cap
  int stagnant_rounds = 3;        // extraction stops after this many empty rounds
  int line_fit_attempts = 8;      // random pencils tried per line factor
  double point_cluster_tol = 5e-4;  // resolution between distinct isolated points
};

struct DegreeEstimate {
  int distinct = 0;  // component-counting intersection number
  int weighted = 0;  // multiplicity-weighted intersection number
  bool operator==(const DegreeEstimate&) const = default;
};

struct LineComponent {
  LinearForm form;  // canonicalized
  int multiplicity = 1;
};

struct LineDecomposition {
  bool is_line_union = false;
  std::vector<LineComponent> components;  // engaged when is_line_union
};

/// Everything the comparison layer looks at about one locus. Optional fields
/// are absent when not applicable (or not computable) for the locus at hand;
/// two signatures are only compared field-by-field where both sides carry
/// the field.
struct LocusSignature {
  std::vector<int> ambient_dims;  // projective-space dims + 1, per group
  int k = 0;
  bool full_space = false;
  bool empty = false;
  std::optional<int> dimension;
  std::optional<DegreeEstimate> degree;
  std::optional<std::vector<ProjectivePoint>> points;              // dim 0
  std::optional<std::vector<std::pair<ProjectivePoint, int>>> point_mults;
  std::optional<LineDecomposition> lines;                          // plane curves
  std::optional<CubicClassification> cubic;                        // plane cubics
  std::uint64_t seed = 0;
};

/// The rank-degeneration locus of a pencil: points of the product of
/// projective spaces where the evaluated pencil has rank <= k. Carries the
/// symbolic minor ideal and its gradients for the numerical searches.
class DegeneratingLocus {
 public:
  static DegeneratingLocus from_pencil(LinearPencil pencil, int k,
                                       const Tolerances& tol = {}) {
    DegeneratingLocus L;
    L.pencil_ = std::move(pencil);
    L.k_ = k;
    L.tol_ = tol;
    if (k < 0) throw ValidationError("DegeneratingLocus: negative rank bound");
    if (L.pencil_.group_count() == 0) {
      // fully pinned pencil: membership is a single constant rank test
      L.constant_member_ = numeric_rank(L.pencil_.blocks.at(0), tol.rank) <= k;
      return L;
    }
    if (k >= std::min(L.pencil_.row_dim, L.pencil_.vector_count)) {
      L.full_space_ = true;
      return L;
    }
    L.minors_ = minor_ideal(L.pencil_, k, tol);
    if (L.minors_.empty()) {
      L.full_space_ = true;  // every minor vanishes identically
      return L;
    }
    const int nvars = L.minors_.front().variable_count();
    for (const auto& m : L.minors_) {
      std::vector<HomogeneousPolynomial> g;
      for (int v = 0; v < nvars; ++v) g.push_back(m.derivative(v));
      L.grads_.push_back(std::move(g));
    }
    return L;
  }

  /// Full ambient space with the given group dims (used for rank-0
  /// operators, whose pencil is empty).
  static DegeneratingLocus full(std::vector<int> group_dims, int k = 0) {
    DegeneratingLocus L;
    L.pencil_.group_dims = std::move(group_dims);
    L.pencil_.group_party.assign(L.pencil_.group_dims.size(), -1);
    L.k_ = k;
    L.full_space_ = true;
    return L;
  }

  const LinearPencil& pencil() const { return pencil_; }
  int k() const { return k_; }
  const Tolerances& tolerances() const { return tol_; }
  bool full_space() const { return full_space_; }
  bool constant() const { return constant_member_.has_value(); }
  bool constant_member() const { return constant_member_.value(); }
  const std::vector<HomogeneousPolynomial>& minors() const { return minors_; }
  bool hypersurface() const { return minors_.size() == 1; }
  const std::vector<int>& group_dims() const { return pencil_.group_dims; }
  int ambient_dimension() const {
    int d = 0;
    for (int n : pencil_.group_dims) d += n - 1;
    return d;
  }

  Complex minor_value(int i, const std::vector<Complex>& coords) const {
    return minors_[i].evaluate(coords);
  }
  Complex grad_value(int i, int var, const std::vector<Complex>& coords) const {
    return grads_[i][var].evaluate(coords);
  }

 private:
  LinearPencil pencil_;
  int k_ = 0;
  Tolerances tol_;
  bool full_space_ = false;
  std::optional<bool> constant_member_;
  std::vector<HomogeneousPolynomial> minors_;
  std::vector<std::vector<HomogeneousPolynomial>> grads_;
};

/// Locus of a semi-positive operator across a cut: pencil of a range basis,
/// rank bound k. A rank-0 operator degenerates everywhere by convention.
inline DegeneratingLocus make_locus(const HermitianOperator& h,
                                    const std::vector<int>& cut_parties,
                                    int k, const Tolerances& tol = {}) {
  std::vector<PureStateVector> basis = range_basis(h, tol);
  if (basis.empty()) {
    std::vector<int> dims;
    for (int p : cut_parties) dims.push_back(h.shape().dim(p));
    return DegeneratingLocus::full(std::move(dims), k);
  }
  return DegeneratingLocus::from_pencil(build_pencil(basis, cut_parties), k, tol);
}

/// Membership test: every normalized defining minor vanishes at the point
/// (evaluated at the canonical unit-tuple representative) within tol.member.
///
/// A relative numeric-rank test on the evaluated pencil would be wrong here:
/// wherever the whole pencil vanishes, a point off the locus by delta gives a
/// matrix delta * U whose singular-value ratios stay O(1) for every delta, so
/// the rank test rejects arbitrarily close approximations of a true locus
/// point. The minor residuals are continuous in the point and scale-free
/// (the minors are normalized to unit max coefficient), so they have no such
/// blind spot.
inline bool member(const DegeneratingLocus& locus, const ProjectivePoint& point,
                   const Tolerances& tol) {
  if (locus.full_space()) return true;
  if (locus.constant()) return locus.constant_member();
  std::vector<Complex> coords = point.flat();
  for (const auto& m : locus.minors())
    if (std::abs(m.evaluate(coords)) > tol.member) return false;
  return true;
}
inline bool member(const DegeneratingLocus& locus, const ProjectivePoint& point) {
  return member(locus, point, locus.tolerances());
}

namespace detail {

inline Vector random_tuple(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = Complex(gauss(rng), gauss(rng));
  return v;
}

inline Matrix random_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
  return m;
}

inline ProjectivePoint random_ambient_point(const std::vector<int>& dims,
                                            std::mt19937_64& rng) {
  std::vector<Vector> tuples;
  for (int d : dims) tuples.push_back(random_tuple(d, rng));
  return ProjectivePoint(std::move(tuples));
}

/// Coefficients of a one-group-dim-2 polynomial as a binary form,
/// index = exponent of the first variable.
inline std::vector<Complex> binary_form_coeffs(const HomogeneousPolynomial& p) {
  const int d = p.degree_in_group(0);
  std::vector<Complex> coeffs(d + 1, Complex(0, 0));
  for (const auto& [e, c] : p.terms()) coeffs.at(e[0]) += c;
  return coeffs;
}

/// Exact finite-point enumeration for loci on a single projective line:
/// roots of the first minor, kept when every minor vanishes there too.
inline std::vector<std::pair<ProjectivePoint, int>> enumerate_line_points(
    const DegeneratingLocus& locus) {
  std::vector<std::pair<ProjectivePoint, int>> out;
  auto roots = binary_form_roots(binary_form_coeffs(locus.minors().front()));
  if (!roots) return out;  // first minor vanishes identically — callers treat
                           // via the full-space path, which excludes this
  for (const BinaryRoot& r : *roots) {
    Vector v(2);
    v << r.alpha, r.beta;
    ProjectivePoint pt({v});
    if (member(locus, pt)) out.emplace_back(std::move(pt), r.multiplicity);
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

/// One affine chart of the product space: a fixed pivot coordinate per group.
struct Chart {
  std::vector<int> pivots;  // per group
};

inline std::vector<Chart> all_charts(const std::vector<int>& dims) {
  std::vector<Chart> charts{Chart{std::vector<int>(dims.size(), 0)}};
  for (std::size_t g = 0; g < dims.size(); ++g) {
    std::vector<Chart> next;
    for (const Chart& c : charts)
      for (int p = 0; p < dims[g]; ++p) {
        Chart cc = c;
        cc.pivots[g] = p;
        next.push_back(cc);
      }
    charts = std::move(next);
  }
  return charts;
}

/// Flat coordinates of a chart point: pivot coordinates pinned to 1, the
/// rest taken from w in order.
inline std::vector<Complex> chart_coords(const std::vector<int>& dims,
                                         const Chart& chart,
                                         const std::vector<Complex>& w) {
  std::vector<Complex> coords;
  std::size_t at = 0;
  for (std::size_t g = 0; g < dims.size(); ++g)
    for (int i = 0; i < dims[g]; ++i)
      coords.push_back(i == chart.pivots[g] ? Complex(1, 0) : w.at(at++));
  return coords;
}

inline std::vector<int> chart_free_vars(const std::vector<int>& dims,
                                        const Chart& chart) {
  std::vector<int> idx;
  int flat = 0;
  for (std::size_t g = 0; g < dims.size(); ++g)
    for (int i = 0; i < dims[g]; ++i, ++flat)
      if (i != chart.pivots[g]) idx.push_back(flat);
  return idx;
}

/// Gauss-Newton descent of sum |minor|^2 from one chart start. Returns the
/// located point when the residual converges to a zero of the system.
inline std::optional<ProjectivePoint> newton_start(
    const DegeneratingLocus& locus, const Chart& chart,
    std::vector<Complex> w, const SearchParams& params) {
  const std::vector<int>& dims = locus.group_dims();
  const std::vector<int> free_vars = chart_free_vars(dims, chart);
  const int m = static_cast<int>(locus.minors().size());
  const int d = static_cast<int>(free_vars.size());
  Vector f(m);
  auto fill_residual = [&](const std::vector<Complex>& coords) {
    for (int i = 0; i < m; ++i) f(i) = locus.minor_value(i, coords);
    return f.cwiseAbs().maxCoeff();
  };
  std::vector<Complex> coords = chart_coords(dims, chart, w);
  double res = fill_residual(coords);
  for (int it = 0; it < params.max_iterations && res > params.residual_tol; ++it) {
    Matrix jac(m, d);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < d; ++j)
        jac(i, j) = locus.grad_value(i, free_vars[j], coords);
    Eigen::JacobiSVD<Matrix> svd(jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-12);
    Vector step = svd.solve(-f);
    double f2 = f.squaredNorm();
    double scale = 1.0;
    std::vector<Complex> w_next(d);
    bool improved = false;
    for (int half = 0; half < 8; ++half, scale *= 0.5) {
      for (int j = 0; j < d; ++j) w_next[j] = w[j] + scale * step(j);
      std::vector<Complex> c_next = chart_coords(dims, chart, w_next);
      Vector f_save = f;
      double res_next = fill_residual(c_next);
      if (f.squaredNorm() < f2) {
        w = w_next;
        coords = std::move(c_next);
        res = res_next;
        improved = true;
        break;
      }
      f = f_save;
    }
    if (!improved) break;
    double wn = 0.0;
    for (const Complex& c : w) wn = std::max(wn, std::abs(c));
    if (wn > 1e7) return std::nullopt;  // escaping toward another chart
  }
  if (res > params.residual_tol) return std::nullopt;
  ProjectivePoint pt = ProjectivePoint::from_flat(dims, coords);
  if (!member(locus, pt)) return std::nullopt;
  return pt;
}

inline void dedup_insert(std::vector<ProjectivePoint>& points,
                         const ProjectivePoint& p, double tol) {
  for (const ProjectivePoint& q : points)
    if (q.approx_equal(p, tol)) return;
  points.push_back(p);
}

/// Mean of nearby canonical points: each member's tuples are phase-aligned
/// to the first member before tuple-wise averaging, and the result is
/// re-canonicalized. Cancels the symmetric part of the search scatter around
/// a multiple zero.
inline ProjectivePoint aligned_mean(const std::vector<ProjectivePoint>& members) {
  const ProjectivePoint& anchor = members.front();
  std::vector<Vector> sums;
  for (int g = 0; g < anchor.group_count(); ++g)
    sums.push_back(Vector::Zero(anchor.tuple(g).size()));
  for (const ProjectivePoint& p : members)
    for (int g = 0; g < anchor.group_count(); ++g) {
      Complex ip = anchor.tuple(g).dot(p.tuple(g));
      Complex phase = std::abs(ip) > 1e-12 ? ip / std::abs(ip) : Complex(1, 0);
      sums[g] += p.tuple(g) / phase;
    }
  return ProjectivePoint(std::move(sums));
}

/// Multistart sweep over every chart. on_point returns false to stop early.
template <typename Callback>
void multistart_sweep(const DegeneratingLocus& locus, const SearchParams& params,
                      std::uint64_t seed, Callback&& on_point) {
  const std::vector<int>& dims = locus.group_dims();
  const std::vector<Chart> charts = all_charts(dims);
  int free_total = 0;
  for (int n : dims) free_total += n - 1;
  std::mt19937_64 rng(mix_seed(seed, 0x5ee));
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int s = 0; s < params.starts_per_chart; ++s) {
    for (const Chart& chart : charts) {
      std::vector<Complex> w(free_total);
      for (Complex& c : w) c = Complex(gauss(rng), gauss(rng));
      auto hit = newton_start(locus, chart, std::move(w), params);
      if (hit && !on_point(*hit)) return;
    }
  }
}

}  // namespace detail

/// True when the randomized search finds no point of the locus. Exact (via
/// root enumeration) on a single projective line.
inline bool is_empty(const DegeneratingLocus& locus, const SearchParams& params,
                     std::uint64_t seed) {
  if (locus.full_space()) return false;
  if (locus.constant()) return !locus.constant_member();
  if (locus.group_dims() == std::vector<int>{2})
    return detail::enumerate_line_points(locus).empty();
  bool found = false;
  detail::multistart_sweep(locus, params, seed, [&](const ProjectivePoint&) {
    found = true;
    return false;
  });
  return !found;
}

/// Estimated dimension: greedy simultaneous slicing. Per group, the locus is
/// restricted to random linear subspaces of growing codimension; a
/// combination of codimensions is accepted when some random slice still
/// meets the locus, and the dimension is the largest accepted total. Returns
/// -1 for an empty locus.
inline int estimate_dimension(const DegeneratingLocus& locus,
                              const SearchParams& params, std::uint64_t seed) {
  if (locus.full_space()) return locus.ambient_dimension();
  if (locus.constant()) return locus.constant_member() ? 0 : -1;
  if (is_empty(locus, params, detail::mix_seed(seed, 0xd1))) return -1;
  const std::vector<int> dims = locus.group_dims();
  const int groups = static_cast<int>(dims.size());
  std::vector<int> codim(groups, 0);
  std::vector<bool> capped(groups, false);
  SearchParams inner = params;
  inner.starts_per_chart = std::max(24, params.starts_per_chart / 2);
  int trial_counter = 0;
  auto slice_nonempty = [&](const std::vector<int>& cd) {
    for (int t = 0; t < params.dimension_trials; ++t) {
      std::mt19937_64 rng(detail::mix_seed(seed, 0xd200 + 131 * ++trial_counter));
      LinearPencil restricted = locus.pencil();
      for (int g = groups - 1; g >= 0; --g) {
        if (cd[g] == 0) continue;
        Matrix w = detail::random_matrix(dims[g], dims[g] - cd[g], rng);
        restricted = transform_group(restricted, g, w);
      }
      DegeneratingLocus sliced = DegeneratingLocus::from_pencil(
          restricted, locus.k(), locus.tolerances());
      if (!is_empty(sliced, inner, detail::mix_seed(seed, 0xd300 + trial_counter)))
        return true;  // certified by an actual point
    }
    return false;
  };
  bool progress = true;
  while (progress) {
    progress = false;
    for (int g = 0; g < groups; ++g) {
      if (capped[g] || codim[g] >= dims[g] - 1) continue;
      std::vector<int> probe = codim;
      ++probe[g];
      if (slice_nonempty(probe)) {
        codim = probe;
        progress = true;
      } else {
        capped[g] = true;
      }
    }
  }
  int total = 0;
  for (int c : codim) total += c;
  return total;
}

namespace detail {

/// Points of the locus on the rational curve base + t * dir (flat
/// coordinates), found from the first minor's restriction and filtered by
/// the full system. Returns (t-root, point, multiplicity) triplets.
struct CurveCut {
  Complex t;
  bool at_infinity = false;
  ProjectivePoint point;
  int multiplicity = 1;
};

inline std::vector<CurveCut> cut_with_curve(const DegeneratingLocus& locus,
                                            const std::vector<Complex>& base,
                                            const std::vector<Complex>& dir) {
  std::vector<CurveCut> out;
  auto coeffs = locus.minors().front().restrict_to_curve(base, dir);
  auto roots = binary_form_roots(coeffs);
  if (!roots) return out;  // curve lies inside the first minor's zero set
  const std::vector<int> dims = locus.group_dims();
  for (const BinaryRoot& r : *roots) {
    std::vector<Complex> coords(base.size());
    bool infinity = std::abs(r.beta) <= 1e-9;
    Complex t{};
    if (infinity) {
      coords = dir;
    } else {
      t = r.alpha / r.beta;
      if (std::abs(t) > 1e8) { infinity = true; coords = dir; }
      else
        for (std::size_t i = 0; i < base.size(); ++i)
          coords[i] = base[i] + t * dir[i];
    }
    ProjectivePoint pt = ProjectivePoint::from_flat(dims, coords);
    if (member(locus, pt))
      out.push_back(CurveCut{t, infinity, std::move(pt), r.multiplicity});
  }
  return out;
}

}  // namespace detail

/// Degree estimate by intersection with random one-parameter curves, decided
/// by majority over several draws. distinct counts intersection points,
/// weighted adds their multiplicities. Intended for loci of dimension >= 1.
inline DegreeEstimate estimate_degree(const DegeneratingLocus& locus,
                                      const SearchParams& params,
                                      std::uint64_t seed) {
  if (locus.full_space() || locus.constant()) return DegreeEstimate{0, 0};
  std::vector<DegreeEstimate> votes;
  int nvars = locus.minors().front().variable_count();
  for (int t = 0; t < params.degree_trials; ++t) {
    std::mt19937_64 rng(detail::mix_seed(seed, 0xde6 + 17 * t));
    std::vector<Complex> base(nvars), dir(nvars);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (auto& c : base) c = Complex(gauss(rng), gauss(rng));
    for (auto& c : dir) c = Complex(gauss(rng), gauss(rng));
    auto cuts = detail::cut_with_curve(locus, base, dir);
    DegreeEstimate e;
    e.distinct = static_cast<int>(cuts.size());
    for (const auto& c : cuts) e.weighted += c.multiplicity;
    votes.push_back(e);
  }
  DegreeEstimate best{};
  int best_count = 0;
  for (const DegreeEstimate& v : votes) {
    int count = 0;
    for (const DegreeEstimate& w : votes)
      if (w == v) ++count;
    if (count > best_count) { best = v; best_count = count; }
  }
  return best;
}

/// All points of a zero-dimensional locus. Exact on a single projective
/// line; elsewhere a multistart search with fiber closure (each found
/// point's lines through the remaining groups are enumerated exactly when
/// they reduce to a single projective line).
inline std::vector<ProjectivePoint> extract_finite_points(
    const DegeneratingLocus& locus, const SearchParams& params,
    std::uint64_t seed) {
  if (locus.full_space() || locus.constant()) return {};
  const double ptol = locus.tolerances().point;
  if (locus.group_dims() == std::vector<int>{2}) {
    std::vector<ProjectivePoint> out;
    for (auto& [pt, mult] : detail::enumerate_line_points(locus))
      out.push_back(pt);
    return out;
  }
  // Search hits around a zero of multiplicity mu scatter within roughly
  // residual_tol^(1/(2 mu)) of the true point — far wider than the display
  // accuracy — so hits are grouped at point_cluster_tol and every group is
  // reported once, through its phase-aligned mean.
  std::vector<std::vector<ProjectivePoint>> clusters;
  int stagnant = 0;
  for (int round = 0; round < 12 && stagnant < params.stagnant_rounds; ++round) {
    const std::size_t before = clusters.size();
    detail::multistart_sweep(locus, params, detail::mix_seed(seed, 0xe0 + round),
                             [&](const ProjectivePoint& p) {
                               bool placed = false;
                               for (auto& c : clusters)
                                 if (c.front().approx_equal(
                                         p, params.point_cluster_tol)) {
                                   c.push_back(p);
                                   placed = true;
                                   break;
                                 }
                               if (!placed) clusters.push_back({p});
                               return clusters.size() <
                                      static_cast<std::size_t>(params.max_points);
                             });
    stagnant = clusters.size() == before ? stagnant + 1 : 0;
  }
  std::vector<ProjectivePoint> points;
  for (const auto& c : clusters) {
    ProjectivePoint rep = detail::aligned_mean(c);
    points.push_back(member(locus, rep) ? rep : c.front());
  }
  // fiber closure: pin all groups but one to a found point's tuples and
  // enumerate the remaining line exactly
  const std::vector<int> dims = locus.group_dims();
  if (dims.size() > 1) {
    std::vector<ProjectivePoint> snapshot = points;
    for (const ProjectivePoint& p : snapshot) {
      for (int g = static_cast<int>(dims.size()) - 1; g >= 0; --g) {
        if (dims[g] != 2) continue;
        LinearPencil restricted = locus.pencil();
        for (int h = static_cast<int>(dims.size()) - 1; h >= 0; --h) {
          if (h == g) continue;
          Matrix w(dims[h], 1);
          w.col(0) = p.tuple(h);
          restricted = transform_group(restricted, h, w);
        }
        DegeneratingLocus fiber = DegeneratingLocus::from_pencil(
            restricted, locus.k(), locus.tolerances());
        if (fiber.full_space() || fiber.constant()) continue;
        for (auto& [root, mult] : detail::enumerate_line_points(fiber)) {
          std::vector<Vector> tuples;
          for (int h = 0; h < static_cast<int>(dims.size()); ++h)
            tuples.push_back(h == g ? root.tuple(0) : p.tuple(h));
          ProjectivePoint candidate(std::move(tuples));
          if (!member(locus, candidate)) continue;
          // the exact fiber coordinates supersede a searched representative
          bool collided = false;
          for (ProjectivePoint& q : points)
            if (q.approx_equal(candidate, params.point_cluster_tol)) {
              q = candidate;
              collided = true;
              break;
            }
          if (!collided) points.push_back(candidate);
        }
      }
    }
  }
  std::vector<ProjectivePoint> unique;
  for (const ProjectivePoint& p : points) detail::dedup_insert(unique, p, ptol);
  std::sort(unique.begin(), unique.end());
  return unique;
}

/// Random points of the locus (for plotting and spot checks): exact root
/// enumeration along random curves for positive-dimensional loci, the
/// extracted points for zero-dimensional ones, random ambient points for the
/// full space.
inline std::vector<ProjectivePoint> sample_points(const DegeneratingLocus& locus,
                                                  int count,
                                                  const SearchParams& params,
                                                  std::uint64_t seed) {
  std::vector<ProjectivePoint> out;
  if (count <= 0) return out;
  std::mt19937_64 rng(detail::mix_seed(seed, 0x5a3));
  if (locus.full_space()) {
    for (int i = 0; i < count; ++i)
      out.push_back(detail::random_ambient_point(locus.group_dims(), rng));
    return out;
  }
  if (locus.constant()) return out;
  const int nvars = locus.minors().front().variable_count();
  const double ptol = std::max(locus.tolerances().point, 1e-8);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int draw = 0; draw < 40 * count && static_cast<int>(out.size()) < count;
       ++draw) {
    std::vector<Complex> base(nvars), dir(nvars);
    for (auto& c : base) c = Complex(gauss(rng), gauss(rng));
    for (auto& c : dir) c = Complex(gauss(rng), gauss(rng));
    for (auto& cut : detail::cut_with_curve(locus, base, dir)) {
      detail::dedup_insert(out, cut.point, ptol);
      if (static_cast<int>(out.size()) >= count) break;
    }
  }
  if (out.empty()) {
    // zero-dimensional loci are missed by random curves; fall back to the
    // extracted points (all distinct already), truncated to the request
    std::vector<ProjectivePoint> pts = extract_finite_points(locus, params, seed);
    for (const ProjectivePoint& p : pts) {
      if (static_cast<int>(out.size()) >= count) break;
      out.push_back(p);
    }
  }
  return out;
}

/// Decompose a plane-curve hypersurface into lines, when it is one. Line
/// candidates come from tracking root branches across a pencil of nearby
/// rational lines and fitting the tracked points; each candidate is
/// certified by polynomial division, so a engaged result is exact up to the
/// division tolerance. Returns the decomposition with is_line_union=false
/// when some irreducible factor of positive degree resists every candidate.
inline LineDecomposition detect_line_union(const DegeneratingLocus& locus,
                                           const SearchParams& params,
                                           std::uint64_t seed) {
  if (!locus.hypersurface() || locus.group_dims().size() != 1)
    throw ValidationError("detect_line_union: needs a one-group hypersurface");
  const int n = locus.group_dims()[0];
  const Tolerances& tol = locus.tolerances();
  LineDecomposition out;
  HomogeneousPolynomial rest = locus.minors().front();
  auto record = [&](const LinearForm& form) {
    for (LineComponent& c : out.components)
      if ((c.form.coefficients - form.coefficients).norm() < 1e-5) {
        ++c.multiplicity;
        return;
      }
    out.components.push_back(LineComponent{form, 1});
  };
  int guard = 0;
  while (rest.total_degree() > 0 && guard++ < 16) {
    bool extracted = false;
    for (int attempt = 0; attempt < params.line_fit_attempts && !extracted;
         ++attempt) {
      std::mt19937_64 rng(
          detail::mix_seed(seed, 0x11e + 1000 * guard + attempt));
      std::normal_distribution<double> gauss(0.0, 1.0);
      std::vector<Complex> base(n), dir(n), shift(n);
      for (auto& c : base) c = Complex(gauss(rng), gauss(rng));
      for (auto& c : dir) c = Complex(gauss(rng), gauss(rng));
      for (auto& c : shift) c = Complex(gauss(rng), gauss(rng));
      const double eps = 0.05;
      // three nearby parallel lines; matching nearest roots across them
      // walks each intersection branch, giving three points per branch
      std::vector<std::vector<Complex>> branch_ts;
      std::vector<std::vector<std::vector<Complex>>> branch_pts;
      bool ok = true;
      for (int s = 0; s < 3 && ok; ++s) {
        std::vector<Complex> b(n);
        for (int i = 0; i < n; ++i)
          b[i] = base[i] + static_cast<double>(s) * eps * shift[i];
        auto roots = detail::binary_form_roots(rest.restrict_to_curve(b, dir));
        if (!roots) { ok = false; break; }
        std::vector<Complex> ts;
        for (const auto& r : *roots) {
          if (std::abs(r.beta) <= 1e-9) continue;  // branch through infinity
          ts.push_back(r.alpha / r.beta);
        }
        if (s == 0) {
          for (Complex t : ts) {
            branch_ts.push_back({t});
            std::vector<Complex> pt(n);
            for (int i = 0; i < n; ++i) pt[i] = b[i] + t * dir[i];
            branch_pts.push_back({pt});
          }
        } else {
          for (std::size_t br = 0; br < branch_ts.size(); ++br) {
            if (branch_ts[br].size() != static_cast<std::size_t>(s)) continue;
            Complex prev = branch_ts[br].back();
            int nearest = -1;
            double dist = 1e300;
            for (std::size_t j = 0; j < ts.size(); ++j) {
              double dj = std::abs(ts[j] - prev);
              if (dj < dist) { dist = dj; nearest = static_cast<int>(j); }
            }
            if (nearest < 0 || dist > 0.5) continue;
            branch_ts[br].push_back(ts[nearest]);
            std::vector<Complex> pt(n);
            for (int i = 0; i < n; ++i)
              pt[i] = b[i] + ts[nearest] * dir[i];
            branch_pts[br].push_back(pt);
          }
        }
      }
      if (!ok) continue;
      for (const auto& pts : branch_pts) {
        if (pts.size() != 3) continue;
        Matrix p(3, n);
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < n; ++j) p(i, j) = pts[i][j];
        Eigen::JacobiSVD<Matrix> svd(p, Eigen::ComputeFullV);
        if (svd.singularValues()(n - 1) >
            1e-6 * svd.singularValues()(0))
          continue;  // tracked points are not collinear with a hyperplane
        LinearForm form = LinearForm{svd.matrixV().col(n - 1)}.canonicalized();
        auto quotient = divide_by_linear_form(rest, form, 0, tol.factor);
        if (!quotient) continue;
        record(form);
        rest = quotient->pruned(tol.coeff);
        extracted = true;
        break;
      }
    }
    if (!extracted) return out;  // leftover factor is not a hyperplane
  }
  out.is_line_union = rest.total_degree() == 0;
  if (!out.is_line_union) return out;
  std::sort(out.components.begin(), out.components.end(),
            [](const LineComponent& a, const LineComponent& b) {
              const Vector& x = a.form.coefficients;
              const Vector& y = b.form.coefficients;
              for (Eigen::Index i = 0; i < x.size(); ++i) {
                if (x(i).real() != y(i).real()) return x(i).real() < y(i).real();
                if (x(i).imag() != y(i).imag()) return x(i).imag() < y(i).imag();
              }
              return false;
            });
  return out;
}

/// Compute the comparison signature of a locus.
inline LocusSignature signature(const DegeneratingLocus& locus,
                                std::uint64_t seed,
                                const SearchParams& params = {}) {
  LocusSignature sig;
  sig.ambient_dims = locus.group_dims();
  sig.k = locus.k();
  sig.seed = seed;
  if (locus.full_space()) {
    sig.full_space = true;
    sig.dimension = locus.ambient_dimension();
    return sig;
  }
  if (is_empty(locus, params, detail::mix_seed(seed, 1))) {
    sig.empty = true;
    return sig;
  }
  sig.dimension = estimate_dimension(locus, params, detail::mix_seed(seed, 2));
  if (sig.dimension == 0) {
    if (locus.group_dims() == std::vector<int>{2}) {
      auto pts = detail::enumerate_line_points(locus);
      sig.points.emplace();
      sig.point_mults.emplace();
      DegreeEstimate deg;
      for (auto& [pt, mult] : pts) {
        sig.points->push_back(pt);
        sig.point_mults->emplace_back(pt, mult);
        ++deg.distinct;
        deg.weighted += mult;
      }
      sig.degree = deg;
    } else {
      sig.points = extract_finite_points(locus, params, detail::mix_seed(seed, 3));
      sig.degree = DegreeEstimate{static_cast<int>(sig.points->size()),
                                  static_cast<int>(sig.points->size())};
    }
    return sig;
  }
  sig.degree = estimate_degree(locus, params, detail::mix_seed(seed, 4));
  if (locus.hypersurface() && locus.group_dims() == std::vector<int>{3}) {
    sig.lines = detect_line_union(locus, params, detail::mix_seed(seed, 5));
    if (locus.minors().front().total_degree() == 3)
      sig.cubic = classify_plane_cubic(locus.minors().front(),
                                       locus.tolerances());
  }
  return sig;
}

/// Why two signatures certify different loci, or nothing when the computed
/// fields cannot tell them apart. Only genuinely projective-invariant fields
/// participate (emptiness, dimension, degrees, cardinalities, multiplicity
/// multisets, cubic class) — never coordinate values, which change under the
/// very transformations the comparison must be blind to. Fields are compared
/// only when present on both sides, so the answer is sound for inequality.
inline std::optional<std::string> distinguishing_field(
    const LocusSignature& a, const LocusSignature& b,
    const Tolerances& tol = {}) {
  if (a.ambient_dims != b.ambient_dims)
    throw ValidationError("distinguishing_field: ambient spaces differ");
  auto fmt = [](auto x) { return std::to_string(x); };
  if (a.empty != b.empty)
    return std::string("emptiness differs (") + (a.empty ? "empty" : "nonempty") +
           " vs " + (b.empty ? "empty" : "nonempty") + ")";
  if (a.empty && b.empty) return std::nullopt;
  if (a.dimension && b.dimension && *a.dimension != *b.dimension)
    return "dimension differs (" + fmt(*a.dimension) + " vs " + fmt(*b.dimension) + ")";
  if (a.points && b.points && a.points->size() != b.points->size())
    return "finite point count differs (" + fmt(a.points->size()) + " vs " +
           fmt(b.points->size()) + ")";
  if (a.degree && b.degree) {
    if (a.degree->distinct != b.degree->distinct)
      return "component-counting degree differs (" + fmt(a.degree->distinct) +
             " vs " + fmt(b.degree->distinct) + ")";
    if (a.degree->weighted != b.degree->weighted)
      return "multiplicity-weighted degree differs (" + fmt(a.degree->weighted) +
             " vs " + fmt(b.degree->weighted) + ")";
  }
  if (a.lines && b.lines && a.lines->is_line_union && b.lines->is_line_union) {
    if (a.lines->components.size() != b.lines->components.size())
      return "line component count differs (" + fmt(a.lines->components.size()) +
             " vs " + fmt(b.lines->components.size()) + ")";
    std::vector<int> ma, mb;
    for (const LineComponent& c : a.lines->components) ma.push_back(c.multiplicity);
    for (const LineComponent& c : b.lines->components) mb.push_back(c.multiplicity);
    std::sort(ma.begin(), ma.end());
    std::sort(mb.begin(), mb.end());
    if (ma != mb) return "line multiplicities differ";
  }
  if (a.cubic && b.cubic) {
    if (a.cubic->degenerate != b.cubic->degenerate)
      return std::string("cubic degeneracy differs (") +
             (a.cubic->degenerate ? "three lines" : "smooth") + " vs " +
             (b.cubic->degenerate ? "three lines" : "smooth") + ")";
    if (a.cubic->moduli && b.cubic->moduli) {
      const Complex ka = *a.cubic->moduli, kb = *b.cubic->moduli;
      const double scale = std::max({1.0, std::abs(ka), std::abs(kb)});
      if (std::abs(ka - kb) > tol.moduli * scale)
        return "cubic moduli value differs";
    }
  }
  return std::nullopt;
}

inline bool signatures_distinguish(const LocusSignature& a,
                                   const LocusSignature& b,
                                   const Tolerances& tol = {}) {
  return distinguishing_field(a, b, tol).has_value();
}

}  // namespace luob
