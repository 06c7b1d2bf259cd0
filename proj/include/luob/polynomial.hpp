#pragma once

#include "luob/core.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <utility>

namespace luob {

/// Polynomial in one or more groups of variables, homogeneous within each
/// group. Exponent vectors are flat across groups: group g owns the slice
/// [offset(g), offset(g) + dim(g)). A default-constructed polynomial is the
/// zero polynomial on no variables.
class HomogeneousPolynomial {
 public:
  using Exponents = std::vector<int>;

  HomogeneousPolynomial() = default;
  explicit HomogeneousPolynomial(std::vector<int> group_dims)
      : group_dims_(std::move(group_dims)) {
    for (int d : group_dims_)
      if (d < 1) throw ValidationError("HomogeneousPolynomial: group dim < 1");
  }

  const std::vector<int>& group_dims() const { return group_dims_; }
  int group_count() const { return static_cast<int>(group_dims_.size()); }
  int variable_count() const {
    int n = 0;
    for (int d : group_dims_) n += d;
    return n;
  }
  int group_offset(int g) const {
    int off = 0;
    for (int i = 0; i < g; ++i) off += group_dims_[i];
    return off;
  }

  bool is_zero() const { return terms_.empty(); }
  const std::map<Exponents, Complex>& terms() const { return terms_; }

  void add_term(const Exponents& exps, Complex c) {
    if (static_cast<int>(exps.size()) != variable_count())
      throw ValidationError("add_term: exponent arity mismatch");
    Complex& slot = terms_[exps];
    slot += c;
    if (slot == Complex(0, 0)) terms_.erase(exps);
  }

  static HomogeneousPolynomial variable(std::vector<int> group_dims, int flat_index) {
    HomogeneousPolynomial p(std::move(group_dims));
    Exponents e(p.variable_count(), 0);
    e.at(flat_index) = 1;
    p.terms_[e] = Complex(1, 0);
    return p;
  }

  static HomogeneousPolynomial constant(std::vector<int> group_dims, Complex c) {
    HomogeneousPolynomial p(std::move(group_dims));
    if (c != Complex(0, 0)) p.terms_[Exponents(p.variable_count(), 0)] = c;
    return p;
  }

  /// Degree in the variables of group g (max over terms; 0 for the zero
  /// polynomial).
  int degree_in_group(int g) const {
    int off = group_offset(g), d = group_dims_.at(g), best = 0;
    for (const auto& [e, c] : terms_) {
      int deg = 0;
      for (int i = 0; i < d; ++i) deg += e[off + i];
      best = std::max(best, deg);
    }
    return best;
  }

  int total_degree() const {
    int best = 0;
    for (const auto& [e, c] : terms_)
      best = std::max(best, std::accumulate(e.begin(), e.end(), 0));
    return best;
  }

  double max_abs_coeff() const {
    double m = 0.0;
    for (const auto& [e, c] : terms_) m = std::max(m, std::abs(c));
    return m;
  }

  /// Drop terms smaller than tol relative to the largest coefficient.
  HomogeneousPolynomial pruned(double tol) const {
    HomogeneousPolynomial out(group_dims_);
    const double cut = tol * max_abs_coeff();
    for (const auto& [e, c] : terms_)
      if (std::abs(c) > cut) out.terms_[e] = c;
    return out;
  }

  HomogeneousPolynomial& operator+=(const HomogeneousPolynomial& o) {
    check_same_space(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  HomogeneousPolynomial& operator-=(const HomogeneousPolynomial& o) {
    check_same_space(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  HomogeneousPolynomial& operator*=(Complex s) {
    if (s == Complex(0, 0)) { terms_.clear(); return *this; }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }

  friend HomogeneousPolynomial operator+(HomogeneousPolynomial a,
                                         const HomogeneousPolynomial& b) {
    a += b; return a;
  }
  friend HomogeneousPolynomial operator-(HomogeneousPolynomial a,
                                         const HomogeneousPolynomial& b) {
    a -= b; return a;
  }
  friend HomogeneousPolynomial operator*(HomogeneousPolynomial a, Complex s) {
    a *= s; return a;
  }
  friend HomogeneousPolynomial operator*(Complex s, HomogeneousPolynomial a) {
    a *= s; return a;
  }

  friend HomogeneousPolynomial operator*(const HomogeneousPolynomial& a,
                                         const HomogeneousPolynomial& b) {
    a.check_same_space(b);
    HomogeneousPolynomial out(a.group_dims_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Exponents e(ea.size());
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
        out.add_term(e, ca * cb);
      }
    return out;
  }

  /// Partial derivative with respect to the flat variable index.
  HomogeneousPolynomial derivative(int flat_index) const {
    HomogeneousPolynomial out(group_dims_);
    for (const auto& [e, c] : terms_) {
      if (e[flat_index] == 0) continue;
      Exponents d = e;
      --d[flat_index];
      out.add_term(d, c * static_cast<double>(e[flat_index]));
    }
    return out;
  }

  /// Evaluate at flat coordinates (length == variable_count()).
  Complex evaluate(const std::vector<Complex>& coords) const {
    if (static_cast<int>(coords.size()) != variable_count())
      throw ValidationError("evaluate: coordinate arity mismatch");
    Complex sum(0, 0);
    for (const auto& [e, c] : terms_) {
      Complex term = c;
      for (std::size_t i = 0; i < e.size(); ++i)
        for (int k = 0; k < e[i]; ++k) term *= coords[i];
      sum += term;
    }
    return sum;
  }

  /// Coefficients of p(base + t * dir) as a univariate polynomial in t,
  /// index = power of t. Computed by evaluation at roots of unity followed by
  /// an inverse discrete Fourier sum, which is exact for polynomial data.
  std::vector<Complex> restrict_to_curve(const std::vector<Complex>& base,
                                         const std::vector<Complex>& dir) const {
    const int deg = total_degree();
    const int n = deg + 1;
    std::vector<Complex> values(n);
    std::vector<Complex> coords(variable_count());
    for (int j = 0; j < n; ++j) {
      const double ang = 2.0 * M_PI * j / n;
      const Complex t(std::cos(ang), std::sin(ang));
      for (int i = 0; i < variable_count(); ++i) coords[i] = base[i] + t * dir[i];
      values[j] = evaluate(coords);
    }
    std::vector<Complex> coeffs(n);
    for (int k = 0; k < n; ++k) {
      Complex sum(0, 0);
      for (int j = 0; j < n; ++j) {
        const double ang = -2.0 * M_PI * j * k / n;
        sum += values[j] * Complex(std::cos(ang), std::sin(ang));
      }
      coeffs[k] = sum / static_cast<double>(n);
    }
    return coeffs;
  }

  /// Render with the given per-variable names, coefficients to 6 significant
  /// digits, real coefficients shown without an imaginary part.
  std::string to_string(const std::vector<std::string>& var_names) const;

 private:
  void check_same_space(const HomogeneousPolynomial& o) const {
    if (group_dims_ != o.group_dims_)
      throw ValidationError("polynomial arithmetic: variable groups differ");
  }

  std::vector<int> group_dims_;
  std::map<Exponents, Complex> terms_;
};

/// Linear form a . x in the variables of one group (the one it was built on).
struct LinearForm {
  Vector coefficients;

  /// Scale to unit norm and rotate the first significant coefficient to the
  /// positive real axis, giving a canonical representative.
  LinearForm canonicalized(double support_floor = 1e-4) const {
    Vector v = coefficients;
    const double n = v.norm();
    if (n <= 0) throw ValidationError("LinearForm: zero form");
    v /= n;
    const double top = v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (std::abs(v(i)) >= support_floor * top) {
        Complex phase = v(i) / std::abs(v(i));
        v /= phase;
        break;
      }
    }
    return LinearForm{v};
  }

  std::string to_string(const std::vector<std::string>& var_names) const;
};

/// One root of a binary form, as a projective pair with multiplicity.
struct BinaryRoot {
  Complex alpha;  // coordinates (alpha : beta), normalized
  Complex beta;
  int multiplicity = 1;
};

namespace detail {

inline std::string format_real(double x) {
  if (std::abs(x) < 5e-7) x = 0.0;  // suppress sign noise on rendered zeros
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

inline std::string format_complex(Complex z) {
  const double re = z.real(), im = z.imag();
  if (std::abs(im) < 5e-7) return format_real(re);
  if (std::abs(re) < 5e-7)
    return format_real(im) + "i";
  return "(" + format_real(re) + (im >= 0 ? "+" : "") + format_real(im) + "i)";
}

/// Roots in the projective line of sum_i c_i alpha^i beta^(d-i), d = degree,
/// via a companion-matrix eigenproblem plus explicit roots at (0:1)/(1:0)
/// from trimmed leading and trailing coefficients. Near-coincident roots are
/// clustered to recover multiplicities. Returns nothing for the (near-)zero
/// form; callers treat that case as the whole line.
// The cluster radius must absorb the eigenvalue scatter of a multiplicity-m
// root, which grows like machine_eps^(1/m): ~1.2e-4 already at m = 4. The
// default therefore assumes genuinely distinct roots are farther apart than
// 5e-4 in the chordal metric.
inline std::optional<std::vector<BinaryRoot>> binary_form_roots(
    const std::vector<Complex>& coeffs, double trim_tol = 1e-10,
    double cluster_tol = 5e-4) {
  const int d = static_cast<int>(coeffs.size()) - 1;
  if (d < 0) return std::nullopt;
  double top = 0.0;
  for (const Complex& c : coeffs) top = std::max(top, std::abs(c));
  if (top <= 0.0) return std::nullopt;
  int lo = 0, hi = d;
  while (lo <= d && std::abs(coeffs[lo]) <= trim_tol * top) ++lo;
  while (hi >= 0 && std::abs(coeffs[hi]) <= trim_tol * top) --hi;
  if (lo > hi) return std::nullopt;  // numerically zero

  std::vector<std::pair<Complex, Complex>> raw;  // (alpha, beta) unit pairs
  for (int i = 0; i < lo; ++i) raw.emplace_back(Complex(0, 0), Complex(1, 0));
  for (int i = hi; i < d; ++i) raw.emplace_back(Complex(1, 0), Complex(0, 0));
  const int q_deg = hi - lo;
  if (q_deg > 0) {
    Matrix companion = Matrix::Zero(q_deg, q_deg);
    for (int i = 0; i < q_deg - 1; ++i) companion(i + 1, i) = 1.0;
    for (int i = 0; i < q_deg; ++i)
      companion(i, q_deg - 1) = -coeffs[lo + i] / coeffs[hi];
    Eigen::ComplexEigenSolver<Matrix> es(companion);
    if (es.info() != Eigen::Success)
      throw ValidationError("binary_form_roots: eigensolver failed");
    for (int i = 0; i < q_deg; ++i) {
      Complex a = es.eigenvalues()(i);
      double s = std::sqrt(1.0 + std::norm(a));
      raw.emplace_back(a / s, Complex(1, 0) / s);
    }
  }

  // Deterministic greedy clustering in the chordal metric.
  std::sort(raw.begin(), raw.end(), [](const auto& x, const auto& y) {
    auto key = [](const std::pair<Complex, Complex>& p) {
      Complex ratio = std::abs(p.second) > 1e-12 ? p.first / p.second
                                                 : Complex(1e300, 0);
      return std::make_tuple(std::abs(ratio), ratio.real(), ratio.imag());
    };
    return key(x) < key(y);
  });
  auto chordal = [](const std::pair<Complex, Complex>& x,
                    const std::pair<Complex, Complex>& y) {
    return std::abs(x.first * y.second - x.second * y.first);
  };
  std::vector<std::vector<std::pair<Complex, Complex>>> clusters;
  for (const auto& r : raw) {
    bool placed = false;
    for (auto& cl : clusters)
      if (chordal(cl.front(), r) < cluster_tol) { cl.push_back(r); placed = true; break; }
    if (!placed) clusters.push_back({r});
  }

  std::vector<BinaryRoot> out;
  for (const auto& cl : clusters) {
    Complex a(0, 0), b(0, 0);
    Complex ref_a = cl.front().first, ref_b = cl.front().second;
    for (const auto& [ca, cb] : cl) {
      // align phases before averaging so the mean stays on the point
      Complex overlap = std::conj(ref_a) * ca + std::conj(ref_b) * cb;
      Complex phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : Complex(1, 0);
      a += ca / phase;
      b += cb / phase;
    }
    double s = std::sqrt(std::norm(a) + std::norm(b));
    BinaryRoot root{a / s, b / s, static_cast<int>(cl.size())};
    // polish simple roots with a few Newton steps in the finite chart
    if (root.multiplicity == 1 && std::abs(root.beta) > 1e-8) {
      Complex x = root.alpha / root.beta;
      for (int it = 0; it < 4; ++it) {
        Complex p(0, 0), dp(0, 0), xp(1, 0);
        for (int i = 0; i <= d; ++i) {
          p += coeffs[i] * xp;
          if (i < d) dp += coeffs[i + 1] * static_cast<double>(i + 1) * xp;
          xp *= x;
        }
        if (std::abs(dp) < 1e-14) break;
        x -= p / dp;
      }
      double s2 = std::sqrt(1.0 + std::norm(x));
      root.alpha = x / s2;
      root.beta = Complex(1, 0) / s2;
    }
    out.push_back(root);
  }
  return out;
}

}  // namespace detail

inline std::string HomogeneousPolynomial::to_string(
    const std::vector<std::string>& var_names) const {
  if (terms_.empty()) return "0";
  if (static_cast<int>(var_names.size()) != variable_count())
    throw ValidationError("to_string: variable name arity mismatch");
  // highest-degree-first within the map's deterministic order
  std::vector<std::pair<Exponents, Complex>> items(terms_.begin(), terms_.end());
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    return std::lexicographical_compare(b.first.begin(), b.first.end(),
                                        a.first.begin(), a.first.end());
  });
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : items) {
    Complex coeff = c;
    std::string sign = " + ";
    if (std::abs(coeff.imag()) < 5e-7 * std::abs(coeff) && coeff.real() < 0) {
      sign = " - ";
      coeff = -coeff;
    }
    if (!first) os << sign;
    else if (sign == " - ") os << "-";
    first = false;
    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += var_names[i];
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    const bool unit = std::abs(coeff - Complex(1, 0)) < 5e-7;
    if (mono.empty()) {
      os << detail::format_complex(coeff);
    } else if (unit) {
      os << mono;
    } else {
      os << detail::format_complex(coeff) << "*" << mono;
    }
  }
  return os.str();
}

inline std::string LinearForm::to_string(
    const std::vector<std::string>& var_names) const {
  if (static_cast<int>(var_names.size()) != coefficients.size())
    throw ValidationError("LinearForm::to_string: name arity mismatch");
  HomogeneousPolynomial p({static_cast<int>(coefficients.size())});
  for (Eigen::Index i = 0; i < coefficients.size(); ++i) {
    if (std::abs(coefficients(i)) < 5e-7) continue;
    HomogeneousPolynomial::Exponents e(coefficients.size(), 0);
    e[i] = 1;
    p.add_term(e, coefficients(i));
  }
  return p.to_string(var_names);
}

/// Divide p by a linear form in the variables of group g. Returns the
/// quotient when the remainder is below tol relative to p's largest
/// coefficient, otherwise nothing.
inline std::optional<HomogeneousPolynomial> divide_by_linear_form(
    const HomogeneousPolynomial& p, const LinearForm& form, int group,
    double tol) {
  if (p.is_zero()) return HomogeneousPolynomial(p.group_dims());
  const int off = p.group_offset(group);
  const int dim = p.group_dims().at(group);
  if (form.coefficients.size() != dim)
    throw ValidationError("divide_by_linear_form: form arity mismatch");
  int pivot = 0;
  for (int i = 1; i < dim; ++i)
    if (std::abs(form.coefficients(i)) > std::abs(form.coefficients(pivot)))
      pivot = i;
  const Complex lead = form.coefficients(pivot);
  if (std::abs(lead) <= 0)
    throw ValidationError("divide_by_linear_form: zero form");

  HomogeneousPolynomial rem = p;
  HomogeneousPolynomial quo(p.group_dims());
  // Eliminate the pivot variable term by term, highest pivot power first.
  while (true) {
    const HomogeneousPolynomial::Exponents* found = nullptr;
    Complex best_c;
    for (const auto& [e, c] : rem.terms()) {
      if (e[off + pivot] == 0) continue;
      if (!found || e[off + pivot] > (*found)[off + pivot] ||
          (e[off + pivot] == (*found)[off + pivot] && e > *found)) {
        found = &e;
        best_c = c;
      }
    }
    if (!found) break;
    const HomogeneousPolynomial::Exponents best = *found;
    HomogeneousPolynomial::Exponents qe = best;
    --qe[off + pivot];
    const Complex qc = best_c / lead;
    quo.add_term(qe, qc);
    rem.add_term(best, -best_c);  // cancels exactly, so the loop terminates
    for (int i = 0; i < dim; ++i) {
      if (i == pivot || form.coefficients(i) == Complex(0, 0)) continue;
      HomogeneousPolynomial::Exponents e = qe;
      ++e[off + i];
      rem.add_term(e, -qc * form.coefficients(i));
    }
  }
  if (rem.max_abs_coeff() > tol * std::max(1.0, p.max_abs_coeff()))
    return std::nullopt;
  return quo;
}

}  // namespace luob
