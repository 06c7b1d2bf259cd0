#pragma once

#include "luob/polynomial.hpp"

#include <optional>

namespace luob {

/// Classification of a plane cubic lying in the one-parameter family
///   x^3 + y^3 + z^3 - g * x*y*z.
/// The family parameter g is recovered up to a cube root of unity, which the
/// moduli value already quotients out (it depends on g^3 only). The cubic is
/// a union of three lines exactly when g^3 = 27, which is also where the
/// moduli map has its pole.
struct CubicClassification {
  Complex g{};
  bool degenerate = false;
  bool moduli_pole = false;
  std::optional<Complex> moduli;  // engaged for smooth members
};

/// Family parameter of the phase triple:
///   g = (e^{i eta1} + e^{i eta2} + e^{i eta3}) * e^{-i (eta1+eta2+eta3)/3}.
inline Complex hesse_parameter(double eta1, double eta2, double eta3) {
  auto phase = [](double t) { return Complex(std::cos(t), std::sin(t)); };
  return (phase(eta1) + phase(eta2) + phase(eta3)) *
         phase(-(eta1 + eta2 + eta3) / 3.0);
}

/// Moduli value k(g) = g^3 (g^3 + 216)^3 / (27 - g^3)^3, undefined (pole)
/// at g^3 = 27.
inline std::optional<Complex> hesse_moduli(Complex g, const Tolerances& tol = {}) {
  const Complex x3 = g * g * g;
  if (std::abs(x3 - 27.0) <= tol.cubic) return std::nullopt;
  const Complex num = x3 * std::pow(x3 + 216.0, 3.0);
  const Complex den = std::pow(27.0 - x3, 3.0);
  return num / den;
}

/// Match a homogeneous cubic in one 3-variable group against the family
/// above. Returns nothing when the support or coefficient pattern does not
/// fit (terms outside {x^3, y^3, z^3, xyz}, or cube coefficients of unequal
/// modulus) — such cubics are simply outside this classifier's scope.
inline std::optional<CubicClassification> classify_plane_cubic(
    const HomogeneousPolynomial& poly, const Tolerances& tol = {}) {
  if (poly.group_count() != 1 || poly.group_dims()[0] != 3) return std::nullopt;
  if (poly.is_zero() || poly.degree_in_group(0) != 3) return std::nullopt;
  const double top = poly.max_abs_coeff();
  Complex cube[3] = {};
  Complex mixed{};
  for (const auto& [e, c] : poly.terms()) {
    if (std::abs(c) <= 1e-9 * top) continue;
    if (e == HomogeneousPolynomial::Exponents{3, 0, 0}) cube[0] = c;
    else if (e == HomogeneousPolynomial::Exponents{0, 3, 0}) cube[1] = c;
    else if (e == HomogeneousPolynomial::Exponents{0, 0, 3}) cube[2] = c;
    else if (e == HomogeneousPolynomial::Exponents{1, 1, 1}) mixed = c;
    else return std::nullopt;  // off-family support
  }
  const double m0 = std::abs(cube[0]);
  if (m0 <= 1e-9 * top) return std::nullopt;
  for (int i = 1; i < 3; ++i)
    if (std::abs(std::abs(cube[i]) - m0) > 1e-6 * m0) return std::nullopt;

  CubicClassification out;
  // rescale variables so the cube terms become monic; xyz picks up the
  // inverse cube root of the coefficient product
  const Complex prod = cube[0] * cube[1] * cube[2];
  out.g = -mixed / std::pow(prod, 1.0 / 3.0);
  const Complex g3 = out.g * out.g * out.g;
  if (std::abs(g3 - 27.0) <= tol.cubic * std::max(1.0, std::abs(g3))) {
    out.degenerate = true;
    out.moduli_pole = true;
  } else {
    out.moduli = hesse_moduli(out.g, tol);
    if (!out.moduli) out.moduli_pole = true;
  }
  return out;
}

}  // namespace luob
