#include "luob/cubic.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

using namespace luob;

namespace {

// x^3 + y^3 + z^3 - g xyz, optionally scaled by a global constant
HomogeneousPolynomial family_cubic(Complex g, Complex scale = Complex(1, 0)) {
  HomogeneousPolynomial p({3});
  p.add_term({3, 0, 0}, scale);
  p.add_term({0, 3, 0}, scale);
  p.add_term({0, 0, 3}, scale);
  if (g != Complex(0, 0)) p.add_term({1, 1, 1}, -g * scale);
  return p;
}

constexpr double kFrozenModuli = -452.732097303207;  // -9938375 / 21952

}  // namespace

TEST_CASE("hesse_parameter hits the degenerate corner exactly", "[cubic]") {
  REQUIRE(std::abs(hesse_parameter(0, 0, 0) - Complex(3, 0)) < 1e-12);

  const Complex expect(std::cos(M_PI / 3.0), -std::sin(M_PI / 3.0));
  REQUIRE(std::abs(hesse_parameter(0, 0, M_PI) - expect) < 1e-12);
}

TEST_CASE("hesse_parameter is invariant under common shifts and permutations",
          "[cubic]") {
  const double e1 = 0.4, e2 = -1.1, e3 = 2.3;
  const Complex base = hesse_parameter(e1, e2, e3);
  for (double c : {0.7, -2.0, 3.1}) {
    REQUIRE(std::abs(hesse_parameter(e1 + c, e2 + c, e3 + c) - base) < 1e-12);
  }
  REQUIRE(std::abs(hesse_parameter(e2, e3, e1) - base) < 1e-12);
  REQUIRE(std::abs(hesse_parameter(e3, e1, e2) - base) < 1e-12);
}

TEST_CASE("hesse_moduli frozen values and cube-root symmetry", "[cubic]") {
  REQUIRE_FALSE(hesse_moduli(Complex(3, 0)).has_value());  // the pole

  auto fermat = hesse_moduli(Complex(0, 0));
  REQUIRE(fermat.has_value());
  REQUIRE(std::abs(*fermat) < 1e-14);

  const Complex g(std::cos(M_PI / 3.0), -std::sin(M_PI / 3.0));
  auto frozen = hesse_moduli(g);
  REQUIRE(frozen.has_value());
  REQUIRE(std::abs(*frozen - Complex(kFrozenModuli, 0)) <
          1e-9 * std::abs(kFrozenModuli));

  // k depends on g^3 only, so multiplying g by a cube root of unity is silent
  const Complex omega(-0.5, std::sqrt(3.0) / 2.0);
  const Complex g2(1.3, 0.4);
  auto a = hesse_moduli(g2);
  auto b = hesse_moduli(omega * g2);
  REQUIRE(a.has_value());
  REQUIRE(b.has_value());
  REQUIRE(std::abs(*a - *b) < 1e-9 * std::max(1.0, std::abs(*a)));
}

TEST_CASE("classify_plane_cubic recognizes family members", "[cubic]") {
  auto fermat = classify_plane_cubic(family_cubic(Complex(0, 0)));
  REQUIRE(fermat.has_value());
  REQUIRE_FALSE(fermat->degenerate);
  REQUIRE(fermat->moduli.has_value());
  REQUIRE(std::abs(*fermat->moduli) < 1e-9);

  auto triangle = classify_plane_cubic(family_cubic(Complex(3, 0)));
  REQUIRE(triangle.has_value());
  REQUIRE(triangle->degenerate);
  REQUIRE(triangle->moduli_pole);
  REQUIRE_FALSE(triangle->moduli.has_value());

  // degenerate at every cube root: g = 3 * omega
  const Complex omega(-0.5, std::sqrt(3.0) / 2.0);
  auto rotated = classify_plane_cubic(family_cubic(3.0 * omega));
  REQUIRE(rotated.has_value());
  REQUIRE(rotated->degenerate);

  const Complex g(1.0, 0.5);
  auto smooth = classify_plane_cubic(family_cubic(g));
  REQUIRE(smooth.has_value());
  REQUIRE_FALSE(smooth->degenerate);
  REQUIRE(smooth->moduli.has_value());
  REQUIRE(std::abs(*smooth->moduli - *hesse_moduli(g)) <
          1e-8 * std::max(1.0, std::abs(*hesse_moduli(g))));
}

TEST_CASE("classification is projective: global scale changes nothing",
          "[cubic]") {
  const Complex g(0.8, -1.1);
  auto plain = classify_plane_cubic(family_cubic(g));
  auto scaled = classify_plane_cubic(family_cubic(g, Complex(0, 2.7)));
  REQUIRE(plain.has_value());
  REQUIRE(scaled.has_value());
  REQUIRE(plain->degenerate == scaled->degenerate);
  REQUIRE(plain->moduli.has_value());
  REQUIRE(scaled->moduli.has_value());
  // g itself is only defined up to a cube root of unity; the moduli value
  // is the well-defined invariant
  REQUIRE(std::abs(*plain->moduli - *scaled->moduli) <
          1e-8 * std::max(1.0, std::abs(*plain->moduli)));
}

TEST_CASE("classify_plane_cubic declines off-family input", "[cubic]") {
  // extra monomial outside the family support
  HomogeneousPolynomial off = family_cubic(Complex(1, 0));
  off.add_term({2, 1, 0}, Complex(0.5, 0));
  REQUIRE_FALSE(classify_plane_cubic(off).has_value());

  // missing cube term
  HomogeneousPolynomial missing({3});
  missing.add_term({3, 0, 0}, Complex(1, 0));
  missing.add_term({0, 3, 0}, Complex(1, 0));
  REQUIRE_FALSE(classify_plane_cubic(missing).has_value());

  // unequal cube magnitudes
  HomogeneousPolynomial uneven = family_cubic(Complex(1, 0));
  uneven.add_term({3, 0, 0}, Complex(0.4, 0));
  REQUIRE_FALSE(classify_plane_cubic(uneven).has_value());

  // wrong arity or degree
  HomogeneousPolynomial quadratic({3});
  quadratic.add_term({2, 0, 0}, Complex(1, 0));
  REQUIRE_FALSE(classify_plane_cubic(quadratic).has_value());
  HomogeneousPolynomial twovars({2});
  twovars.add_term({3, 0}, Complex(1, 0));
  REQUIRE_FALSE(classify_plane_cubic(twovars).has_value());
  REQUIRE_FALSE(classify_plane_cubic(HomogeneousPolynomial({3})).has_value());
}
