#include "luob/pencil.hpp"
#include "luob/fixtures.hpp"
#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace luob;

namespace {

PureStateVector make_state(const SpaceShape& shape, const Vector& v) {
  return PureStateVector(shape, v / v.norm());
}

std::vector<PureStateVector> random_states(const SpaceShape& shape, int count,
                                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<PureStateVector> out;
  for (int i = 0; i < count; ++i) {
    Vector v(shape.total());
    for (int j = 0; j < shape.total(); ++j)
      v(j) = Complex(gauss(rng), gauss(rng));
    out.push_back(make_state(shape, v));
  }
  return out;
}

}  // namespace

TEST_CASE("build_pencil lays out blocks by cut index", "[pencil]") {
  SpaceShape shape({2, 2});
  const double s = 1.0 / std::sqrt(2.0);
  Vector bell(4);
  bell << s, 0, 0, s;
  LinearPencil p = build_pencil({make_state(shape, bell)}, {0});

  REQUIRE(p.group_dims == std::vector<int>{2});
  REQUIRE(p.group_party == std::vector<int>{0});
  REQUIRE(p.row_dim == 2);
  REQUIRE(p.vector_count == 1);
  REQUIRE(p.blocks.size() == 2);
  // block a: the B-side component of <a_A | bell>
  REQUIRE(std::abs(p.blocks[0](0, 0) - Complex(s, 0)) < 1e-14);
  REQUIRE(std::abs(p.blocks[0](1, 0)) < 1e-14);
  REQUIRE(std::abs(p.blocks[1](0, 0)) < 1e-14);
  REQUIRE(std::abs(p.blocks[1](1, 0) - Complex(s, 0)) < 1e-14);
}

TEST_CASE("build_pencil on a two-party cut of GHZ", "[pencil]") {
  SpaceShape shape({2, 2, 2});
  const double s = 1.0 / std::sqrt(2.0);
  Vector ghz = Vector::Zero(8);
  ghz(0) = s;
  ghz(7) = s;
  LinearPencil p = build_pencil({make_state(shape, ghz)}, {0, 1});

  REQUIRE(p.group_dims == (std::vector<int>{2, 2}));
  REQUIRE(p.row_dim == 2);
  REQUIRE(p.block_count() == 4);
  // only the (0,0) and (1,1) blocks carry weight
  REQUIRE(std::abs(p.blocks[0](0, 0) - Complex(s, 0)) < 1e-14);
  REQUIRE(std::abs(p.blocks[3](1, 0) - Complex(s, 0)) < 1e-14);
  REQUIRE(p.blocks[1].cwiseAbs().maxCoeff() < 1e-14);
  REQUIRE(p.blocks[2].cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("build_pencil validates its inputs", "[pencil]") {
  SpaceShape shape({2, 2});
  std::vector<PureStateVector> states = random_states(shape, 1, 3);
  REQUIRE_THROWS_AS(build_pencil({}, {0}), ValidationError);
  REQUIRE_THROWS_AS(build_pencil(states, {2}), ValidationError);
  REQUIRE_THROWS_AS(build_pencil(states, {0, 0}), ValidationError);
  REQUIRE_THROWS_AS(build_pencil(states, {}), ValidationError);
  REQUIRE_THROWS_AS(build_pencil(states, {0, 1}), ValidationError);

  SpaceShape mixed({2, 3});
  std::vector<PureStateVector> other = random_states(mixed, 1, 4);
  REQUIRE_THROWS_AS(build_pencil({states[0], other[0]}, {0}), ValidationError);
}

TEST_CASE("evaluate_pencil sums blocks with point coordinates", "[pencil]") {
  SpaceShape shape({2, 2});
  LinearPencil p = build_pencil(random_states(shape, 2, 9), {0});

  std::vector<Complex> coords = {Complex(0.3, -0.2), Complex(1.1, 0.7)};
  Matrix direct = coords[0] * p.blocks[0] + coords[1] * p.blocks[1];
  Matrix flat = evaluate_pencil_flat(p, coords);
  REQUIRE((direct - flat).cwiseAbs().maxCoeff() < 1e-13);

  // the projective evaluation agrees after canonicalization
  Vector t(2);
  t << coords[0], coords[1];
  ProjectivePoint pt({t});
  Matrix proj = evaluate_pencil(p, pt);
  Matrix expect = pt.tuple(0)(0) * p.blocks[0] + pt.tuple(0)(1) * p.blocks[1];
  REQUIRE((proj - expect).cwiseAbs().maxCoeff() < 1e-13);

  REQUIRE_THROWS_AS(evaluate_pencil_flat(p, {Complex(1, 0)}), ValidationError);
}

TEST_CASE("transform_group composes with evaluation", "[pencil]") {
  SpaceShape shape({3, 3});
  LinearPencil p = build_pencil(random_states(shape, 3, 21), {0});
  std::mt19937_64 rng(22);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix w(3, 2);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 2; ++j) w(i, j) = Complex(gauss(rng), gauss(rng));
  LinearPencil q = transform_group(p, 0, w);
  REQUIRE(q.group_dims == std::vector<int>{2});

  for (int t = 0; t < 10; ++t) {
    Vector y(2);
    y << Complex(gauss(rng), gauss(rng)), Complex(gauss(rng), gauss(rng));
    Vector x = w * y;
    Matrix lhs = evaluate_pencil_flat(q, {y(0), y(1)});
    Matrix rhs = evaluate_pencil_flat(p, {x(0), x(1), x(2)});
    REQUIRE((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
  }

  REQUIRE_THROWS_AS(transform_group(p, 1, w), ValidationError);
  REQUIRE_THROWS_AS(transform_group(p, 0, Matrix::Identity(2, 2)),
                    ValidationError);
  REQUIRE_THROWS_AS(transform_group(p, 0, Matrix::Zero(3, 4)), ValidationError);
}

TEST_CASE("range_basis spans the operator range orthonormally", "[pencil]") {
  HermitianOperator h = fixtures::bell_operator({1, 3});
  std::vector<PureStateVector> basis = range_basis(h);
  REQUIRE(basis.size() == 2);
  REQUIRE(std::abs(basis[0].amplitudes.norm() - 1.0) < 1e-12);
  REQUIRE(std::abs(basis[0].amplitudes.dot(basis[1].amplitudes)) < 1e-10);

  // H acts invariantly on its range: H b must stay inside span(basis)
  for (const PureStateVector& b : basis) {
    Vector hb = h.matrix() * b.amplitudes;
    Vector proj = Vector::Zero(4);
    for (const PureStateVector& c : basis)
      proj += c.amplitudes.dot(hb) * c.amplitudes;
    REQUIRE((hb - proj).norm() < 1e-10);
  }
}

TEST_CASE("symbolic entries and determinant match the numeric pencil",
          "[pencil]") {
  SpaceShape shape({2, 2});
  const double s = 1.0 / std::sqrt(2.0);
  Vector b1(4), b3(4);
  b1 << s, 0, 0, s;
  b3 << 0, s, s, 0;
  LinearPencil p =
      build_pencil({make_state(shape, b1), make_state(shape, b3)}, {0});

  // entry polynomials evaluate to the matching matrix entry
  std::mt19937_64 rng(31);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Complex> coords = {Complex(gauss(rng), gauss(rng)),
                                 Complex(gauss(rng), gauss(rng))};
  Matrix m = evaluate_pencil_flat(p, coords);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      HomogeneousPolynomial e = detail::pencil_entry_poly(p, r, c);
      REQUIRE(std::abs(e.evaluate(coords) - m(r, c)) < 1e-13);
    }

  // M(a) = [[a0, a1], [a1, a0]] / sqrt(2): determinant is (a0^2 - a1^2)/2
  std::vector<std::vector<HomogeneousPolynomial>> grid(2);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      grid[r].push_back(detail::pencil_entry_poly(p, r, c));
  HomogeneousPolynomial det = detail::symbolic_det(grid);
  REQUIRE(std::abs(det.evaluate(coords) - m.determinant()) < 1e-13);
}

TEST_CASE("minor_ideal normalizes, counts, and guards its rank bound",
          "[pencil]") {
  SpaceShape shape({2, 2});
  const double s = 1.0 / std::sqrt(2.0);
  Vector b1(4), b3(4);
  b1 << s, 0, 0, s;
  b3 << 0, s, s, 0;
  LinearPencil p =
      build_pencil({make_state(shape, b1), make_state(shape, b3)}, {0});

  std::vector<HomogeneousPolynomial> minors = minor_ideal(p, 1);
  REQUIRE(minors.size() == 1);
  REQUIRE(minors[0].total_degree() == 2);
  REQUIRE(minors[0].max_abs_coeff() == Catch::Approx(1.0).epsilon(1e-12));
  // det proportional to a0^2 - a1^2: equal magnitude, opposite sign
  HomogeneousPolynomial::Exponents sq0 = {2, 0}, sq1 = {0, 2};
  REQUIRE(minors[0].terms().count(sq0) == 1);
  REQUIRE(minors[0].terms().count(sq1) == 1);
  Complex c0 = minors[0].terms().at(sq0), c1 = minors[0].terms().at(sq1);
  REQUIRE(std::abs(c0 + c1) < 1e-12);
  REQUIRE(std::abs(std::abs(c0) - 1.0) < 1e-12);

  // 3x3 pencil in 3 variables: k=1 gives all nine 2x2 minors, each of
  // degree 2 in the single group
  SpaceShape big({3, 3});
  LinearPencil q = build_pencil(random_states(big, 3, 8), {0});
  std::vector<HomogeneousPolynomial> nine = minor_ideal(q, 1);
  REQUIRE(nine.size() == 9);
  for (const auto& mm : nine) {
    REQUIRE(mm.degree_in_group(0) == 2);
    REQUIRE(mm.max_abs_coeff() == Catch::Approx(1.0).epsilon(1e-12));
  }

  REQUIRE_THROWS_AS(minor_ideal(p, 2), ValidationError);
  REQUIRE_THROWS_AS(minor_ideal(p, -1), ValidationError);
}

TEST_CASE("hypersurface minor is the determinant up to one constant",
          "[pencil]") {
  HermitianOperator h = fixtures::phase_family_operator(0, 0, M_PI);
  LinearPencil p = build_pencil(range_basis(h), {0});
  REQUIRE(p.row_dim == 3);
  REQUIRE(p.vector_count == 3);
  std::vector<HomogeneousPolynomial> minors = minor_ideal(p, 2);
  REQUIRE(minors.size() == 1);
  REQUIRE(oracle::det_ratio_deviation(p, minors[0], 25, 5) < 1e-8);
}
