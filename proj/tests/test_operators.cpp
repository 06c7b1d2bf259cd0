#include "luob/operators.hpp"
#include "luob/fixtures.hpp"
#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

using namespace luob;
using Catch::Approx;

namespace {

Matrix random_psd(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Complex(gauss(rng), gauss(rng));
  return a * a.adjoint();
}

PureStateVector basis_state(const SpaceShape& shape, const std::vector<int>& idx) {
  Vector v = Vector::Zero(shape.total());
  v(shape.flatten(idx)) = Complex(1, 0);
  return PureStateVector(shape, std::move(v));
}

}  // namespace

TEST_CASE("SpaceShape indexing and labels", "[operators]") {
  SpaceShape shape({2, 3, 2});
  REQUIRE(shape.parties() == 3);
  REQUIRE(shape.total() == 12);
  REQUIRE(shape.to_string() == "2x3x2");
  REQUIRE(shape.party_label(0) == "A");
  REQUIRE(shape.party_label(2) == "C");

  // row-major flatten: last party fastest
  REQUIRE(shape.flatten({0, 0, 0}) == 0);
  REQUIRE(shape.flatten({0, 0, 1}) == 1);
  REQUIRE(shape.flatten({0, 1, 0}) == 2);
  REQUIRE(shape.flatten({1, 0, 0}) == 6);
  for (int i = 0; i < shape.total(); ++i)
    REQUIRE(shape.flatten(shape.unflatten(i)) == i);

  REQUIRE_THROWS_AS(SpaceShape({2, 0}), ValidationError);
  REQUIRE_THROWS_AS(SpaceShape(std::vector<int>{}), ValidationError);
  REQUIRE_THROWS_AS(shape.flatten({0, 0}), ValidationError);
  REQUIRE_THROWS_AS(shape.flatten({0, 0, 2}), ValidationError);
}

TEST_CASE("PureStateVector reshape matches hand layout", "[operators]") {
  SpaceShape shape({2, 2});
  Vector amp(4);
  amp << Complex(1, 0), Complex(2, 0), Complex(3, 0), Complex(4, 0);
  PureStateVector psi(shape, amp / amp.norm());

  Matrix m = psi.reshape({0});  // rows = party A, cols = party B
  REQUIRE(m.rows() == 2);
  REQUIRE(m.cols() == 2);
  const double n = amp.norm();
  REQUIRE(std::abs(m(0, 0) - Complex(1, 0) / n) < 1e-14);
  REQUIRE(std::abs(m(0, 1) - Complex(2, 0) / n) < 1e-14);
  REQUIRE(std::abs(m(1, 0) - Complex(3, 0) / n) < 1e-14);
  REQUIRE(std::abs(m(1, 1) - Complex(4, 0) / n) < 1e-14);

  // transposed role for the B-side reshape
  Matrix mb = psi.reshape({1});
  REQUIRE((mb - m.transpose()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("schmidt_rank on standard states", "[operators]") {
  SpaceShape q2({2, 2});
  const double s = 1.0 / std::sqrt(2.0);

  Vector bell(4);
  bell << s, 0, 0, s;
  REQUIRE(schmidt_rank(PureStateVector(q2, bell), {0}) == 2);

  Vector prod = Vector::Zero(4);
  prod(1) = 1.0;  // |01>
  REQUIRE(schmidt_rank(PureStateVector(q2, prod), {0}) == 1);

  SpaceShape q3({2, 2, 2});
  Vector ghz = Vector::Zero(8);
  ghz(0) = s;
  ghz(7) = s;
  PureStateVector g(q3, ghz);
  REQUIRE(schmidt_rank(g, {0}) == 2);
  REQUIRE(schmidt_rank(g, {0, 1}) == 2);

  // random states: library vs direct reshape+SVD oracle
  std::mt19937_64 rng(41);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int t = 0; t < 25; ++t) {
    Vector v(8);
    for (int i = 0; i < 8; ++i) v(i) = Complex(gauss(rng), gauss(rng));
    PureStateVector psi(q3, v / v.norm());
    for (const std::vector<int>& cut :
         {std::vector<int>{0}, std::vector<int>{1}, std::vector<int>{0, 2}}) {
      Tolerances tol;
      REQUIRE(schmidt_rank(psi, cut) ==
              oracle::schmidt_rank_direct(psi, cut, tol.rank));
    }
  }
}

TEST_CASE("HermitianOperator constructor symmetrizes and validates", "[operators]") {
  SpaceShape shape({2, 2});
  Matrix m = random_psd(4, 7);
  // inject a tiny non-Hermitian perturbation below the tolerance
  Matrix skew = m;
  skew(0, 1) += Complex(0, 1e-12);
  HermitianOperator h(shape, skew);
  REQUIRE((h.matrix() - h.matrix().adjoint()).cwiseAbs().maxCoeff() < 1e-15);
  REQUIRE(std::abs(h.trace().imag()) < 1e-12);

  // a perturbation far above the tolerance is rejected
  Matrix bad = m;
  bad(0, 1) += Complex(0, 1e-3);
  REQUIRE_THROWS_AS(HermitianOperator(shape, bad), ValidationError);

  // the matrix size must match the shape
  REQUIRE_THROWS_AS(HermitianOperator(shape, Matrix::Identity(3, 3)),
                    ValidationError);
}

TEST_CASE("spectral_decompose reconstructs and rejects indefinite input",
          "[operators]") {
  SpaceShape shape({3, 3});
  HermitianOperator h(shape, random_psd(9, 11));
  SpectralDecomposition sd = spectral_decompose(h);
  REQUIRE(sd.rank == 9);  // a random Ginibre square is almost surely full rank
  Matrix rebuilt = Matrix::Zero(9, 9);
  for (std::size_t i = 0; i < sd.eigenvalues.size(); ++i) {
    REQUIRE(sd.eigenvalues[i] > 0.0);
    rebuilt += sd.eigenvalues[i] * sd.eigenvectors.col(static_cast<int>(i)) *
               sd.eigenvectors.col(static_cast<int>(i)).adjoint();
  }
  REQUIRE((rebuilt - h.matrix()).cwiseAbs().maxCoeff() < 1e-9);

  Matrix indef = Matrix::Identity(9, 9);
  indef(0, 0) = -0.5;
  REQUIRE_THROWS_AS(spectral_decompose(HermitianOperator(shape, indef)),
                    ValidationError);
}

TEST_CASE("operator_rank agrees with the stacked-generator oracle", "[operators]") {
  SpaceShape shape({2, 2});
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Tolerances tol;
  for (int t = 0; t < 20; ++t) {
    // two independent generators plus a duplicate: rank must come out as 2
    Vector a(4), b(4);
    for (int i = 0; i < 4; ++i) {
      a(i) = Complex(gauss(rng), gauss(rng));
      b(i) = Complex(gauss(rng), gauss(rng));
    }
    a /= a.norm();
    b -= a.dot(b) * a / a.squaredNorm();
    b /= b.norm();
    std::vector<PureStateVector> states = {PureStateVector(shape, a),
                                           PureStateVector(shape, b),
                                           PureStateVector(shape, a)};
    std::vector<double> weights = {0.5, 0.3, 0.2};
    HermitianOperator h = from_pure_states(shape, states, weights);
    REQUIRE(operator_rank(h) == 2);
    REQUIRE(oracle::stacked_rank(states, weights, tol.rank) == 2);
  }
}

TEST_CASE("from_pure_states validates and matches the direct sum", "[operators]") {
  SpaceShape shape({2, 2});
  Vector v = Vector::Zero(4);
  v(0) = 1.0;
  PureStateVector psi(shape, v);

  HermitianOperator h = from_pure_states(shape, {psi}, {0.7});
  Matrix expect = 0.7 * v * v.adjoint();
  REQUIRE((h.matrix() - expect).cwiseAbs().maxCoeff() < 1e-14);

  REQUIRE_THROWS_AS(from_pure_states(shape, {psi}, {-1.0}), ValidationError);
  REQUIRE_THROWS_AS(from_pure_states(shape, {psi}, {0.5, 0.5}), ValidationError);

  // no generators at all is legal and gives the zero operator
  HermitianOperator zero = from_pure_states(shape, {}, {});
  REQUIRE(zero.matrix().cwiseAbs().maxCoeff() == 0.0);

  Vector unnorm = Vector::Zero(4);
  unnorm(0) = 2.0;
  REQUIRE_THROWS_AS(
      from_pure_states(shape, {PureStateVector(shape, unnorm)}, {1.0}),
      ValidationError);
}

TEST_CASE("partial_trace on Bell state gives the maximally mixed state",
          "[operators]") {
  HermitianOperator bell = fixtures::bell_operator({1});
  HermitianOperator redA = partial_trace(bell, {0});
  REQUIRE(redA.shape().dims() == std::vector<int>{2});
  REQUIRE((redA.matrix() - 0.5 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <
          1e-12);
  REQUIRE(std::abs(redA.trace().real() - bell.trace().real()) < 1e-12);

  SpaceShape q3({2, 2, 2});
  HermitianOperator h(q3, random_psd(8, 13));
  HermitianOperator red = partial_trace(h, {0, 2});
  REQUIRE(red.shape().dims() == std::vector<int>{2, 2});
  REQUIRE(std::abs(red.trace().real() - h.trace().real()) < 1e-10);
  REQUIRE_THROWS_AS(partial_trace(h, {}), ValidationError);
  REQUIRE_THROWS_AS(partial_trace(h, {3}), ValidationError);
}

TEST_CASE("swap_conjugate flips the parties and is an involution", "[operators]") {
  SpaceShape shape({2, 2});
  // |01><01| goes to |10><10|
  HermitianOperator h =
      from_pure_states(shape, {basis_state(shape, {0, 1})}, {1.0});
  HermitianOperator flipped = swap_conjugate(h);
  Matrix expect = Matrix::Zero(4, 4);
  expect(2, 2) = 1.0;
  REQUIRE((flipped.matrix() - expect).cwiseAbs().maxCoeff() < 1e-14);

  HermitianOperator g(shape, random_psd(4, 17));
  HermitianOperator twice = swap_conjugate(swap_conjugate(g));
  REQUIRE((twice.matrix() - g.matrix()).cwiseAbs().maxCoeff() < 1e-13);

  SpaceShape uneven({2, 3});
  REQUIRE_THROWS_AS(swap_conjugate(HermitianOperator(uneven, random_psd(6, 19))),
                    ValidationError);
}

TEST_CASE("LocalUnitary validates factors and builds the Kronecker product",
          "[operators]") {
  SpaceShape shape({2, 2});
  Matrix x(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  z << 1, 0, 0, -1;
  LocalUnitary u(shape, {x, z});
  Matrix full = u.full();
  REQUIRE(full.rows() == 4);
  // kron(X, Z): block structure X(i,j) * Z
  REQUIRE(std::abs(full(0, 2) - Complex(1, 0)) < 1e-14);
  REQUIRE(std::abs(full(1, 3) - Complex(-1, 0)) < 1e-14);
  REQUIRE(std::abs(full(0, 0)) < 1e-14);
  REQUIRE((full * full.adjoint() - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() <
          1e-13);

  Matrix notu(2, 2);
  notu << 1, 1, 0, 1;
  REQUIRE_THROWS_AS(LocalUnitary(shape, {x, notu}), ValidationError);
  REQUIRE_THROWS_AS(LocalUnitary(shape, {x}), ValidationError);
}

TEST_CASE("random_local_unitary is seeded, unitary, and shape-matched",
          "[operators]") {
  SpaceShape shape({2, 3});
  LocalUnitary u1 = random_local_unitary(shape, 99);
  LocalUnitary u2 = random_local_unitary(shape, 99);
  LocalUnitary u3 = random_local_unitary(shape, 100);
  for (int p = 0; p < 2; ++p) {
    const Matrix& f = u1.factor(p);
    REQUIRE(f.rows() == shape.dim(p));
    REQUIRE((f * f.adjoint() - Matrix::Identity(f.rows(), f.rows()))
                .cwiseAbs()
                .maxCoeff() < 1e-12);
    REQUIRE((u1.factor(p) - u2.factor(p)).cwiseAbs().maxCoeff() == 0.0);
  }
  REQUIRE((u1.factor(0) - u3.factor(0)).cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("apply_local_unitary conjugates and preserves the spectrum",
          "[operators]") {
  SpaceShape shape({2, 2});
  HermitianOperator h(shape, random_psd(4, 23));
  LocalUnitary u = random_local_unitary(shape, 31);
  HermitianOperator hu = apply_local_unitary(h, u);
  Matrix expect = u.full() * h.matrix() * u.full().adjoint();
  REQUIRE((hu.matrix() - expect).cwiseAbs().maxCoeff() < 1e-12);

  Eigen::SelfAdjointEigenSolver<Matrix> ea(h.matrix()), eb(hu.matrix());
  REQUIRE((ea.eigenvalues() - eb.eigenvalues()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("lu_mixture preserves trace and semi-positivity", "[operators]") {
  SpaceShape shape({2, 2});
  HermitianOperator h(shape, random_psd(4, 29));
  std::vector<LocalUnitary> us = {random_local_unitary(shape, 1),
                                  random_local_unitary(shape, 2),
                                  random_local_unitary(shape, 3)};
  HermitianOperator mix = lu_mixture(h, us, {0.5, 0.25, 0.25});
  REQUIRE(std::abs(mix.trace().real() - h.trace().real()) <
          1e-10 * std::abs(h.trace().real()));
  Eigen::SelfAdjointEigenSolver<Matrix> es(mix.matrix());
  REQUIRE(es.eigenvalues().minCoeff() > -1e-9 * es.eigenvalues().maxCoeff());

  REQUIRE_THROWS_AS(lu_mixture(h, us, {0.5, 0.5}), ValidationError);
  REQUIRE_THROWS_AS(lu_mixture(h, us, {0.5, 0.3, 0.1}), ValidationError);
  REQUIRE_THROWS_AS(lu_mixture(h, us, {0.5, 0.6, -0.1}), ValidationError);
}

TEST_CASE("max_schmidt_rank_in_range on known ranges", "[operators]") {
  // span of two maximally entangled states still contains Schmidt-rank-2
  // states and nothing higher on 2x2
  REQUIRE(max_schmidt_rank_in_range(fixtures::bell_operator({1, 3}), {0}, 7) == 2);

  // a product-state projector has Schmidt rank 1
  SpaceShape shape({2, 2});
  HermitianOperator prod =
      from_pure_states(shape, {basis_state(shape, {0, 0})}, {1.0});
  REQUIRE(max_schmidt_rank_in_range(prod, {0}, 7) == 1);

  // the maximally entangled 3x3 projector reaches the full rank 3
  auto [left, right] = fixtures::schmidt_pair();
  REQUIRE(max_schmidt_rank_in_range(left, {0}, 7) == 3);
  REQUIRE(max_schmidt_rank_in_range(right, {0}, 7) == 2);
}
