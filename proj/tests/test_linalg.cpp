// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include "skg/linalg.hpp"
#include "test_support.hpp"

using namespace skg;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
const Complex kJ(0.0, 1.0);
}

TEST_CASE("kron basics") {
  RngStream rng(7, 1);
  const ComplexMatrix b = testing::randomComplex(3, 2, rng);

  ComplexMatrix one(1, 1);
  one << 1.0;
  REQUIRE((kron(one, b) - b).norm() == 0.0);

  ComplexMatrix two(1, 1);
  two << 2.0;
  const ComplexMatrix expanded = kron(ComplexMatrix::Identity(2, 2), two);
  REQUIRE(expanded.rows() == 2);
  REQUIRE((expanded - 2.0 * ComplexMatrix::Identity(2, 2)).norm() == 0.0);

  ComplexMatrix u(2, 1), v(2, 1);
  u << 1.0, kJ;
  v << 1.0, -1.0;
  ComplexMatrix expect(4, 1);
  expect << 1.0, -1.0, kJ, -kJ;
  REQUIRE((kron(u, v) - expect).norm() == 0.0);
}

TEST_CASE("vec stacks columns") {
  ComplexMatrix a(2, 2);
  a << 1.0, 2.0, 3.0, 4.0;
  const ComplexVector v = vec(a);
  ComplexVector expect(4);
  expect << 1.0, 3.0, 2.0, 4.0;
  REQUIRE((v - expect).norm() == 0.0);

  RngStream rng(1, 2);
  const ComplexMatrix col = testing::randomComplex(5, 1, rng);
  REQUIRE((vec(col) - col).norm() == 0.0);
}

TEST_CASE("vec(AXB) identity over random shapes") {
  RngStream rng(11, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const Index p = 1 + static_cast<Index>(rng.below(4));
    const Index q = 1 + static_cast<Index>(rng.below(4));
    const Index r = 1 + static_cast<Index>(rng.below(4));
    const Index s = 1 + static_cast<Index>(rng.below(4));
    const ComplexMatrix a = testing::randomComplex(p, q, rng);
    const ComplexMatrix x = testing::randomComplex(q, r, rng);
    const ComplexMatrix b = testing::randomComplex(r, s, rng);
    const ComplexVector lhs = vec(a * x * b);
    const ComplexVector rhs = kron(b.transpose(), a) * vec(x);
    REQUIRE((lhs - rhs).norm() <= 1e-10 * std::max(1.0, lhs.norm()));
  }
}

TEST_CASE("compactSvd on fixed inputs") {
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = 1.0;
  const CompactSvd svd = compactSvd(d);
  REQUIRE(svd.rank == 2);
  REQUIRE_THAT(svd.singularValues(0), WithinAbs(3.0, 1e-14));
  REQUIRE_THAT(svd.singularValues(1), WithinAbs(1.0, 1e-14));
  REQUIRE((svd.leftVectors - ComplexMatrix::Identity(2, 2)).norm() < 1e-12);
  REQUIRE((svd.rightVectors - ComplexMatrix::Identity(2, 2)).norm() < 1e-12);

  const CompactSvd zero = compactSvd(ComplexMatrix::Zero(3, 3));
  REQUIRE(zero.rank == 0);
  REQUIRE(zero.singularValues.size() == 0);
}

TEST_CASE("compactSvd reconstruction and orthonormality") {
  RngStream rng(13, 0);
  const ComplexMatrix a = testing::randomComplex(6, 4, rng);
  const CompactSvd svd = compactSvd(a);
  REQUIRE((svd.reconstruct() - a).norm() < 1e-10 * a.norm());
  REQUIRE((svd.leftVectors.adjoint() * svd.leftVectors -
           ComplexMatrix::Identity(svd.rank, svd.rank)).norm() < 1e-12);
  REQUIRE((svd.rightVectors.adjoint() * svd.rightVectors -
           ComplexMatrix::Identity(svd.rank, svd.rank)).norm() < 1e-12);
  for (Index i = 1; i < svd.rank; ++i) {
    REQUIRE(svd.singularValues(i) <= svd.singularValues(i - 1));
  }
}

TEST_CASE("compactSvd phase convention is deterministic") {
  RngStream rng(17, 0);
  const ComplexMatrix a = testing::randomComplex(5, 3, rng);
  const CompactSvd first = compactSvd(a);
  const CompactSvd second = compactSvd(a);
  REQUIRE((first.leftVectors - second.leftVectors).norm() == 0.0);
  REQUIRE((first.rightVectors - second.rightVectors).norm() == 0.0);
  for (Index j = 0; j < first.rank; ++j) {
    Index imax = 0;
    first.rightVectors.col(j).cwiseAbs().maxCoeff(&imax);
    const Complex pivot = first.rightVectors(imax, j);
    REQUIRE(pivot.real() > 0.0);
    REQUIRE(std::abs(pivot.imag()) < 1e-12 * pivot.real());
  }
}

TEST_CASE("pinv on fixed inputs") {
  REQUIRE((pinv(ComplexMatrix::Identity(4, 4)) - ComplexMatrix::Identity(4, 4)).norm() < 1e-13);

  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 2.0;
  ComplexMatrix expect = ComplexMatrix::Zero(2, 2);
  expect(0, 0) = 0.5;
  REQUIRE((pinv(d) - expect).norm() < 1e-13);
}

TEST_CASE("pinv is a left inverse for full-column-rank input") {
  RngStream rng(19, 0);
  const ComplexMatrix a = testing::randomComplex(5, 3, rng);
  REQUIRE((pinv(a) * a - ComplexMatrix::Identity(3, 3)).norm() < 1e-9);
}

TEST_CASE("Penrose conditions hold on random matrices") {
  RngStream rng(23, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const Index rows = 1 + static_cast<Index>(rng.below(6));
    const Index cols = 1 + static_cast<Index>(rng.below(6));
    const ComplexMatrix a = testing::randomComplex(rows, cols, rng);
    const ComplexMatrix ap = pinv(a);
    const double tol = 1e-9 * std::max(1.0, a.norm());
    REQUIRE((a * ap * a - a).norm() < tol);
    REQUIRE((ap * a * ap - ap).norm() < tol);
    REQUIRE(((a * ap).adjoint() - a * ap).norm() < tol);
    REQUIRE(((ap * a).adjoint() - ap * a).norm() < tol);
  }
}

TEST_CASE("largestSingular basics and homogeneity") {
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = 1.0;
  REQUIRE_THAT(largestSingular(d), WithinAbs(3.0, 1e-14));
  REQUIRE(largestSingular(ComplexMatrix::Zero(3, 2)) == 0.0);

  RngStream rng(29, 0);
  const ComplexMatrix a = testing::randomComplex(4, 4, rng);
  const Complex c(1.5, -2.0);
  REQUIRE_THAT(largestSingular(c * a), WithinRel(std::abs(c) * largestSingular(a), 1e-12));
}

TEST_CASE("largestSingular agrees with the power-iteration oracle") {
  RngStream rng(31, 0);
  const ComplexMatrix a = testing::randomComplex(4, 4, rng);
  const double oracle = testing::powerIterationLargestSingular(a);
  REQUIRE_THAT(largestSingular(a), WithinRel(oracle, 1e-9));
}

TEST_CASE("unitary rotation preserves singular values") {
  RngStream rng(37, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 2 + static_cast<Index>(rng.below(5));
    const Index m = 1 + static_cast<Index>(rng.below(6));
    const ComplexMatrix q = testing::randomComplex(n, m, rng);
    const ComplexMatrix gamma = testing::haarUnitary(n, rng);
    const RealVector s1 = singularValues(gamma * q);
    const RealVector s2 = singularValues(q);
    REQUIRE((s1 - s2).norm() <= 1e-9 * std::max(1.0, s2.norm()));
  }
}

TEST_CASE("sigma(H X) equals sigma(Xi V^H X)") {
  RngStream rng(41, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix h = testing::randomComplex(4, 3, rng);
    const ComplexMatrix x = testing::randomComplex(3, 6, rng);
    const CompactSvd svd = compactSvd(h);
    const ComplexMatrix reduced =
        svd.singularValues.asDiagonal() * svd.rightVectors.adjoint() * x;
    const RealVector s1 = singularValues(h * x);
    const RealVector s2 = singularValues(reduced);
    REQUIRE((s1.head(s2.size()) - s2).norm() <= 1e-9 * std::max(1.0, s1.norm()));
  }
}

TEST_CASE("numericalRank thresholds small singular values") {
  RngStream rng(43, 0);
  const ComplexMatrix u = testing::haarUnitary(4, rng);
  RealVector s(4);
  s << 1.0, 0.5, 1e-14, 0.0;
  const ComplexMatrix a = u * s.asDiagonal() * testing::haarUnitary(4, rng).adjoint();
  REQUIRE(numericalRank(a) == 2);
  REQUIRE(numericalRank(a, 1e-15) == 3);
}

TEST_CASE("non-finite input is rejected") {
  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  a(0, 0) = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
  REQUIRE_THROWS_AS(compactSvd(a), std::invalid_argument);
  REQUIRE_THROWS_AS(largestSingular(a), std::invalid_argument);
}
