// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include "skg/channel.hpp"
#include "skg/stats.hpp"
#include "skg/theory.hpp"
#include "test_support.hpp"

using namespace skg;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

ComplexVector randomUnitVector(Index n, RngStream& rng) {
  ComplexVector v = testing::randomComplex(n, 1, rng);
  v.normalize();
  return v;
}

}  // namespace

TEST_CASE("uniform-profile closed form") {
  const double xi1 = 1.7;
  const double c = 2.3;
  const Index n = 4, d = 50;
  RngStream rng(3, 0);
  const ComplexVector v = randomUnitVector(n, rng);
  const GaussianApprox g = theorem2Moments(xi1, v, VarianceProfile::uniform(n, d, c));

  // S = C^2/D for a uniform profile regardless of the weight column.
  const double dd = static_cast<double>(d);
  REQUIRE_THAT(g.mean, WithinRel(xi1 * std::sqrt(c) * std::pow(4.0 - 2.0 / dd, 0.25), 1e-12));
  REQUIRE_THAT(g.variance,
               WithinRel(xi1 * xi1 * c * (2.0 - std::sqrt(4.0 - 2.0 / dd)), 1e-10));
}

TEST_CASE("large-D limit concentrates the singular value") {
  const double xi1 = 0.9, c = 1.4;
  RngStream rng(5, 0);
  const ComplexVector v = randomUnitVector(3, rng);
  const GaussianApprox g = theorem2Moments(xi1, v, VarianceProfile::uniform(3, 1000000, c));
  REQUIRE_THAT(g.mean, WithinRel(xi1 * std::sqrt(2.0 * c), 1e-4));
  REQUIRE(g.variance < 1e-4 * xi1 * xi1 * c);
}

TEST_CASE("second-moment identity holds exactly") {
  RngStream rng(7, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    const Index n = 2 + static_cast<Index>(rng.below(4));
    const Index d = 2 + static_cast<Index>(rng.below(64));
    const double c = 0.1 + 3.0 * rng.uniform();
    const double xi1 = 0.1 + 5.0 * rng.uniform();
    const VarianceProfile prof = VarianceProfile::randomNonuniform(n, d, c, rng);
    const ComplexVector v = randomUnitVector(n, rng);
    const GaussianApprox g = theorem2Moments(xi1, v, prof);
    const double target = 2.0 * c * xi1 * xi1;
    REQUIRE(std::abs(g.mean * g.mean + g.variance - target) <= 1e-10 * target);
  }
}

TEST_CASE("proposition-1 bounds") {
  RngStream rng(11, 0);
  const double xi1 = 1.3, c = 0.9;

  SECTION("uniform profile collapses the bracket") {
    const VarianceProfile prof = VarianceProfile::uniform(4, 32, c);
    const ComplexVector v = randomUnitVector(4, rng);
    const GaussianApprox g = theorem2Moments(xi1, v, prof);
    const MomentBounds b = prop1Bounds(xi1, prof);
    REQUIRE_THAT(b.etaMin, WithinRel(b.etaMax, 1e-12));
    REQUIRE_THAT(b.etaMin, WithinRel(g.mean, 1e-12));
    REQUIRE_THAT(b.iotaSqMin, WithinRel(g.variance, 1e-10));
  }

  SECTION("random profiles stay inside the bracket for both directions") {
    for (int trial = 0; trial < 100; ++trial) {
      const Index n = 2 + static_cast<Index>(rng.below(4));
      const Index d = 4 + static_cast<Index>(rng.below(60));
      const VarianceProfile prof = VarianceProfile::randomNonuniform(n, d, c, rng);
      const MomentBounds b = prop1Bounds(xi1, prof);
      REQUIRE(b.etaMin <= b.etaMax);
      REQUIRE(b.iotaSqMin <= b.iotaSqMax);
      // Two different weight columns, standing in for V_{:,1} and U_{:,1}.
      for (int side = 0; side < 2; ++side) {
        const ComplexVector v = randomUnitVector(n, rng);
        const GaussianApprox g = theorem2Moments(xi1, v, prof);
        REQUIRE(g.mean >= b.etaMin * (1.0 - 1e-12));
        REQUIRE(g.mean <= b.etaMax * (1.0 + 1e-12));
        REQUIRE(g.variance >= b.iotaSqMin * (1.0 - 1e-12));
        REQUIRE(g.variance <= b.iotaSqMax * (1.0 + 1e-12));
      }
    }
  }

  SECTION("concentrated rows clamp the radicand") {
    // sum_n max_m delta^4 = 3 C^2 > 2 C^2: the eta lower bound clamps to 0
    // and the variance upper bound to its cap 2 C xi1^2.
    RealMatrix d = RealMatrix::Zero(3, 3);
    d(0, 0) = c;
    d(1, 1) = c;
    d(2, 2) = c;
    const VarianceProfile prof(d, c);
    const MomentBounds b = prop1Bounds(xi1, prof);
    REQUIRE(b.etaMin == 0.0);
    REQUIRE_THAT(b.iotaSqMax, WithinRel(2.0 * c * xi1 * xi1, 1e-12));
  }
}

TEST_CASE("proposition-2 reduces to theorem 2 and satisfies its identity") {
  RngStream rng(13, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 2 + static_cast<Index>(rng.below(4));
    const Index d = 4 + static_cast<Index>(rng.below(64));
    const double c = 0.2 + 2.0 * rng.uniform();
    const double xi1 = 0.2 + 3.0 * rng.uniform();
    const VarianceProfile prof = VarianceProfile::randomNonuniform(n, d, c, rng);
    const ComplexVector v = randomUnitVector(n, rng);

    const GaussianApprox clean = prop2Moments(xi1, v, prof, 0.0);
    const GaussianApprox t2 = theorem2Moments(xi1, v, prof);
    REQUIRE_THAT(clean.mean, WithinRel(t2.mean, 1e-12));
    REQUIRE(std::abs(clean.variance - t2.variance) <= 1e-12 * t2.mean * t2.mean);

    const double epsSq = rng.uniform() * c * xi1 * xi1 / static_cast<double>(d);
    const GaussianApprox noisy = prop2Moments(xi1, v, prof, epsSq);
    const double target = 2.0 * c * xi1 * xi1 + 2.0 * static_cast<double>(d) * epsSq;
    REQUIRE(std::abs(noisy.mean * noisy.mean + noisy.variance - target) <= 1e-10 * target);
  }
}

TEST_CASE("weight column must be unit norm and match the profile") {
  RngStream rng(17, 0);
  const VarianceProfile prof = VarianceProfile::uniform(4, 16, 1.0);
  ComplexVector v = randomUnitVector(4, rng);
  REQUIRE_THROWS_AS(theorem2Moments(1.0, 2.0 * v, prof), std::invalid_argument);
  REQUIRE_THROWS_AS(theorem2Moments(1.0, randomUnitVector(3, rng), prof),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(prop2Moments(1.0, v, prof, -1.0), std::invalid_argument);
}

TEST_CASE("Monte-Carlo moments match the closed forms at desk scale") {
  // Fixed LoS-dominant channel; noise level 2 D eps^2 = 0.1 * 2 C xi1^2,
  // where the diagonal-dominance approximation is accurate.
  ScenarioDims dims;
  dims.eveCount = 1;
  RngStream chanRng(42, 0xA6);
  RngStream sub = chanRng.substream(0);
  const ChannelSet set = randomChannelSet(dims, PathStats{}, PhaseAlphabet::continuous(), sub);
  const ComplexMatrix h = cascadedChannel(set).first;
  const CompactSvd svd = compactSvd(h);
  const double xi1 = svd.singularValues(0);
  const double c = 1.0;
  const Index d = 100;
  const VarianceProfile prof = VarianceProfile::uniform(4, d, c);
  const double epsSq = 0.1 * c * xi1 * xi1 / static_cast<double>(d);

  const GaussianApprox t2 = theorem2Moments(xi1, svd.rightVectors.col(0), prof);
  const GaussianApprox p2 = prop2Moments(xi1, svd.rightVectors.col(0), prof, epsSq);

  const int draws = 4000;
  std::vector<double> clean(draws), noisy(draws);
  RngStream drawRng(42, 0xB6);
  for (int i = 0; i < draws; ++i) {
    RngStream r = drawRng.substream(static_cast<std::uint64_t>(i));
    const ComplexMatrix x = complexGaussianMatrix(prof, r);
    clean[i] = largestSingular(h * x);
    noisy[i] = largestSingular(h * x + noiseMatrix(h.rows(), d, epsSq, r));
  }
  REQUIRE(std::abs(stats::mean(clean) - t2.mean) < 3.0 * stats::meanStderr(clean));
  REQUIRE_THAT(stats::variance(clean), WithinRel(t2.variance, 0.15));
  REQUIRE(std::abs(stats::mean(noisy) - p2.mean) < 3.0 * stats::meanStderr(noisy));
  REQUIRE_THAT(stats::variance(noisy), WithinRel(p2.variance, 0.15));

  // Fixed-w mean of sigma^2 matches 2 C xi1^2 + 2 D eps^2 (both directions
  // share xi1 by reciprocity).
  std::vector<double> sq(noisy.size());
  for (std::size_t i = 0; i < noisy.size(); ++i) sq[i] = noisy[i] * noisy[i];
  const double target = 2.0 * c * xi1 * xi1 + 2.0 * static_cast<double>(d) * epsSq;
  REQUIRE_THAT(stats::mean(sq), WithinRel(target, 0.02));
}
