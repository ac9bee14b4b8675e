// SPDX-License-Identifier: Apache-2.0
//
// Closed-form Gaussian approximations for the largest singular value of H*X
// (X random Gaussian with a variance profile), noisy-round variants, and
// profile-only bounds.
//
// All three evaluators solve the same coupled moment equations
//   mean^2 + var   = E(sigma^2)
//   2 var^2 + 4 mean^2 var = Var(sigma^2)
// in closed form by substitution, taking the root with mean >= 0, var >= 0.
#pragma once

#include <cmath>
#include <stdexcept>

#include "skg/linalg.hpp"
#include "skg/sampling.hpp"

namespace skg {

struct GaussianApprox {
  double mean = 0.0;
  double variance = 0.0;
};

struct MomentBounds {
  double etaMin = 0.0;
  double etaMax = 0.0;
  double iotaSqMin = 0.0;
  double iotaSqMax = 0.0;
};

namespace detail {

/// S = sum_n (sum_m d^2_{m,n} |v_m|^2)^2 for a unit weight column v.
inline double profileWeightSum(const ComplexVector& weightColumn,
                               const VarianceProfile& profile) {
  if (weightColumn.size() != profile.rows()) {
    throw std::invalid_argument("theory: weight column length does not match profile rows");
  }
  const double norm = weightColumn.norm();
  if (std::abs(norm - 1.0) > 1e-6) {
    throw std::invalid_argument("theory: weight column must have unit norm");
  }
  const RealVector w2 = weightColumn.cwiseAbs2();
  double s = 0.0;
  for (Index n = 0; n < profile.cols(); ++n) {
    const double inner = profile.deltaSq().col(n).dot(w2);
    s += inner * inner;
  }
  return s;
}

/// Solves mean^2 + var = secondMoment, 2 var^2 + 4 mean^2 var = varOfSquare.
/// Substitution gives mean^4 = secondMoment^2 - varOfSquare / 2.
inline GaussianApprox solveMoments(double secondMoment, double varOfSquare) {
  const double radicand = secondMoment * secondMoment - 0.5 * varOfSquare;
  if (radicand < 0.0) {
    throw std::domain_error("theory: negative radicand, no real Gaussian moments");
  }
  GaussianApprox out;
  out.mean = std::pow(radicand, 0.25);
  out.variance = secondMoment - std::sqrt(radicand);
  if (out.variance < 0.0) out.variance = 0.0;  // rounding guard
  return out;
}

}  // namespace detail

/// Noiseless case: sigma_max(H X) ~ N(eta, iota^2) with
///   E(sigma^2)   = 2 C xi1^2
///   Var(sigma^2) = 4 xi1^4 S.
/// eta^2 + iota^2 = 2 C xi1^2 holds exactly by construction.
inline GaussianApprox theorem2Moments(double xi1, const ComplexVector& vColumn,
                                      const VarianceProfile& profile) {
  const double s = detail::profileWeightSum(vColumn, profile);
  const double c = profile.rowSum();
  const double xiSq = xi1 * xi1;
  return detail::solveMoments(2.0 * c * xiSq, 4.0 * xiSq * xiSq * s);
}

/// Profile-only bracket for the Theorem-2 moments: S lies between
/// sum_n min_m d^4 and sum_n max_m d^4, and the mean (variance) is
/// decreasing (increasing) in S. Radicands are clamped at zero, which keeps
/// the bounds valid (eta >= 0 and iota^2 <= 2 C xi1^2 always hold).
inline MomentBounds prop1Bounds(double xi1, const VarianceProfile& profile) {
  double sMin = 0.0, sMax = 0.0;
  for (Index n = 0; n < profile.cols(); ++n) {
    const double lo = profile.deltaSq().col(n).minCoeff();
    const double hi = profile.deltaSq().col(n).maxCoeff();
    sMin += lo * lo;
    sMax += hi * hi;
  }
  const double c = profile.rowSum();
  const double xiSq = xi1 * xi1;
  const auto etaOf = [&](double s) {
    return xi1 * std::pow(std::max(0.0, 4.0 * c * c - 2.0 * s), 0.25);
  };
  const auto iotaSqOf = [&](double s) {
    return xiSq * (2.0 * c - std::sqrt(std::max(0.0, 4.0 * c * c - 2.0 * s)));
  };
  MomentBounds out;
  out.etaMin = etaOf(sMax);
  out.etaMax = etaOf(sMin);
  out.iotaSqMin = iotaSqOf(sMin);
  out.iotaSqMax = iotaSqOf(sMax);
  return out;
}

/// Noisy case: sigma_1 = sigma_max(H X + N) at one fixed IRS phase, noise with
/// per-part variance noiseVar. Moment equations:
///   E(sigma^2)   = 2 C xi1^2 + 2 D noiseVar
///   Var(sigma^2) = 4 xi1^4 S + 8 C xi1^2 noiseVar + 4 D noiseVar^2.
/// weightColumn is V_{:,1} of H_AB for Bob's direction and U_{:,1} for
/// Alice's. Reduces exactly to theorem2Moments at noiseVar = 0.
inline GaussianApprox prop2Moments(double xi1, const ComplexVector& weightColumn,
                                   const VarianceProfile& profile, double noiseVar) {
  if (noiseVar < 0.0) throw std::invalid_argument("prop2Moments: negative noise variance");
  const double s = detail::profileWeightSum(weightColumn, profile);
  const double c = profile.rowSum();
  const double d = static_cast<double>(profile.cols());
  const double xiSq = xi1 * xi1;
  const double secondMoment = 2.0 * c * xiSq + 2.0 * d * noiseVar;
  const double varOfSquare = 4.0 * xiSq * xiSq * s +
                             8.0 * c * xiSq * noiseVar +
                             4.0 * d * noiseVar * noiseVar;
  return detail::solveMoments(secondMoment, varOfSquare);
}

}  // namespace skg
