// SPDX-License-Identifier: Apache-2.0
//
// Globally-known-pilot baseline: pilot transmission, least-squares channel
// estimation (two algebraic routes, cross-checked), and the per-round scalar
// key feature.
#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

#include "skg/linalg.hpp"
#include "skg/sampling.hpp"

namespace skg {

/// Full-row-rank pilot block P (N x L, L >= N). Row rank is verified at
/// construction.
class PilotMatrix {
 public:
  explicit PilotMatrix(ComplexMatrix p, double tol = kDefaultRankTol)
      : matrix_(std::move(p)) {
    if (matrix_.cols() < matrix_.rows()) {
      throw std::invalid_argument("PilotMatrix: needs at least as many symbols as rows");
    }
    if (numericalRank(matrix_, tol) != matrix_.rows()) {
      throw std::invalid_argument("PilotMatrix: not full row rank");
    }
  }

  /// sqrt(2C) * I_n: per-row energy 2C, matching the expected per-row energy
  /// of a probe matrix with row-sum constant C under the per-part variance
  /// convention.
  static PilotMatrix scaledIdentity(Index n, double rowPower) {
    return PilotMatrix(std::sqrt(2.0 * rowPower) *
                       ComplexMatrix::Identity(n, n));
  }

  /// Haar-random unitary scaled to the same per-row energy.
  static PilotMatrix randomUnitary(Index n, double rowPower, RngStream& rng) {
    ComplexMatrix g(n, n);
    for (Index j = 0; j < n; ++j) {
      for (Index i = 0; i < n; ++i) g(i, j) = rng.complexGaussian();
    }
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < n; ++j) {
      const double mag = std::abs(r(j, j));
      if (mag > 0.0) q.col(j) *= r(j, j) / mag;
    }
    return PilotMatrix(std::sqrt(2.0 * rowPower) * q);
  }

  const ComplexMatrix& matrix() const { return matrix_; }
  Index rows() const { return matrix_.rows(); }
  Index cols() const { return matrix_.cols(); }

 private:
  ComplexMatrix matrix_;
};

/// Y = H P + N with i.i.d. complex Gaussian noise of per-part variance noiseVar.
inline ComplexMatrix receivedPilotSignal(const ComplexMatrix& h, const PilotMatrix& p,
                                         double noiseVar, RngStream& rng) {
  if (h.cols() != p.rows()) {
    throw std::invalid_argument("receivedPilotSignal: channel/pilot dimension mismatch");
  }
  return h * p.matrix() + noiseMatrix(h.rows(), p.cols(), noiseVar, rng);
}

/// Least-squares channel estimate. Computed by the direct route H = Y P+ and
/// the vectorized route vec(H) = (P^T kron I)+ vec(Y); the two are required
/// to agree to 1e-9, which pins down the transpose (not conjugate) reading of
/// the Kronecker factor.
inline ComplexMatrix lsEstimate(const ComplexMatrix& y, const PilotMatrix& p) {
  const Index n = y.rows();
  const ComplexMatrix direct = y * pinv(p.matrix());

  const ComplexMatrix system = kron(p.matrix().transpose(), ComplexMatrix::Identity(n, n));
  const ComplexVector stacked = pinv(system) * vec(y);
  const ComplexMatrix viaVec = stacked.reshaped(n, p.rows());

  const double scale = std::max(1.0, direct.norm());
  if ((direct - viaVec).norm() > 1e-9 * scale) {
    throw std::runtime_error("lsEstimate: direct and vectorized LS routes disagree");
  }
  return direct;
}

enum class PilotFeature { Rss, MaxSingular };

/// Scalar key material from an estimated channel: squared Frobenius norm
/// (received-signal-strength flavour) or the largest singular value.
inline double pilotFeature(const ComplexMatrix& hHat, PilotFeature mode) {
  switch (mode) {
    case PilotFeature::Rss:
      return hHat.squaredNorm();
    case PilotFeature::MaxSingular:
      return largestSingular(hHat);
  }
  throw std::logic_error("pilotFeature: unknown mode");
}

}  // namespace skg
