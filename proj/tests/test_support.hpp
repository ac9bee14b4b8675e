// SPDX-License-Identifier: Apache-2.0
//
// Shared fixtures and independent oracles for the unit/acceptance suites.
#pragma once

#include <cmath>
#include <complex>

#include "skg/linalg.hpp"
#include "skg/sampling.hpp"

namespace skg::testing {

inline ComplexMatrix randomComplex(Index rows, Index cols, RngStream& rng) {
  ComplexMatrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = rng.complexGaussian();
  }
  return m;
}

/// Haar-distributed unitary via QR of a Gaussian matrix with the R-diagonal
/// phase fix.
inline ComplexMatrix haarUnitary(Index n, RngStream& rng) {
  const ComplexMatrix g = randomComplex(n, n, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

/// Independent largest-singular-value oracle: power iteration on A^H A.
inline double powerIterationLargestSingular(const ComplexMatrix& a, int iterations = 2000) {
  const ComplexMatrix gram = a.adjoint() * a;
  ComplexVector v = ComplexVector::Ones(gram.rows());
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < iterations; ++it) {
    const ComplexVector w = gram * v;
    lambda = w.norm();
    if (lambda == 0.0) return 0.0;
    v = w / lambda;
  }
  return std::sqrt(lambda);
}

}  // namespace skg::testing
