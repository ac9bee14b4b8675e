// SPDX-License-Identifier: Apache-2.0
//
// Complex dense linear-algebra substrate: Kronecker product, column-major
// vectorization, compact SVD with a deterministic phase convention,
// Moore-Penrose pseudoinverse and numerical rank.
#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace skg {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Relative threshold below which singular values are treated as zero.
inline constexpr double kDefaultRankTol = 1e-12;

class SvdError : public std::runtime_error {
 public:
  explicit SvdError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline void requireFinite(const ComplexMatrix& a, const char* op) {
  if (!a.allFinite()) {
    throw std::invalid_argument(std::string(op) + ": matrix has NaN/Inf entries");
  }
}

}  // namespace detail

/// Kronecker product: block (i,j) of the result equals a(i,j) * b.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Column-major vectorization: stacks the columns of a top to bottom,
/// so vec(A X B) = (B^T ⊗ A) vec(X) for conforming shapes.
inline ComplexVector vec(const ComplexMatrix& a) {
  return ComplexVector(a.reshaped());
}

/// Thin SVD truncated at singular values below tol * sigma_max.
///
/// Phase convention: the largest-magnitude entry of each right singular
/// vector is rotated to be real-positive (the matching left vector gets the
/// conjugate rotation), so repeated factorizations are bit-identical.
struct CompactSvd {
  ComplexMatrix leftVectors;    // n x r, orthonormal columns
  RealVector singularValues;    // descending, all > tol * max
  ComplexMatrix rightVectors;   // m x r, orthonormal columns
  Index rank = 0;

  ComplexMatrix reconstruct() const {
    return leftVectors * singularValues.asDiagonal() * rightVectors.adjoint();
  }
};

inline CompactSvd compactSvd(const ComplexMatrix& a, double tol = kDefaultRankTol) {
  if (!(tol > 0.0)) {
    throw std::invalid_argument("compactSvd: tol must be positive");
  }
  detail::requireFinite(a, "compactSvd");
  Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) {
    throw SvdError("compactSvd: Jacobi SVD failed to converge on a " +
                   std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                   " matrix (exhausted the solver's internal sweep limit)");
  }

  const RealVector& all = svd.singularValues();
  const double cutoff = all.size() > 0 ? tol * all(0) : 0.0;
  Index r = 0;
  while (r < all.size() && all(r) > cutoff && all(r) > 0.0) ++r;

  CompactSvd out;
  out.rank = r;
  out.singularValues = all.head(r);
  out.leftVectors = svd.matrixU().leftCols(r);
  out.rightVectors = svd.matrixV().leftCols(r);

  for (Index j = 0; j < r; ++j) {
    Index imax = 0;
    out.rightVectors.col(j).cwiseAbs().maxCoeff(&imax);
    const Complex pivot = out.rightVectors(imax, j);
    if (std::abs(pivot) > 0.0) {
      const Complex rot = std::conj(pivot) / std::abs(pivot);
      out.rightVectors.col(j) *= rot;
      out.leftVectors.col(j) *= rot;
    }
  }
  return out;
}

/// Moore-Penrose pseudoinverse via the compact SVD; singular values below
/// tol * sigma_max are treated as exact zeros.
inline ComplexMatrix pinv(const ComplexMatrix& a, double tol = kDefaultRankTol) {
  const CompactSvd svd = compactSvd(a, tol);
  if (svd.rank == 0) {
    return ComplexMatrix::Zero(a.cols(), a.rows());
  }
  return svd.rightVectors * svd.singularValues.cwiseInverse().asDiagonal() *
         svd.leftVectors.adjoint();
}

/// Largest singular value; 0 for the zero matrix.
inline double largestSingular(const ComplexMatrix& a) {
  detail::requireFinite(a, "largestSingular");
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  if (svd.info() != Eigen::Success) {
    throw SvdError("largestSingular: SVD failed to converge");
  }
  return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
}

/// All singular values, descending (including numerical zeros).
inline RealVector singularValues(const ComplexMatrix& a) {
  detail::requireFinite(a, "singularValues");
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  if (svd.info() != Eigen::Success) {
    throw SvdError("singularValues: SVD failed to converge");
  }
  return svd.singularValues();
}

/// Numerical rank: count of singular values above tol * sigma_max.
inline Index numericalRank(const ComplexMatrix& a, double tol = kDefaultRankTol) {
  return compactSvd(a, tol).rank;
}

}  // namespace skg
