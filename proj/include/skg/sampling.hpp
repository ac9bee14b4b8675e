// SPDX-License-Identifier: Apache-2.0
//
// Randomness: seeded counter-derived streams, complex Gaussian matrices with
// per-entry variance profiles, IRS phase vectors and noise matrices.
//
// Convention used throughout: a complex Gaussian entry with parameter d^2 has
// independent real and imaginary parts, each N(0, d^2), so E|x|^2 = 2 d^2.
// This is the convention under which E(X X^H) = 2 diag(row sums of d^2).
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <utility>

#include "skg/linalg.hpp"

namespace skg {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Order-sensitive combiner for deriving child stream ids.
inline std::uint64_t mixIds(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a ^ (0x9E3779B97F4A7C15ULL + (b << 6) + (b >> 2) + b));
}

}  // namespace detail

/// Deterministic random stream identified by (seed, streamId). The same pair
/// reproduces the identical draw sequence regardless of scheduling, so
/// Monte-Carlo trials can derive one stream per (trial, role) and run in any
/// order. Gaussian draws use an explicit Box-Muller transform rather than
/// std::normal_distribution to keep the byte sequence implementation-defined
/// only by this header.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t streamId = 0)
      : seed_(seed), streamId_(streamId),
        engine_(detail::splitmix64(seed ^ detail::splitmix64(streamId))) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t streamId() const { return streamId_; }

  /// Child stream with an id derived from this stream's id and `childId`.
  RngStream substream(std::uint64_t childId) const {
    return RngStream(seed_, detail::mixIds(streamId_, childId));
  }

  std::uint64_t nextU64() { return engine_(); }

  /// Uniform double in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Integer uniform on {0, ..., n-1} via rejection-free 128-bit scaling.
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)) % n;
  }

  /// Independent pair of standard normals (one Box-Muller transform).
  std::pair<double, double> gaussianPair() {
    double u1 = uniform();
    if (u1 < 0x1.0p-53) u1 = 0x1.0p-53;
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
  }

  /// Standard normal (second Box-Muller output is discarded).
  double gaussian() { return gaussianPair().first; }

  /// Complex sample with unit-variance real and imaginary parts.
  Complex complexGaussian() {
    const auto [re, im] = gaussianPair();
    return Complex(re, im);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t streamId_;
  std::mt19937_64 engine_;
};

/// Per-entry variance profile d^2_{m,n} with every row summing to the same
/// power constant C.
class VarianceProfile {
 public:
  VarianceProfile(RealMatrix deltaSq, double rowSum)
      : deltaSq_(std::move(deltaSq)), rowSum_(rowSum) {
    if (deltaSq_.rows() < 1 || deltaSq_.cols() < 1) {
      throw std::invalid_argument("VarianceProfile: empty shape");
    }
    // rowSum = 0 is allowed as the degenerate all-zero profile.
    if (!(rowSum_ >= 0.0)) {
      throw std::invalid_argument("VarianceProfile: row-sum constant must be nonnegative");
    }
    if ((deltaSq_.array() < 0.0).any()) {
      throw std::invalid_argument("VarianceProfile: negative variance entry");
    }
    for (Index m = 0; m < deltaSq_.rows(); ++m) {
      // Kahan summation: the 1e-12 contract must not drown in accumulation
      // error for very long rows.
      double s = 0.0, comp = 0.0;
      for (Index n = 0; n < deltaSq_.cols(); ++n) {
        const double y = deltaSq_(m, n) - comp;
        const double t = s + y;
        comp = (t - s) - y;
        s = t;
      }
      if (std::abs(s - rowSum_) > 1e-12 * std::max(rowSum_, 1e-300)) {
        throw std::invalid_argument("VarianceProfile: row " + std::to_string(m) +
                                    " sums to " + std::to_string(s) +
                                    ", expected " + std::to_string(rowSum_));
      }
    }
  }

  static VarianceProfile uniform(Index rows, Index cols, double rowSum) {
    return VarianceProfile(
        RealMatrix::Constant(rows, cols, rowSum / static_cast<double>(cols)), rowSum);
  }

  /// Random positive profile, each row rescaled to sum to rowSum.
  static VarianceProfile randomNonuniform(Index rows, Index cols, double rowSum,
                                          RngStream& rng) {
    RealMatrix d(rows, cols);
    for (Index n = 0; n < cols; ++n) {
      for (Index m = 0; m < rows; ++m) {
        d(m, n) = 0.05 + rng.uniform();
      }
    }
    for (Index m = 0; m < rows; ++m) {
      d.row(m) *= rowSum / d.row(m).sum();
    }
    return VarianceProfile(std::move(d), rowSum);
  }

  const RealMatrix& deltaSq() const { return deltaSq_; }
  double rowSum() const { return rowSum_; }
  Index rows() const { return deltaSq_.rows(); }
  Index cols() const { return deltaSq_.cols(); }

 private:
  RealMatrix deltaSq_;
  double rowSum_;
};

/// Complex Gaussian matrix: entry (m,n) has real/imag parts each
/// N(0, d^2_{m,n}). Entries are drawn column-major.
inline ComplexMatrix complexGaussianMatrix(const VarianceProfile& profile, RngStream& rng) {
  ComplexMatrix x(profile.rows(), profile.cols());
  for (Index n = 0; n < profile.cols(); ++n) {
    for (Index m = 0; m < profile.rows(); ++m) {
      x(m, n) = std::sqrt(profile.deltaSq()(m, n)) * rng.complexGaussian();
    }
  }
  return x;
}

/// IRS phase controller: unit-modulus weights w_i = exp(j theta_i).
struct IrsPhaseVector {
  RealVector theta;  // each in [0, 2*pi)

  Index size() const { return theta.size(); }

  ComplexVector weights() const {
    ComplexVector w(theta.size());
    for (Index i = 0; i < theta.size(); ++i) {
      w(i) = std::polar(1.0, theta(i));
    }
    return w;
  }
};

/// Phase alphabet: continuous over [0, 2*pi), or the K evenly spaced points
/// {2*pi*k/K}. K = 1 is permitted (degenerate single-symbol alphabet).
struct PhaseAlphabet {
  bool isDiscrete = false;
  int levels = 0;

  static PhaseAlphabet continuous() { return {false, 0}; }
  static PhaseAlphabet discrete(int k) {
    if (k < 1) throw std::invalid_argument("PhaseAlphabet: K must be >= 1");
    return {true, k};
  }

  /// Number of distinct phase vectors of length n (discrete alphabets only).
  double stateCount(Index n) const {
    return std::pow(static_cast<double>(levels), static_cast<double>(n));
  }
};

inline IrsPhaseVector sampleIrsPhase(Index n, const PhaseAlphabet& alphabet, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("sampleIrsPhase: N_R must be >= 1");
  IrsPhaseVector out;
  out.theta.resize(n);
  constexpr double twoPi = 2.0 * std::numbers::pi;
  for (Index i = 0; i < n; ++i) {
    if (alphabet.isDiscrete) {
      out.theta(i) = twoPi * static_cast<double>(rng.below(alphabet.levels)) /
                     static_cast<double>(alphabet.levels);
    } else {
      out.theta(i) = twoPi * rng.uniform();
    }
  }
  return out;
}

/// i.i.d. noise matrix, real/imag parts each N(0, noiseVar) so E|n|^2 = 2*noiseVar.
inline ComplexMatrix noiseMatrix(Index rows, Index cols, double noiseVar, RngStream& rng) {
  if (noiseVar < 0.0) throw std::invalid_argument("noiseMatrix: negative variance");
  if (noiseVar == 0.0) return ComplexMatrix::Zero(rows, cols);
  const double scale = std::sqrt(noiseVar);
  ComplexMatrix n(rows, cols);
  for (Index c = 0; c < cols; ++c) {
    for (Index r = 0; r < rows; ++r) {
      n(r, c) = scale * rng.complexGaussian();
    }
  }
  return n;
}

}  // namespace skg
