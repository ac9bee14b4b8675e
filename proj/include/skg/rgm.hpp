// SPDX-License-Identifier: Apache-2.0
//
// Random-Gaussian-matrix key generation: per-coherence-round probe exchange,
// largest-singular-value extraction at both ends, quantile quantization with
// Gray labels and guard-band censoring, and key-agreement scoring.
//
// Probe matrices are drawn inside the round and never escape it: observers
// only ever see received blocks, so the secret transmit matrices cannot leak
// through any public type.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

#include "skg/channel.hpp"
#include "skg/linalg.hpp"
#include "skg/sampling.hpp"

namespace skg {

/// Secret probe block X (N x D) with its variance profile.
struct ProbeMatrix {
  ComplexMatrix matrix;
  VarianceProfile profile;

  static ProbeMatrix draw(const VarianceProfile& profile, RngStream& rng) {
    return ProbeMatrix{complexGaussianMatrix(profile, rng), profile};
  }
};

/// What one coherence round leaves behind at the legitimate ends.
struct SingularObservation {
  double sigmaA = 0.0;  // sigma_max(H_BA X_B + N_A)
  double sigmaB = 0.0;  // sigma_max(H_AB X_A + N_B)
  std::int64_t roundIndex = 0;
  IrsPhaseVector irs;
};

/// One round at the current IRS phase of `set`: both directions draw fresh
/// probes and fresh noise.
inline SingularObservation rgmRound(const ChannelSet& set, const VarianceProfile& profileA,
                                    const VarianceProfile& profileB, double noiseVar,
                                    RngStream& rng) {
  if (profileA.rows() != set.aliceAntennas() || profileB.rows() != set.bobAntennas()) {
    throw std::invalid_argument("rgmRound: probe profile rows must match antenna counts");
  }
  const auto [hAb, hBa] = cascadedChannel(set);
  const ProbeMatrix xA = ProbeMatrix::draw(profileA, rng);
  const ProbeMatrix xB = ProbeMatrix::draw(profileB, rng);

  SingularObservation obs;
  obs.irs = set.irs;
  obs.sigmaA = largestSingular(
      hBa * xB.matrix + noiseMatrix(hBa.rows(), xB.matrix.cols(), noiseVar, rng));
  obs.sigmaB = largestSingular(
      hAb * xA.matrix + noiseMatrix(hAb.rows(), xA.matrix.cols(), noiseVar, rng));
  return obs;
}

/// T rounds over a static channel set: each round redraws the IRS phase and
/// runs rgmRound with a stream derived from (roundIndex), so rounds can be
/// evaluated in any order and merged by index.
inline std::vector<SingularObservation> runProtocol(const ChannelSet& base, std::int64_t rounds,
                                                    const VarianceProfile& profileA,
                                                    const VarianceProfile& profileB,
                                                    double noiseVar,
                                                    const PhaseAlphabet& alphabet,
                                                    const RngStream& protocolStream) {
  if (rounds < 1) throw std::invalid_argument("runProtocol: rounds must be >= 1");
  std::vector<SingularObservation> out(static_cast<std::size_t>(rounds));
  ChannelSet set = base;
  for (std::int64_t t = 0; t < rounds; ++t) {
    RngStream roundRng = protocolStream.substream(static_cast<std::uint64_t>(t));
    set.irs = sampleIrsPhase(set.irsElements(), alphabet, roundRng);
    SingularObservation obs = rgmRound(set, profileA, profileB, noiseVar, roundRng);
    obs.roundIndex = t;
    out[static_cast<std::size_t>(t)] = std::move(obs);
  }
  return out;
}

/// Published quantizer: the full edge vector (outer data edges included) of
/// 2^bits equal-probability bins. Censoring is evaluated against these edges
/// only, so two parties exchanging them censor identically.
struct QuantizerEdges {
  std::vector<double> edges;  // 2^bits + 1 ascending values
  int bitsPerSample = 0;

  std::size_t binCount() const { return edges.empty() ? 0 : edges.size() - 1; }
};

/// Gray-coded bin labels of the uncensored rounds, concatenated in round
/// order: bits.size() == (roundCount - censoredRounds.size()) * bitsPerSample.
struct KeyBitstream {
  std::vector<std::uint8_t> bits;
  std::set<std::size_t> censoredRounds;
  std::size_t bitsPerSample = 0;
  std::size_t roundCount = 0;
};

namespace detail {

/// Linear-interpolation empirical quantile of a pre-sorted sample.
inline double sortedQuantile(const std::vector<double>& sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace detail

inline QuantizerEdges quantileEdges(std::span<const double> values, int bitsPerSample) {
  if (bitsPerSample < 1) throw std::invalid_argument("quantileEdges: bits must be >= 1");
  if (values.empty()) throw std::invalid_argument("quantileEdges: empty input");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());

  const std::size_t bins = std::size_t{1} << bitsPerSample;
  QuantizerEdges q;
  q.bitsPerSample = bitsPerSample;
  q.edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) {
    q.edges[i] = detail::sortedQuantile(sorted, static_cast<double>(i) / static_cast<double>(bins));
  }
  for (std::size_t i = 0; i + 1 < q.edges.size(); ++i) {
    if (!(q.edges[i + 1] > q.edges[i])) {
      throw std::invalid_argument("quantileEdges: degenerate input, empty quantile bin");
    }
  }
  return q;
}

/// Assigns each value a bin under the published edges. Values closer than
/// guardRatio * (local bin width) to an interior edge are censored: the round
/// index is recorded and no bits are emitted for it. The outermost edges
/// never censor. Everything here depends only on the published edges, so two
/// parties applying the same edges censor identically.
inline KeyBitstream quantizeWithEdges(std::span<const double> values, const QuantizerEdges& q,
                                      double guardRatio) {
  if (!(guardRatio >= 0.0 && guardRatio < 0.5)) {
    throw std::invalid_argument("quantize: guard ratio must lie in [0, 0.5)");
  }
  const std::size_t bins = q.binCount();
  if (bins < 2) throw std::invalid_argument("quantize: need at least one bit");

  KeyBitstream out;
  out.bitsPerSample = static_cast<std::size_t>(q.bitsPerSample);
  out.roundCount = values.size();
  out.bits.reserve(values.size() * out.bitsPerSample);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    // Linear scan over interior edges; bin counts are tiny (2^b).
    std::size_t bin = 0;
    while (bin + 1 < bins && v >= q.edges[bin + 1]) ++bin;

    const double width = q.edges[bin + 1] - q.edges[bin];
    const bool nearLower = bin > 0 && v - q.edges[bin] < guardRatio * width;
    const bool nearUpper = bin + 1 < bins && q.edges[bin + 1] - v < guardRatio * width;
    if (nearLower || nearUpper) {
      out.censoredRounds.insert(i);
      continue;
    }

    const auto gray = static_cast<std::uint32_t>(bin ^ (bin >> 1));
    for (std::size_t b = out.bitsPerSample; b-- > 0;) {
      out.bits.push_back(static_cast<std::uint8_t>((gray >> b) & 1u));
    }
  }
  if (out.censoredRounds.size() == values.size()) {
    throw std::invalid_argument("quantize: every sample censored, degenerate input");
  }
  return out;
}

/// Equal-probability quantizer driven by the sequence's own empirical
/// quantiles.
inline KeyBitstream quantize(std::span<const double> values, int bitsPerSample,
                             double guardRatio) {
  return quantizeWithEdges(values, quantileEdges(values, bitsPerSample), guardRatio);
}

/// Fraction of disagreeing bits over rounds neither side censored.
inline double keyDisagreementRate(const KeyBitstream& a, const KeyBitstream& b) {
  if (a.roundCount != b.roundCount || a.bitsPerSample != b.bitsPerSample) {
    throw std::invalid_argument("keyDisagreementRate: stream shapes differ");
  }
  std::size_t mismatches = 0;
  std::size_t kept = 0;
  std::size_t cursorA = 0, cursorB = 0;
  for (std::size_t r = 0; r < a.roundCount; ++r) {
    const bool inA = a.censoredRounds.count(r) == 0;
    const bool inB = b.censoredRounds.count(r) == 0;
    if (inA && inB) {
      ++kept;
      for (std::size_t k = 0; k < a.bitsPerSample; ++k) {
        if (a.bits[cursorA + k] != b.bits[cursorB + k]) ++mismatches;
      }
    }
    if (inA) cursorA += a.bitsPerSample;
    if (inB) cursorB += b.bitsPerSample;
  }
  if (kept == 0) {
    throw std::invalid_argument("keyDisagreementRate: no common uncensored rounds");
  }
  return static_cast<double>(mismatches) / static_cast<double>(kept * a.bitsPerSample);
}

}  // namespace skg
