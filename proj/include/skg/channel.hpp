// SPDX-License-Identifier: Apache-2.0
//
// Narrow-band geometric channels and IRS-cascaded legitimate/wiretap links.
// Direction convention: G_ab (the channel from a to b) is N_b x N_a, so a
// received block is G_ab * (transmitted block).
#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "skg/linalg.hpp"
#include "skg/sampling.hpp"

namespace skg {

struct ArrayGeometry {
  enum class Kind { Ula, Upa };

  Kind kind = Kind::Ula;
  Index x = 1;            // ULA keeps x = 1
  Index y = 1;
  double spacing = 0.5;   // antenna spacing d
  double wavelength = 1.0;

  static ArrayGeometry ula(Index n, double wavelength = 1.0) {
    // d = lambda/2 unless overridden.
    return {Kind::Ula, 1, n, wavelength / 2.0, wavelength};
  }
  static ArrayGeometry upa(Index x, Index y, double wavelength = 1.0) {
    return {Kind::Upa, x, y, wavelength / 2.0, wavelength};
  }

  Index count() const { return x * y; }

  void validate() const {
    if (x < 1 || y < 1) throw std::invalid_argument("ArrayGeometry: empty array");
    if (!(spacing > 0.0) || !(wavelength > 0.0)) {
      throw std::invalid_argument("ArrayGeometry: spacing and wavelength must be positive");
    }
  }
};

struct PathParams {
  Complex gain;          // g_l
  double aoaAzimuth = 0.0;
  double aoaElevation = 0.0;
  double aodAzimuth = 0.0;
  double aodElevation = 0.0;
};

/// Array response f(azimuth, elevation): the x-axis progression (phase step
/// u = 2 pi d cos(elevation) / lambda) Kronecker the y-axis progression
/// (v = 2 pi d sin(elevation) sin(azimuth) / lambda). Every entry has unit
/// magnitude.
inline ComplexVector arrayResponse(const ArrayGeometry& geom, double azimuth,
                                   double elevation) {
  geom.validate();
  constexpr double twoPi = 2.0 * std::numbers::pi;
  const double u = twoPi * geom.spacing * std::cos(elevation) / geom.wavelength;
  const double v = twoPi * geom.spacing * std::sin(elevation) * std::sin(azimuth) /
                   geom.wavelength;
  ComplexVector fx(geom.x), fy(geom.y);
  for (Index i = 0; i < geom.x; ++i) fx(i) = std::polar(1.0, u * static_cast<double>(i));
  for (Index i = 0; i < geom.y; ++i) fy(i) = std::polar(1.0, v * static_cast<double>(i));
  return ComplexVector(kron(fx, fy));
}

struct DirectChannel {
  ComplexMatrix matrix;   // N_rx x N_tx
  double pathLoss = 1.0;
  std::vector<PathParams> paths;
};

/// Sum of per-path rank-one terms:
///   G = sqrt(N_tx * N_rx / pathLoss) * sum_l g_l f_rx(aoa_l) f_tx(aod_l)^H.
inline DirectChannel geometricChannel(const ArrayGeometry& txGeom,
                                      const ArrayGeometry& rxGeom,
                                      std::vector<PathParams> paths, double pathLoss) {
  if (!(pathLoss > 0.0)) throw std::invalid_argument("geometricChannel: path loss must be positive");
  if (paths.empty()) throw std::invalid_argument("geometricChannel: needs at least one path");
  const double scale = std::sqrt(static_cast<double>(txGeom.count()) *
                                 static_cast<double>(rxGeom.count()) / pathLoss);
  ComplexMatrix g = ComplexMatrix::Zero(rxGeom.count(), txGeom.count());
  for (const PathParams& p : paths) {
    const ComplexVector rx = arrayResponse(rxGeom, p.aoaAzimuth, p.aoaElevation);
    const ComplexVector tx = arrayResponse(txGeom, p.aodAzimuth, p.aodElevation);
    g.noalias() += p.gain * rx * tx.adjoint();
  }
  g *= scale;
  return DirectChannel{std::move(g), pathLoss, std::move(paths)};
}

/// Path statistics for random channel draws: L uniform on [countMin, countMax],
/// LoS gain 1, NLoS gains complex Gaussian with per-part variance 1/2, all
/// angles uniform on [0, 2 pi). ULA endpoints use the degenerate elevation
/// pi/2 form of the response.
struct PathStats {
  int countMin = 1;
  int countMax = 10;
  double pathLoss = 1.0;
};

inline DirectChannel randomGeometricChannel(const ArrayGeometry& txGeom,
                                            const ArrayGeometry& rxGeom,
                                            const PathStats& stats, RngStream& rng) {
  constexpr double twoPi = 2.0 * std::numbers::pi;
  const int span = stats.countMax - stats.countMin + 1;
  if (span < 1 || stats.countMin < 1) {
    throw std::invalid_argument("randomGeometricChannel: bad path-count range");
  }
  const int npaths = stats.countMin + static_cast<int>(rng.below(span));
  constexpr double halfPi = std::numbers::pi / 2.0;
  std::vector<PathParams> paths(npaths);
  for (int l = 0; l < npaths; ++l) {
    PathParams& p = paths[l];
    p.gain = l == 0 ? Complex(1.0, 0.0) : std::sqrt(0.5) * rng.complexGaussian();
    p.aoaAzimuth = twoPi * rng.uniform();
    p.aoaElevation = rxGeom.kind == ArrayGeometry::Kind::Ula ? halfPi : twoPi * rng.uniform();
    p.aodAzimuth = twoPi * rng.uniform();
    p.aodElevation = txGeom.kind == ArrayGeometry::Kind::Ula ? halfPi : twoPi * rng.uniform();
  }
  return geometricChannel(txGeom, rxGeom, std::move(paths), stats.pathLoss);
}

/// Static direct channels plus the current IRS phase vector. The direct
/// channels stay fixed across coherence rounds; only `irs` is redrawn.
struct ChannelSet {
  DirectChannel aliceToIrs;   // G_AR: N_R x N_A
  DirectChannel irsToBob;     // G_RB: N_B x N_R
  DirectChannel aliceToBob;   // G_AB: N_B x N_A
  std::vector<std::pair<DirectChannel, DirectChannel>> eves;  // (G_RE_m, G_AE_m)
  IrsPhaseVector irs;

  Index aliceAntennas() const { return aliceToIrs.matrix.cols(); }
  Index bobAntennas() const { return irsToBob.matrix.rows(); }
  Index irsElements() const { return aliceToIrs.matrix.rows(); }
  Index eveAntennas() const { return eves.empty() ? 0 : eves.front().first.matrix.rows(); }
  std::size_t eveCount() const { return eves.size(); }

  void validate() const {
    const Index nr = irsElements();
    if (irsToBob.matrix.cols() != nr || irs.size() != nr) {
      throw std::invalid_argument("ChannelSet: IRS dimensions inconsistent");
    }
    if (aliceToBob.matrix.cols() != aliceAntennas() ||
        aliceToBob.matrix.rows() != bobAntennas()) {
      throw std::invalid_argument("ChannelSet: direct Alice-Bob channel dimensions inconsistent");
    }
    for (const auto& [gRe, gAe] : eves) {
      if (gRe.matrix.cols() != nr || gAe.matrix.cols() != aliceAntennas() ||
          gRe.matrix.rows() != gAe.matrix.rows()) {
        throw std::invalid_argument("ChannelSet: eavesdropper channel dimensions inconsistent");
      }
    }
  }
};

/// H_AB = G_RB diag(w) G_AR + G_AB, and the reciprocal H_BA = H_AB^H.
inline std::pair<ComplexMatrix, ComplexMatrix> cascadedChannel(const ChannelSet& set) {
  set.validate();
  ComplexMatrix hAb = set.irsToBob.matrix * set.irs.weights().asDiagonal() *
                          set.aliceToIrs.matrix +
                      set.aliceToBob.matrix;
  ComplexMatrix hBa = hAb.adjoint();
  return {std::move(hAb), std::move(hBa)};
}

/// H_AE_m = G_RE_m diag(w) G_AR + G_AE_m (m is zero-based).
inline ComplexMatrix eveChannel(const ChannelSet& set, std::size_t m) {
  if (m >= set.eves.size()) {
    throw std::out_of_range("eveChannel: eavesdropper index out of range");
  }
  const auto& [gRe, gAe] = set.eves[m];
  return gRe.matrix * set.irs.weights().asDiagonal() * set.aliceToIrs.matrix + gAe.matrix;
}

/// Row-stacked wiretap channel [H_AE_1; ...; H_AE_M] seen by colluded Eves.
inline ComplexMatrix stackedEveChannel(const ChannelSet& set) {
  const Index ne = set.eveAntennas();
  ComplexMatrix h(static_cast<Index>(set.eves.size()) * ne, set.aliceAntennas());
  for (std::size_t m = 0; m < set.eves.size(); ++m) {
    h.middleRows(static_cast<Index>(m) * ne, ne) = eveChannel(set, m);
  }
  return h;
}

/// Dimensions for a full random scenario draw.
struct ScenarioDims {
  Index aliceAntennas = 4;
  Index bobAntennas = 4;
  Index eveAntennas = 4;
  Index irsX = 2;
  Index irsY = 4;
  std::size_t eveCount = 1;
};

/// Draws all static direct channels plus an initial IRS phase.
inline ChannelSet randomChannelSet(const ScenarioDims& dims, const PathStats& stats,
                                   const PhaseAlphabet& alphabet, RngStream& rng) {
  const ArrayGeometry alice = ArrayGeometry::ula(dims.aliceAntennas);
  const ArrayGeometry bob = ArrayGeometry::ula(dims.bobAntennas);
  const ArrayGeometry eve = ArrayGeometry::ula(dims.eveAntennas);
  const ArrayGeometry irs = ArrayGeometry::upa(dims.irsX, dims.irsY);

  ChannelSet set;
  set.aliceToIrs = randomGeometricChannel(alice, irs, stats, rng);
  set.irsToBob = randomGeometricChannel(irs, bob, stats, rng);
  set.aliceToBob = randomGeometricChannel(alice, bob, stats, rng);
  set.eves.reserve(dims.eveCount);
  for (std::size_t m = 0; m < dims.eveCount; ++m) {
    DirectChannel gRe = randomGeometricChannel(irs, eve, stats, rng);
    DirectChannel gAe = randomGeometricChannel(alice, eve, stats, rng);
    set.eves.emplace_back(std::move(gRe), std::move(gAe));
  }
  set.irs = sampleIrsPhase(irs.count(), alphabet, rng);
  set.validate();
  return set;
}

}  // namespace skg
