// SPDX-License-Identifier: Apache-2.0
//
// Colluded-eavesdropper attack on the pilot baseline: per-Eve linear systems
// in the IRS phase vector, stacked least squares, and channel reconstruction
// scoring. Worst-case knowledge model: Eves know every direct channel and
// both pilots.
#pragma once

#include <stdexcept>
#include <vector>

#include "skg/channel.hpp"
#include "skg/linalg.hpp"
#include "skg/pilot.hpp"

namespace skg {

/// What Eve m retains from one pilot transmission: the direct-path-removed
/// received block Z_m = Y_m - G_AE_m P_A and the sensing matrix Psi_m with
/// vec(G_RE_m diag(w) G_AR P_A) = Psi_m w.
struct EveObservation {
  ComplexMatrix z;    // N_E x L_A
  ComplexMatrix psi;  // (L_A * N_E) x N_R
};

/// Psi_m: L_A stacked blocks, block l = G_RE_m diag(G_AR p_l).
inline ComplexMatrix buildPsi(const ComplexMatrix& gRe, const ComplexMatrix& gAr,
                              const PilotMatrix& pilotA) {
  if (gRe.cols() != gAr.rows() || gAr.cols() != pilotA.rows()) {
    throw std::invalid_argument("buildPsi: dimension mismatch");
  }
  const Index ne = gRe.rows();
  const Index nr = gRe.cols();
  const Index la = pilotA.cols();
  ComplexMatrix psi(la * ne, nr);
  for (Index l = 0; l < la; ++l) {
    const ComplexVector steered = gAr * pilotA.matrix().col(l);
    psi.middleRows(l * ne, ne) = gRe * steered.asDiagonal();
  }
  return psi;
}

/// Simulates what Eve m receives while Alice's pilot is on the air and strips
/// the known direct term.
inline EveObservation observeEve(const ChannelSet& set, std::size_t m,
                                 const PilotMatrix& pilotA, double noiseVar,
                                 RngStream& rng) {
  const ComplexMatrix hAe = eveChannel(set, m);
  const ComplexMatrix y = receivedPilotSignal(hAe, pilotA, noiseVar, rng);
  const auto& [gRe, gAe] = set.eves[m];
  EveObservation obs;
  obs.z = y - gAe.matrix * pilotA.matrix();
  obs.psi = buildPsi(gRe.matrix, set.aliceToIrs.matrix, pilotA);
  return obs;
}

/// Raw least-squares estimate of the IRS phase vector from the stacked
/// observations; no unit-modulus projection is applied.
inline ComplexVector estimateW(const std::vector<EveObservation>& observations,
                               double tol = kDefaultRankTol) {
  if (observations.empty()) {
    throw std::invalid_argument("estimateW: needs at least one observation");
  }
  const Index nr = observations.front().psi.cols();
  Index totalRows = 0;
  for (const EveObservation& o : observations) {
    if (o.psi.cols() != nr) throw std::invalid_argument("estimateW: inconsistent Psi widths");
    totalRows += o.psi.rows();
  }
  ComplexMatrix psi(totalRows, nr);
  ComplexVector z(totalRows);
  Index at = 0;
  for (const EveObservation& o : observations) {
    psi.middleRows(at, o.psi.rows()) = o.psi;
    z.segment(at, o.psi.rows()) = vec(o.z);
    at += o.psi.rows();
  }
  return pinv(psi, tol) * z;
}

/// Optional ablation post-step: snap each entry to unit modulus.
inline ComplexVector projectUnitModulus(const ComplexVector& w) {
  ComplexVector out(w.size());
  for (Index i = 0; i < w.size(); ++i) {
    const double mag = std::abs(w(i));
    out(i) = mag > 0.0 ? w(i) / mag : Complex(1.0, 0.0);
  }
  return out;
}

/// Eve's reconstruction of the legitimate channel from an estimated phase
/// vector and the known direct channels.
inline ComplexMatrix reconstructLegitimate(const ComplexVector& wHat, const ChannelSet& set) {
  if (wHat.size() != set.irsElements()) {
    throw std::invalid_argument("reconstructLegitimate: phase vector length mismatch");
  }
  return set.irsToBob.matrix * wHat.asDiagonal() * set.aliceToIrs.matrix +
         set.aliceToBob.matrix;
}

/// Normalized root-mean-square error |E - R|_F / |R|_F.
inline double nrmse(const ComplexMatrix& estimate, const ComplexMatrix& reference) {
  if (estimate.rows() != reference.rows() || estimate.cols() != reference.cols()) {
    throw std::invalid_argument("nrmse: shape mismatch");
  }
  const double refNorm = reference.norm();
  if (refNorm == 0.0) throw std::invalid_argument("nrmse: zero reference");
  return (estimate - reference).norm() / refNorm;
}

}  // namespace skg
