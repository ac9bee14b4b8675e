// SPDX-License-Identifier: Apache-2.0
//
// Mutual-information machinery: plug-in histogram and Kraskov-style
// nearest-neighbor estimators, the Gaussian-mixture numeric MI over IRS
// phases, the Monte-Carlo leakage upper bound I(Z_E; w), and the secret-key
// rate lower bound assembled from them.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "skg/channel.hpp"
#include "skg/linalg.hpp"
#include "skg/sampling.hpp"
#include "skg/theory.hpp"

namespace skg {

enum class MiMethod { Histogram, Knn, MixtureNumeric, McLeakage };

/// A mutual-information estimate in bits. Raw values can be slightly negative
/// from estimator noise; they are reported as-is with a diagnostics flag, not
/// clamped.
struct MiEstimate {
  double bits = 0.0;
  MiMethod method = MiMethod::Histogram;
  std::size_t sampleCount = 0;
  std::map<std::string, double> diagnostics;

  double stderrBits() const {
    const auto it = diagnostics.find("stderr");
    return it == diagnostics.end() ? 0.0 : it->second;
  }
};

struct SkrEstimate {
  MiEstimate keyMi;
  MiEstimate leakage;    // the larger of the two directions
  double skrRaw = 0.0;   // keyMi - leakage, sign preserved
  double skrClamped = 0.0;
};

namespace detail {

inline constexpr double kLn2 = 0.6931471805599453;

inline double digamma(double x) {
  double acc = 0.0;
  while (x < 6.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  return acc + std::log(x) - 0.5 * inv -
         inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 / 252.0));
}

inline double logSumExp(std::span<const double> v) {
  const double m = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

/// Equal-frequency bin index per sample via the rank transform.
inline std::vector<int> rankBins(std::span<const double> x, int bins) {
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<int> bin(n);
  for (std::size_t r = 0; r < n; ++r) {
    bin[order[r]] = static_cast<int>((r * static_cast<std::size_t>(bins)) / n);
  }
  return bin;
}

}  // namespace detail

/// Plug-in MI on equal-frequency marginal binning, in bits. The first-order
/// bias of the plug-in estimator, (bins-1)^2 / (2 N ln 2), is reported as a
/// diagnostic.
inline MiEstimate miHistogram(std::span<const double> x, std::span<const double> y, int bins) {
  if (x.size() != y.size()) throw std::invalid_argument("miHistogram: length mismatch");
  if (bins < 2) throw std::invalid_argument("miHistogram: need at least 2 bins");
  const std::size_t n = x.size();
  if (n < static_cast<std::size_t>(10 * bins)) {
    throw std::invalid_argument("miHistogram: need at least 10*bins samples");
  }
  const auto constant = [](std::span<const double> v) {
    return *std::max_element(v.begin(), v.end()) == *std::min_element(v.begin(), v.end());
  };
  if (constant(x) || constant(y)) {
    throw std::invalid_argument("miHistogram: constant sequence");
  }

  const std::vector<int> bx = detail::rankBins(x, bins);
  const std::vector<int> by = detail::rankBins(y, bins);
  RealMatrix joint = RealMatrix::Zero(bins, bins);
  for (std::size_t i = 0; i < n; ++i) joint(bx[i], by[i]) += 1.0;
  joint /= static_cast<double>(n);
  const RealVector px = joint.rowwise().sum();
  const RealVector py = joint.colwise().sum();

  double nats = 0.0;
  for (int i = 0; i < bins; ++i) {
    for (int j = 0; j < bins; ++j) {
      const double p = joint(i, j);
      if (p > 0.0) nats += p * std::log(p / (px(i) * py(j)));
    }
  }
  MiEstimate out;
  out.bits = nats / detail::kLn2;
  out.method = MiMethod::Histogram;
  out.sampleCount = n;
  out.diagnostics["bins"] = bins;
  out.diagnostics["bias_bound"] =
      static_cast<double>((bins - 1) * (bins - 1)) / (2.0 * static_cast<double>(n) * detail::kLn2);
  if (out.bits < 0.0) out.diagnostics["negative_raw"] = 1.0;
  return out;
}

/// Kraskov-Stoegbauer-Grassberger estimator (variant 1) with the max-norm in
/// each marginal space; rows of x and y are paired samples. Duplicate joint
/// points are broken by a deterministic jitter of amplitude 1e-12 times the
/// per-dimension range.
inline MiEstimate miKnn(RealMatrix x, RealMatrix y, int k) {
  if (x.rows() != y.rows()) throw std::invalid_argument("miKnn: sample count mismatch");
  const Index n = x.rows();
  if (k < 1) throw std::invalid_argument("miKnn: k must be >= 1");
  if (n <= 10 * k) throw std::invalid_argument("miKnn: need more than 10*k samples");

  const auto dedupe = [n](RealMatrix& m) {
    bool jittered = false;
    for (Index c = 0; c < m.cols(); ++c) {
      std::vector<double> col(m.col(c).data(), m.col(c).data() + n);
      std::sort(col.begin(), col.end());
      if (std::adjacent_find(col.begin(), col.end()) == col.end()) continue;
      const double range = std::max(col.back() - col.front(), 1.0);
      RngStream jitterRng(0x6a69747465727373ULL, static_cast<std::uint64_t>(c));
      for (Index i = 0; i < n; ++i) {
        m(i, c) += 1e-12 * range * (jitterRng.uniform() - 0.5);
      }
      jittered = true;
    }
    return jittered;
  };
  const bool jittered = dedupe(x) | dedupe(y);

  const auto blockDist = [](const RealMatrix& m, Index i, Index j) {
    return (m.row(i) - m.row(j)).cwiseAbs().maxCoeff();
  };

  double psiSum = 0.0;
  std::vector<double> dx(n), dy(n), dz(n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (j == i) continue;
      dx[j] = blockDist(x, i, j);
      dy[j] = blockDist(y, i, j);
      dz[j] = std::max(dx[j], dy[j]);
    }
    dx[i] = dy[i] = dz[i] = std::numeric_limits<double>::infinity();
    std::vector<double> sorted(dz);
    std::nth_element(sorted.begin(), sorted.begin() + (k - 1), sorted.end());
    const double eps = sorted[k - 1];  // distance to the k-th joint neighbor

    Index nx = 0, ny = 0;
    for (Index j = 0; j < n; ++j) {
      if (j == i) continue;
      if (dx[j] < eps) ++nx;
      if (dy[j] < eps) ++ny;
    }
    psiSum += detail::digamma(static_cast<double>(nx) + 1.0) +
              detail::digamma(static_cast<double>(ny) + 1.0);
  }

  const double nats = detail::digamma(k) + detail::digamma(static_cast<double>(n)) -
                      psiSum / static_cast<double>(n);
  MiEstimate out;
  out.bits = nats / detail::kLn2;
  out.method = MiMethod::Knn;
  out.sampleCount = static_cast<std::size_t>(n);
  out.diagnostics["k"] = k;
  out.diagnostics["jitter_applied"] = jittered ? 1.0 : 0.0;
  if (out.bits < 0.0) out.diagnostics["negative_raw"] = 1.0;
  return out;
}

inline MiEstimate miKnn(std::span<const double> x, std::span<const double> y, int k) {
  RealMatrix mx(static_cast<Index>(x.size()), 1);
  RealMatrix my(static_cast<Index>(y.size()), 1);
  for (std::size_t i = 0; i < x.size(); ++i) mx(static_cast<Index>(i), 0) = x[i];
  for (std::size_t i = 0; i < y.size(); ++i) my(static_cast<Index>(i), 0) = y[i];
  return miKnn(std::move(mx), std::move(my), k);
}

/// One Gaussian pair per IRS phase draw: the conditional laws of Alice's and
/// Bob's singular values given that phase.
struct MixtureComponent {
  GaussianApprox alice;
  GaussianApprox bob;
};

/// MI of the two-sided Gaussian mixture
///   p(a, b) = (1/K) sum_k N(a; alice_k) N(b; bob_k)
/// by trapezoid quadrature on a grid covering +-6 sigma around every
/// component, refined until successive estimates differ by less than quadTol.
inline MiEstimate miMixtureFromComponents(const std::vector<MixtureComponent>& components,
                                          double quadTol = 1e-6, Index maxGridPoints = 4096) {
  if (components.empty()) throw std::invalid_argument("miMixture: no components");
  for (const MixtureComponent& c : components) {
    if (!(c.alice.variance > 0.0) || !(c.bob.variance > 0.0)) {
      throw std::invalid_argument("miMixture: component with non-positive variance");
    }
  }

  const auto axisRange = [&](bool aliceSide) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const MixtureComponent& c : components) {
      const GaussianApprox& g = aliceSide ? c.alice : c.bob;
      const double sd = std::sqrt(g.variance);
      lo = std::min(lo, g.mean - 6.0 * sd);
      hi = std::max(hi, g.mean + 6.0 * sd);
    }
    return std::pair<double, double>(lo, hi);
  };
  const auto [loA, hiA] = axisRange(true);
  const auto [loB, hiB] = axisRange(false);
  const double weight = 1.0 / static_cast<double>(components.size());

  const auto evaluate = [&](Index grid, double* normA, double* normB) {
    const double ha = (hiA - loA) / static_cast<double>(grid - 1);
    const double hb = (hiB - loB) / static_cast<double>(grid - 1);
    const Index kComp = static_cast<Index>(components.size());
    RealMatrix phiA(grid, kComp), phiB(grid, kComp);
    for (Index k = 0; k < kComp; ++k) {
      const GaussianApprox& ga = components[static_cast<std::size_t>(k)].alice;
      const GaussianApprox& gb = components[static_cast<std::size_t>(k)].bob;
      const double na = 1.0 / std::sqrt(2.0 * std::numbers::pi * ga.variance);
      const double nb = 1.0 / std::sqrt(2.0 * std::numbers::pi * gb.variance);
      for (Index i = 0; i < grid; ++i) {
        const double a = loA + ha * static_cast<double>(i);
        const double b = loB + hb * static_cast<double>(i);
        phiA(i, k) = na * std::exp(-0.5 * (a - ga.mean) * (a - ga.mean) / ga.variance);
        phiB(i, k) = nb * std::exp(-0.5 * (b - gb.mean) * (b - gb.mean) / gb.variance);
      }
    }
    const RealVector pa = weight * phiA.rowwise().sum();
    const RealVector pb = weight * phiB.rowwise().sum();
    const auto trapW = [&](Index i, Index g) { return (i == 0 || i == g - 1) ? 0.5 : 1.0; };

    double nats = 0.0;
    RealVector rowJoint(grid);
    for (Index i = 0; i < grid; ++i) {
      rowJoint.noalias() = weight * (phiB * phiA.row(i).transpose());
      double rowAcc = 0.0;
      for (Index j = 0; j < grid; ++j) {
        const double p = rowJoint(j);
        if (p > 1e-300 && pa(i) > 0.0 && pb(j) > 0.0) {
          rowAcc += trapW(j, grid) * p * std::log(p / (pa(i) * pb(j)));
        }
      }
      nats += trapW(i, grid) * rowAcc * ha * hb;
    }
    if (normA) {
      *normA = 0.0;
      *normB = 0.0;
      for (Index i = 0; i < grid; ++i) {
        *normA += trapW(i, grid) * pa(i) * ha;
        *normB += trapW(i, grid) * pb(i) * hb;
      }
    }
    return nats / detail::kLn2;
  };

  Index grid = 128;
  double prev = evaluate(grid, nullptr, nullptr);
  while (true) {
    grid *= 2;
    double normA = 0.0, normB = 0.0;
    const double cur = evaluate(grid, &normA, &normB);
    const double delta = std::abs(cur - prev);
    if (delta < quadTol) {
      MiEstimate out;
      out.bits = cur;
      out.method = MiMethod::MixtureNumeric;
      out.sampleCount = components.size();
      out.diagnostics["grid"] = static_cast<double>(grid);
      out.diagnostics["quad_delta"] = delta;
      out.diagnostics["marginal_norm_a"] = normA;
      out.diagnostics["marginal_norm_b"] = normB;
      if (out.bits < 0.0) out.diagnostics["negative_raw"] = 1.0;
      return out;
    }
    if (grid >= maxGridPoints) {
      throw std::runtime_error("miMixture: quadrature did not converge, achieved |delta| = " +
                               std::to_string(delta) + " > tol " + std::to_string(quadTol));
    }
    prev = cur;
  }
}

/// Builds H_AB for a given IRS phase (static channels fixed elsewhere).
using ChannelFactory = std::function<ComplexMatrix(const IrsPhaseVector&)>;

/// Mixture MI over sampled IRS phases: one Gaussian-approximation component
/// per phase, conditional independence of the two sides given the phase.
inline MiEstimate miMixtureNumeric(const std::vector<IrsPhaseVector>& wSamples,
                                   const ChannelFactory& makeHab,
                                   const VarianceProfile& profileA,
                                   const VarianceProfile& profileB, double noiseVar,
                                   double quadTol = 1e-6) {
  if (wSamples.size() < 2) {
    throw std::invalid_argument("miMixtureNumeric: need at least 2 phase samples");
  }
  std::vector<MixtureComponent> comps;
  comps.reserve(wSamples.size());
  for (const IrsPhaseVector& w : wSamples) {
    const ComplexMatrix hAb = makeHab(w);
    const CompactSvd svd = compactSvd(hAb);
    if (svd.rank == 0) throw std::invalid_argument("miMixtureNumeric: zero channel");
    const double xi1 = svd.singularValues(0);
    MixtureComponent c;
    c.bob = prop2Moments(xi1, svd.rightVectors.col(0), profileA, noiseVar);
    c.alice = prop2Moments(xi1, svd.leftVectors.col(0), profileB, noiseVar);
    comps.push_back(c);
  }
  MiEstimate out = miMixtureFromComponents(comps, quadTol);
  out.sampleCount = wSamples.size();
  return out;
}

/// Settings for the Monte-Carlo evaluation of the leakage bound I(Z_E; w).
struct LeakageOptions {
  PhaseAlphabet alphabet = PhaseAlphabet::discrete(2);
  std::size_t outerSamples = 256;   // (w, X_A, N_E) draws scored
  std::size_t innerSamples = 0;     // 0: exact Gaussian marginal over X_A;
                                    // > 0: nested sampling with that many draws
  bool knownProbe = false;          // test mode: X_A pinned to knownProbeValue
  ComplexMatrix knownProbeValue;
  Index columnLimit = 0;            // > 0: score only the first columns of Z_E
  double targetStderr = 0.0;        // > 0: flag the estimate if not reached
  double maxStates = 1048576.0;     // refuse enumerations beyond this
};

namespace detail {

/// Per-column Cholesky factors of the conditional covariance of Z_E given one
/// phase state: cov(z_n | w) = 2 H(w) diag(d^2_{:,n}) H(w)^H + 2 eps^2 I.
/// Shared across identical profile columns (one factor for uniform profiles).
struct StateLikelihood {
  std::vector<Eigen::LLT<ComplexMatrix>> factors;  // one per distinct column class
  std::vector<double> logDetPi;                    // log det(pi * cov) per class
  std::vector<int> columnClass;                    // column -> class index

  static StateLikelihood build(const ComplexMatrix& h, const VarianceProfile& profile,
                               double noiseVar, Index columns) {
    StateLikelihood out;
    out.columnClass.resize(static_cast<std::size_t>(columns));
    std::vector<RealVector> classProfiles;
    for (Index n = 0; n < columns; ++n) {
      const RealVector col = profile.deltaSq().col(n);
      int found = -1;
      for (std::size_t c = 0; c < classProfiles.size(); ++c) {
        if ((classProfiles[c] - col).cwiseAbs().maxCoeff() == 0.0) {
          found = static_cast<int>(c);
          break;
        }
      }
      if (found < 0) {
        classProfiles.push_back(col);
        found = static_cast<int>(classProfiles.size()) - 1;
      }
      out.columnClass[static_cast<std::size_t>(n)] = found;
    }
    const Index rows = h.rows();
    for (const RealVector& col : classProfiles) {
      ComplexMatrix cov = 2.0 * h * col.asDiagonal() * h.adjoint();
      cov += 2.0 * noiseVar * ComplexMatrix::Identity(rows, rows);
      Eigen::LLT<ComplexMatrix> llt(cov);
      if (llt.info() != Eigen::Success) {
        throw std::runtime_error("leakage: conditional covariance not positive definite");
      }
      double logDet = 0.0;
      for (Index i = 0; i < rows; ++i) {
        logDet += 2.0 * std::log(llt.matrixL()(i, i).real());
      }
      out.logDetPi.push_back(logDet +
                             static_cast<double>(rows) * std::log(std::numbers::pi));
      out.factors.push_back(std::move(llt));
    }
    return out;
  }

  double logDensity(const ComplexMatrix& z) const {
    double acc = 0.0;
    for (Index n = 0; n < z.cols(); ++n) {
      const int c = columnClass[static_cast<std::size_t>(n)];
      const ComplexVector solved = factors[static_cast<std::size_t>(c)].solve(z.col(n));
      acc += -z.col(n).dot(solved).real() - logDetPi[static_cast<std::size_t>(c)];
    }
    return acc;
  }
};

}  // namespace detail

/// Upper bound on the key leakage: I(Z_E; w) for a discrete phase alphabet,
/// estimated by Monte Carlo over (w, X_A, N_E) draws. The conditional
/// likelihood p(Z_E | w') of Eq.-(51) form is evaluated either exactly (the
/// Gaussian probe integrates out in closed form; the default) or by nested
/// sampling over X_A when innerSamples > 0. All likelihood arithmetic is in
/// the log domain.
inline MiEstimate leakageUpperBound(const ChannelSet& base, const VarianceProfile& profileA,
                                    double noiseVar, const LeakageOptions& opts,
                                    RngStream& rng) {
  if (!opts.alphabet.isDiscrete) {
    throw std::invalid_argument("leakageUpperBound: needs a discrete phase alphabet");
  }
  if (!(noiseVar > 0.0)) {
    throw std::invalid_argument("leakageUpperBound: needs positive noise variance");
  }
  const Index nr = base.irsElements();
  const double statesReal = opts.alphabet.stateCount(nr);
  if (statesReal > opts.maxStates) {
    throw std::invalid_argument("leakageUpperBound: K^N_R too large to enumerate (" +
                                std::to_string(statesReal) + " states)");
  }
  const std::size_t states = static_cast<std::size_t>(statesReal);
  const int k = opts.alphabet.levels;
  constexpr double twoPi = 2.0 * std::numbers::pi;

  std::vector<ComplexMatrix> eveChannels(states);
  {
    ChannelSet set = base;
    for (std::size_t s = 0; s < states; ++s) {
      std::size_t digits = s;
      set.irs.theta.resize(nr);
      for (Index i = 0; i < nr; ++i) {
        set.irs.theta(i) = twoPi * static_cast<double>(digits % k) / static_cast<double>(k);
        digits /= k;
      }
      eveChannels[s] = stackedEveChannel(set);
    }
  }

  const Index dFull = profileA.cols();
  const Index dUsed = opts.columnLimit > 0 ? std::min(opts.columnLimit, dFull) : dFull;
  const bool analytic = !opts.knownProbe && opts.innerSamples == 0;
  const std::size_t inner = opts.knownProbe ? 1 : opts.innerSamples;
  if (opts.knownProbe &&
      (opts.knownProbeValue.rows() != profileA.rows() || opts.knownProbeValue.cols() != dFull)) {
    throw std::invalid_argument("leakageUpperBound: knownProbeValue shape mismatch");
  }

  std::vector<detail::StateLikelihood> likelihoods;
  if (analytic) {
    likelihoods.reserve(states);
    for (std::size_t s = 0; s < states; ++s) {
      likelihoods.push_back(
          detail::StateLikelihood::build(eveChannels[s], profileA, noiseVar, dUsed));
    }
  }

  std::vector<double> scores;
  scores.reserve(opts.outerSamples);
  std::vector<double> innerLog(std::max<std::size_t>(inner, 1));
  std::vector<double> stateLog(states);
  const double logStates = std::log(static_cast<double>(states));

  for (std::size_t outer = 0; outer < opts.outerSamples; ++outer) {
    RngStream draw = rng.substream(outer);
    const std::size_t sTrue = static_cast<std::size_t>(draw.below(states));
    const ComplexMatrix xTrue =
        opts.knownProbe ? opts.knownProbeValue : complexGaussianMatrix(profileA, draw);
    const ComplexMatrix z =
        (eveChannels[sTrue] * xTrue +
         noiseMatrix(eveChannels[sTrue].rows(), dFull, noiseVar, draw))
            .leftCols(dUsed);

    if (analytic) {
      for (std::size_t s = 0; s < states; ++s) {
        stateLog[s] = likelihoods[s].logDensity(z);
      }
    } else {
      // Inner probe draws are shared across candidate states.
      std::vector<ComplexMatrix> probes(inner);
      for (std::size_t t = 0; t < inner; ++t) {
        probes[t] =
            opts.knownProbe ? opts.knownProbeValue : complexGaussianMatrix(profileA, draw);
      }
      for (std::size_t s = 0; s < states; ++s) {
        for (std::size_t t = 0; t < inner; ++t) {
          const double sq = (z - (eveChannels[s] * probes[t]).leftCols(dUsed)).squaredNorm();
          innerLog[t] = -sq / (2.0 * noiseVar);
        }
        stateLog[s] = detail::logSumExp(std::span<const double>(innerLog.data(), inner)) -
                      std::log(static_cast<double>(inner));
      }
    }
    const double logJoint = stateLog[sTrue];
    const double logMarginal = detail::logSumExp(stateLog) - logStates;
    scores.push_back((logJoint - logMarginal) / detail::kLn2);
  }

  const double n = static_cast<double>(scores.size());
  const double mean = std::accumulate(scores.begin(), scores.end(), 0.0) / n;
  double var = 0.0;
  for (double s : scores) var += (s - mean) * (s - mean);
  var = n > 1 ? var / (n - 1.0) : 0.0;
  const double se = std::sqrt(var / n);

  MiEstimate out;
  out.bits = mean;
  out.method = MiMethod::McLeakage;
  out.sampleCount = scores.size();
  out.diagnostics["stderr"] = se;
  out.diagnostics["states"] = static_cast<double>(states);
  out.diagnostics["analytic_inner"] = analytic ? 1.0 : 0.0;
  out.diagnostics["inner_samples"] = analytic ? 0.0 : static_cast<double>(inner);
  if (opts.targetStderr > 0.0 && se > opts.targetStderr) {
    out.diagnostics["stderr_target_missed"] = 1.0;
  }
  if (out.bits < 0.0) out.diagnostics["negative_raw"] = 1.0;
  return out;
}

/// R_s = I(key features) - max(leakage towards either end); the raw value
/// keeps its sign, the clamped one is floored at zero.
inline SkrEstimate skrLowerBound(const MiEstimate& keyMi, const MiEstimate& leakA,
                                 const MiEstimate& leakB) {
  SkrEstimate out;
  out.keyMi = keyMi;
  out.leakage = leakA.bits >= leakB.bits ? leakA : leakB;
  out.skrRaw = keyMi.bits - out.leakage.bits;
  out.skrClamped = std::max(0.0, out.skrRaw);
  return out;
}

}  // namespace skg
