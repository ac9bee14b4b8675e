// SPDX-License-Identifier: Apache-2.0
//
// Experiment orchestration: SNR calibration, the adversary NRMSE sweep, the
// SKR sweeps for both schemes, the validation suite, and the observation log.
//
// Every random decision flows from streams derived as (config seed, purpose,
// indices...), and parallel workers only ever touch their own trial stream,
// so reports are byte-identical for a given config regardless of scheduling.
#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "skg/adversary.hpp"
#include "skg/channel.hpp"
#include "skg/config.hpp"
#include "skg/infotheory.hpp"
#include "skg/pilot.hpp"
#include "skg/report.hpp"
#include "skg/rgm.hpp"
#include "skg/sampling.hpp"
#include "skg/stats.hpp"
#include "skg/theory.hpp"

namespace skg {

namespace streams {
// Purpose tags keep independent parts of an experiment on disjoint streams.
inline constexpr std::uint64_t kCalibration = 0xA1;
inline constexpr std::uint64_t kChannel = 0xA2;
inline constexpr std::uint64_t kNrmse = 0xA3;
inline constexpr std::uint64_t kSkrRgm = 0xA4;
inline constexpr std::uint64_t kSkrPilot = 0xA5;
inline constexpr std::uint64_t kValidation = 0xA6;
inline constexpr std::uint64_t kSimulate = 0xA7;
inline constexpr std::uint64_t kLeakage = 0xA8;
inline constexpr std::uint64_t kEveNoiseBase = 0x100;
}  // namespace streams

/// Index-parallel loop with deterministic work assignment to result slots.
inline void parallelFor(std::size_t count, int threads,
                        const std::function<void(std::size_t)>& body) {
  const int workers = static_cast<int>(
      std::min<std::size_t>(std::max(1, threads), count == 0 ? 1 : count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
          body(i);
        }
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

/// Mean squared largest singular value of the legitimate channel over a
/// 100-draw seeded calibration run; the anchor of the SNR convention.
inline double calibrateXiSq(const ExperimentConfig& cfg) {
  const RngStream calibration(cfg.seed, streams::kCalibration);
  double acc = 0.0;
  constexpr int kDraws = 100;
  for (int i = 0; i < kDraws; ++i) {
    RngStream rng = calibration.substream(static_cast<std::uint64_t>(i));
    const ChannelSet set = randomChannelSet(cfg.scenarioDims(), cfg.pathStats(),
                                            cfg.parsedAlphabet(), rng);
    const double xi1 = largestSingular(cascadedChannel(set).first);
    acc += xi1 * xi1;
  }
  return acc / kDraws;
}

/// Per-part noise variance for a target SNR:
///   eps^2 = C * xiSqBar * 10^(-snrDb/10) / 2.
inline double snrToNoiseVar(double snrDb, double rowPower, double xiSqBar) {
  return rowPower * xiSqBar * std::pow(10.0, -snrDb / 10.0) / 2.0;
}

inline std::string snrConventionNote() {
  return "eps^2 = C * xiSqBar * 10^(-snr_db/10) / 2, per complex part; "
         "xiSqBar = mean xi1(H_AB)^2 over a 100-draw seeded calibration run; "
         "one sample = one coherence round";
}

namespace detail {

inline nlohmann::json baseMetadata(const ExperimentConfig& cfg, double xiSqBar) {
  return nlohmann::json{{"tool_version", kToolVersion},
                        {"config", cfg.toJson()},
                        {"config_hash", cfg.hash()},
                        {"snr_convention", snrConventionNote()},
                        {"xi_sq_bar", xiSqBar}};
}

inline std::string keySnrM(const std::string& prefix, double snrDb, int m) {
  return prefix + "snr=" + formatDouble(snrDb) + ",m=" + std::to_string(m);
}

/// Reduced-geometry channel set for the leakage bound.
inline ChannelSet drawLeakageChannels(const ExperimentConfig& cfg) {
  ScenarioDims dims;
  dims.aliceAntennas = cfg.aliceAntennas;
  dims.bobAntennas = cfg.bobAntennas;
  dims.eveAntennas = cfg.leakageEveAntennas;
  dims.irsX = 1;
  dims.irsY = cfg.leakageIrsElements;
  dims.eveCount = static_cast<std::size_t>(cfg.eveCount);
  RngStream rng(cfg.seed, streams::kChannel);
  RngStream sub = rng.substream(1);
  return randomChannelSet(dims, cfg.pathStats(),
                          PhaseAlphabet::discrete(cfg.leakageAlphabetK), sub);
}

inline ChannelSet firstEves(const ChannelSet& base, int m) {
  ChannelSet out = base;
  out.eves.resize(static_cast<std::size_t>(m));
  return out;
}

/// Key MI of the RGM scheme from simulated singular-value pairs.
inline MiEstimate rgmKeyMi(const std::vector<SingularObservation>& obs) {
  std::vector<double> a(obs.size()), b(obs.size());
  for (std::size_t i = 0; i < obs.size(); ++i) {
    a[i] = obs[i].sigmaA;
    b[i] = obs[i].sigmaB;
  }
  return miKnn(std::span<const double>(a), std::span<const double>(b), 4);
}

struct AgreementScores {
  double pearson = 0.0;
  double kdr = 0.0;
};

/// Alice publishes her quantile edges; both ends quantize and censor against
/// them (the censored-index exchange is free/public by model).
inline AgreementScores agreementScores(const std::vector<double>& sigmaA,
                                       const std::vector<double>& sigmaB, int bits,
                                       double guard) {
  AgreementScores out;
  out.pearson = stats::pearson(sigmaA, sigmaB);
  const QuantizerEdges edges = quantileEdges(sigmaA, bits);
  const KeyBitstream keyA = quantizeWithEdges(sigmaA, edges, guard);
  const KeyBitstream keyB = quantizeWithEdges(sigmaB, edges, guard);
  out.kdr = keyDisagreementRate(keyA, keyB);
  return out;
}

}  // namespace detail

/// Median/IQR of the colluded-Eve channel-reconstruction NRMSE over the
/// (SNR, M) grid. Channel draws, pilots and noise shapes are shared across
/// grid cells (only the noise scale and the Eve subset change), which pairs
/// the comparisons the figure trends are about.
inline ExperimentReport runNrmseSweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const double xiSqBar = calibrateXiSq(cfg);
  const PilotMatrix pilotA = PilotMatrix::scaledIdentity(cfg.aliceAntennas, cfg.rowPower);
  const RngStream sweepStream(cfg.seed, streams::kNrmse);
  const std::size_t trials = static_cast<std::size_t>(cfg.mcTrials);
  const std::size_t nSnr = cfg.snrDbList.size();
  const std::size_t nM = cfg.mList.size();

  // errors[trial][si][mi]
  std::vector<std::vector<std::vector<double>>> errors(
      trials, std::vector<std::vector<double>>(nSnr, std::vector<double>(nM, 0.0)));

  parallelFor(trials, cfg.threads, [&](std::size_t trial) {
    RngStream trialRng = sweepStream.substream(trial);
    const ChannelSet set = randomChannelSet(cfg.scenarioDims(), cfg.pathStats(),
                                            cfg.parsedAlphabet(), trialRng);
    const ComplexMatrix hAb = cascadedChannel(set).first;
    for (std::size_t si = 0; si < nSnr; ++si) {
      const double noiseVar = snrToNoiseVar(cfg.snrDbList[si], cfg.rowPower, xiSqBar);
      std::vector<EveObservation> obs;
      obs.reserve(set.eves.size());
      for (std::size_t m = 0; m < set.eves.size(); ++m) {
        RngStream eveRng = trialRng.substream(streams::kEveNoiseBase + m);
        obs.push_back(observeEve(set, m, pilotA, noiseVar, eveRng));
      }
      for (std::size_t mi = 0; mi < nM; ++mi) {
        const std::vector<EveObservation> used(
            obs.begin(), obs.begin() + static_cast<std::ptrdiff_t>(cfg.mList[mi]));
        const ComplexVector wHat = estimateW(used);
        errors[trial][si][mi] = nrmse(reconstructLegitimate(wHat, set), hAb);
      }
    }
  });

  ExperimentReport report;
  report.metadata() = detail::baseMetadata(cfg, xiSqBar);
  report.metadata()["sweep"] = "nrmse";
  for (std::size_t si = 0; si < nSnr; ++si) {
    for (std::size_t mi = 0; mi < nM; ++mi) {
      std::vector<double> cell(trials);
      for (std::size_t t = 0; t < trials; ++t) cell[t] = errors[t][si][mi];
      const std::string key = detail::keySnrM("", cfg.snrDbList[si], cfg.mList[mi]);
      report.add(key, "nrmse_median", stats::median(cell), std::numeric_limits<double>::quiet_NaN(),
                 trials, cfg.seed);
      report.add(key, "nrmse_iqr", stats::iqr(cell), std::numeric_limits<double>::quiet_NaN(),
                 trials, cfg.seed);
    }
  }
  return report;
}

enum class Scheme { Rgm, PilotBaseline };

inline const char* schemeName(Scheme s) {
  return s == Scheme::Rgm ? "rgm" : "pilot";
}

/// Per (SNR, M): key MI between the two ends' key features, the leakage
/// estimate, the resulting SKR lower bound, and the key disagreement rate.
inline ExperimentReport runSkrSweep(const ExperimentConfig& cfg, Scheme scheme) {
  cfg.validate();
  const double xiSqBar = calibrateXiSq(cfg);
  RngStream channelRng = RngStream(cfg.seed, streams::kChannel).substream(0);
  const ChannelSet base = randomChannelSet(cfg.scenarioDims(), cfg.pathStats(),
                                           cfg.parsedAlphabet(), channelRng);
  const ChannelSet leakBase = detail::drawLeakageChannels(cfg);
  const VarianceProfile profileA =
      VarianceProfile::uniform(cfg.aliceAntennas, cfg.probeLength, cfg.rowPower);
  const VarianceProfile profileB =
      VarianceProfile::uniform(cfg.bobAntennas, cfg.probeLength, cfg.rowPower);

  ExperimentReport report;
  report.metadata() = detail::baseMetadata(cfg, xiSqBar);
  report.metadata()["sweep"] = std::string("skr_") + schemeName(scheme);
  report.metadata()["leakage_note"] =
      scheme == Scheme::Rgm
          ? "rgm leakage = Monte-Carlo upper bound I(Z_E; w) on the reduced leakage geometry"
          : "pilot leakage = max MI between the Eve-reconstructed feature and either "
            "legitimate feature";

  const std::string prefix = std::string("scheme=") + schemeName(scheme) + ",";
  const std::size_t rounds = static_cast<std::size_t>(cfg.rounds);

  for (std::size_t si = 0; si < cfg.snrDbList.size(); ++si) {
    const double snrDb = cfg.snrDbList[si];
    const double noiseVar = snrToNoiseVar(snrDb, cfg.rowPower, xiSqBar);

    MiEstimate keyMi;
    detail::AgreementScores agreement;
    std::vector<MiEstimate> leakPerM;

    if (scheme == Scheme::Rgm) {
      const RngStream protoStream = RngStream(cfg.seed, streams::kSkrRgm).substream(si);
      std::vector<SingularObservation> obs(rounds);
      ChannelSet setTemplate = base;
      parallelFor(rounds, cfg.threads, [&](std::size_t t) {
        RngStream roundRng = protoStream.substream(t);
        ChannelSet set = setTemplate;
        set.irs = sampleIrsPhase(set.irsElements(), cfg.parsedAlphabet(), roundRng);
        SingularObservation o = rgmRound(set, profileA, profileB, noiseVar, roundRng);
        o.roundIndex = static_cast<std::int64_t>(t);
        obs[t] = std::move(o);
      });
      std::vector<double> sigmaA(rounds), sigmaB(rounds);
      for (std::size_t t = 0; t < rounds; ++t) {
        sigmaA[t] = obs[t].sigmaA;
        sigmaB[t] = obs[t].sigmaB;
      }
      keyMi = detail::rgmKeyMi(obs);
      agreement = detail::agreementScores(sigmaA, sigmaB, cfg.quantBits, cfg.quantGuard);

      for (std::size_t mi = 0; mi < cfg.mList.size(); ++mi) {
        LeakageOptions opts;
        opts.alphabet = PhaseAlphabet::discrete(cfg.leakageAlphabetK);
        opts.outerSamples = static_cast<std::size_t>(cfg.leakageOuterSamples);
        opts.innerSamples = static_cast<std::size_t>(cfg.leakageInnerSamples);
        RngStream leakRng = RngStream(cfg.seed, streams::kLeakage).substream(si).substream(mi);
        leakPerM.push_back(leakageUpperBound(detail::firstEves(leakBase, cfg.mList[mi]),
                                             profileA, noiseVar, opts, leakRng));
      }
    } else {
      const RngStream protoStream = RngStream(cfg.seed, streams::kSkrPilot).substream(si);
      const PilotMatrix pilotA = PilotMatrix::scaledIdentity(cfg.aliceAntennas, cfg.rowPower);
      const PilotMatrix pilotB = PilotMatrix::scaledIdentity(cfg.bobAntennas, cfg.rowPower);
      std::vector<double> featA(rounds), featB(rounds);
      std::vector<std::vector<double>> featE(cfg.mList.size(), std::vector<double>(rounds));
      ChannelSet setTemplate = base;
      parallelFor(rounds, cfg.threads, [&](std::size_t t) {
        RngStream roundRng = protoStream.substream(t);
        ChannelSet set = setTemplate;
        set.irs = sampleIrsPhase(set.irsElements(), cfg.parsedAlphabet(), roundRng);
        const auto [hAb, hBa] = cascadedChannel(set);
        const ComplexMatrix yA = receivedPilotSignal(hBa, pilotB, noiseVar, roundRng);
        const ComplexMatrix yB = receivedPilotSignal(hAb, pilotA, noiseVar, roundRng);
        featA[t] = pilotFeature(lsEstimate(yA, pilotB), PilotFeature::Rss);
        featB[t] = pilotFeature(lsEstimate(yB, pilotA), PilotFeature::Rss);
        std::vector<EveObservation> obs;
        obs.reserve(set.eves.size());
        for (std::size_t m = 0; m < set.eves.size(); ++m) {
          RngStream eveRng = roundRng.substream(streams::kEveNoiseBase + m);
          obs.push_back(observeEve(set, m, pilotA, noiseVar, eveRng));
        }
        for (std::size_t mi = 0; mi < cfg.mList.size(); ++mi) {
          const std::vector<EveObservation> used(
              obs.begin(), obs.begin() + static_cast<std::ptrdiff_t>(cfg.mList[mi]));
          const ComplexMatrix hHat = reconstructLegitimate(estimateW(used), set);
          featE[mi][t] = pilotFeature(hHat, PilotFeature::Rss);
        }
      });
      keyMi = miKnn(std::span<const double>(featA), std::span<const double>(featB), 4);
      agreement = detail::agreementScores(featA, featB, cfg.quantBits, cfg.quantGuard);
      for (std::size_t mi = 0; mi < cfg.mList.size(); ++mi) {
        const MiEstimate toA =
            miKnn(std::span<const double>(featE[mi]), std::span<const double>(featA), 4);
        const MiEstimate toB =
            miKnn(std::span<const double>(featE[mi]), std::span<const double>(featB), 4);
        leakPerM.push_back(toA.bits >= toB.bits ? toA : toB);
      }
    }

    for (std::size_t mi = 0; mi < cfg.mList.size(); ++mi) {
      const SkrEstimate skr = skrLowerBound(keyMi, leakPerM[mi], leakPerM[mi]);
      const std::string key = detail::keySnrM(prefix, snrDb, cfg.mList[mi]);
      report.add(key, "key_mi", keyMi.bits, std::numeric_limits<double>::quiet_NaN(),
                 keyMi.sampleCount, cfg.seed);
      report.add(key, "leakage", skr.leakage.bits, skr.leakage.stderrBits(),
                 skr.leakage.sampleCount, cfg.seed);
      report.add(key, "skr_raw", skr.skrRaw, std::numeric_limits<double>::quiet_NaN(), rounds,
                 cfg.seed);
      report.add(key, "skr", skr.skrClamped, std::numeric_limits<double>::quiet_NaN(), rounds,
                 cfg.seed);
      report.add(key, "kdr", agreement.kdr, std::numeric_limits<double>::quiet_NaN(), rounds,
                 cfg.seed);
      report.add(key, "pearson", agreement.pearson, std::numeric_limits<double>::quiet_NaN(),
                 rounds, cfg.seed);
    }
  }
  return report;
}

/// Theory-versus-Monte-Carlo moment checks, the singular-value pair trace,
/// and the SKR/complexity curve versus the probe length D.
inline ExperimentReport runValidationSuite(const ExperimentConfig& cfg) {
  cfg.validate();
  const double xiSqBar = calibrateXiSq(cfg);
  ExperimentReport report;
  report.metadata() = detail::baseMetadata(cfg, xiSqBar);
  report.metadata()["sweep"] = "validation";
  report.metadata()["moment_check_noise"] = "2*D*eps^2 = 0.1 * 2*C*xi1^2";
  report.metadata()["sigma_trace_snr_db"] = 20.0;
  report.metadata()["d_sweep_snr_db"] = 30.0;

  const RngStream validation(cfg.seed, streams::kValidation);
  RngStream chanRng = validation.substream(0);
  const ChannelSet set = randomChannelSet(cfg.scenarioDims(), cfg.pathStats(),
                                          cfg.parsedAlphabet(), chanRng);
  const ComplexMatrix hAb = cascadedChannel(set).first;
  const CompactSvd svd = compactSvd(hAb);
  const double xi1 = svd.singularValues(0);
  const VarianceProfile profileA =
      VarianceProfile::uniform(cfg.aliceAntennas, cfg.probeLength, cfg.rowPower);

  const std::size_t draws = static_cast<std::size_t>(cfg.validationDraws);

  // Theorem-2 and Proposition-2 moment matching at one fixed channel/phase.
  // The noisy check runs at 2 D eps^2 = 0.1 * 2 C xi1^2, where the
  // diagonal-dominance approximation behind the closed forms is valid.
  {
    const double noiseVar = 0.1 * cfg.rowPower * xi1 * xi1 / profileA.cols();
    const GaussianApprox t2 = theorem2Moments(xi1, svd.rightVectors.col(0), profileA);
    const GaussianApprox p2 = prop2Moments(xi1, svd.rightVectors.col(0), profileA, noiseVar);
    std::vector<double> clean(draws), noisy(draws);
    const RngStream drawStream = validation.substream(1);
    parallelFor(draws, cfg.threads, [&](std::size_t i) {
      RngStream rng = drawStream.substream(i);
      const ComplexMatrix x = complexGaussianMatrix(profileA, rng);
      clean[i] = largestSingular(hAb * x);
      noisy[i] = largestSingular(
          hAb * x + noiseMatrix(hAb.rows(), profileA.cols(), noiseVar, rng));
    });
    const double se = stats::meanStderr(clean);
    report.add("theorem2", "eta", t2.mean, std::numeric_limits<double>::quiet_NaN(), draws,
               cfg.seed);
    report.add("theorem2", "iota_sq", t2.variance, std::numeric_limits<double>::quiet_NaN(),
               draws, cfg.seed);
    report.add("theorem2", "mc_mean", stats::mean(clean), se, draws, cfg.seed);
    report.add("theorem2", "mean_z", std::abs(stats::mean(clean) - t2.mean) / se,
               std::numeric_limits<double>::quiet_NaN(), draws, cfg.seed);
    report.add("theorem2", "var_ratio", stats::variance(clean) / t2.variance,
               std::numeric_limits<double>::quiet_NaN(), draws, cfg.seed);
    report.add("theorem2", "skewness", stats::skewness(clean),
               std::numeric_limits<double>::quiet_NaN(), draws, cfg.seed);
    report.add("theorem2", "excess_kurtosis", stats::excessKurtosis(clean),
               std::numeric_limits<double>::quiet_NaN(), draws, cfg.seed);
    const double seNoisy = stats::meanStderr(noisy);
    report.add("prop2", "mu_b", p2.mean, std::numeric_limits<double>::quiet_NaN(), draws,
               cfg.seed);
    report.add("prop2", "varsigma_sq", p2.variance, std::numeric_limits<double>::quiet_NaN(),
               draws, cfg.seed);
    report.add("prop2", "mc_mean", stats::mean(noisy), seNoisy, draws, cfg.seed);
    report.add("prop2", "mean_z", std::abs(stats::mean(noisy) - p2.mean) / seNoisy,
               std::numeric_limits<double>::quiet_NaN(), draws, cfg.seed);
    report.add("prop2", "var_ratio", stats::variance(noisy) / p2.variance,
               std::numeric_limits<double>::quiet_NaN(), draws, cfg.seed);
  }

  // Per-round singular-value pair trace at SNR 20 dB.
  {
    const double noiseVar = snrToNoiseVar(20.0, cfg.rowPower, xiSqBar);
    const VarianceProfile profileB =
        VarianceProfile::uniform(cfg.bobAntennas, cfg.probeLength, cfg.rowPower);
    const std::vector<SingularObservation> obs =
        runProtocol(set, cfg.rounds, profileA, profileB, noiseVar, cfg.parsedAlphabet(),
                    validation.substream(2));
    std::vector<double> a(obs.size()), b(obs.size());
    for (std::size_t i = 0; i < obs.size(); ++i) {
      a[i] = obs[i].sigmaA;
      b[i] = obs[i].sigmaB;
    }
    report.add("sigma_trace", "pearson", stats::pearson(a, b),
               std::numeric_limits<double>::quiet_NaN(), obs.size(), cfg.seed);
  }

  // SKR and multiplication count versus probe length D. The probe power
  // budget C is spread over D symbols, so the per-symbol SNR drops with D;
  // the curve runs at a high nominal SNR where the concentration gain of a
  // longer probe is what remains visible.
  {
    const double dSweepSnrDb = 30.0;
    const double midNoise = snrToNoiseVar(dSweepSnrDb, cfg.rowPower, xiSqBar);
    const ChannelSet leakBase = detail::drawLeakageChannels(cfg);
    for (std::size_t di = 0; di < cfg.dList.size(); ++di) {
      const int d = cfg.dList[di];
      const VarianceProfile pa = VarianceProfile::uniform(cfg.aliceAntennas, d, cfg.rowPower);
      const VarianceProfile pb = VarianceProfile::uniform(cfg.bobAntennas, d, cfg.rowPower);
      const std::vector<SingularObservation> obs =
          runProtocol(set, cfg.rounds, pa, pb, midNoise, cfg.parsedAlphabet(),
                      validation.substream(3).substream(di));
      const MiEstimate keyMi = detail::rgmKeyMi(obs);

      LeakageOptions opts;
      opts.alphabet = PhaseAlphabet::discrete(cfg.leakageAlphabetK);
      opts.outerSamples = static_cast<std::size_t>(cfg.leakageOuterSamples);
      opts.innerSamples = static_cast<std::size_t>(cfg.leakageInnerSamples);
      RngStream leakRng = validation.substream(4).substream(di);
      const MiEstimate leak =
          leakageUpperBound(detail::firstEves(leakBase, 1), pa, midNoise, opts, leakRng);
      const SkrEstimate skr = skrLowerBound(keyMi, leak, leak);

      const std::string key = "d=" + std::to_string(d);
      report.add(key, "key_mi", keyMi.bits, std::numeric_limits<double>::quiet_NaN(),
                 keyMi.sampleCount, cfg.seed);
      report.add(key, "leakage", leak.bits, leak.stderrBits(), leak.sampleCount, cfg.seed);
      report.add(key, "skr", skr.skrClamped, leak.stderrBits(),
                 static_cast<std::size_t>(cfg.rounds), cfg.seed);
      const double mults = static_cast<double>(cfg.aliceAntennas) * cfg.aliceAntennas * d +
                           static_cast<double>(cfg.bobAntennas) * cfg.bobAntennas * d;
      report.add(key, "svd_mult_count", mults, std::numeric_limits<double>::quiet_NaN(),
                 static_cast<std::size_t>(cfg.rounds), cfg.seed);
    }
  }
  return report;
}

/// Per-round observation log of one protocol run at each configured SNR.
/// Columns: round_index, sigma_a, sigma_b, snr_db, seed, stream_id.
inline std::string simulateObservationLog(const ExperimentConfig& cfg) {
  cfg.validate();
  const double xiSqBar = calibrateXiSq(cfg);
  RngStream channelRng = RngStream(cfg.seed, streams::kChannel).substream(0);
  const ChannelSet base = randomChannelSet(cfg.scenarioDims(), cfg.pathStats(),
                                           cfg.parsedAlphabet(), channelRng);
  const VarianceProfile profileA =
      VarianceProfile::uniform(cfg.aliceAntennas, cfg.probeLength, cfg.rowPower);
  const VarianceProfile profileB =
      VarianceProfile::uniform(cfg.bobAntennas, cfg.probeLength, cfg.rowPower);

  std::string out = "round_index,sigma_a,sigma_b,snr_db,seed,stream_id\n";
  for (std::size_t si = 0; si < cfg.snrDbList.size(); ++si) {
    const double snrDb = cfg.snrDbList[si];
    const double noiseVar = snrToNoiseVar(snrDb, cfg.rowPower, xiSqBar);
    const RngStream protoStream = RngStream(cfg.seed, streams::kSimulate).substream(si);
    const std::vector<SingularObservation> obs = runProtocol(
        base, cfg.rounds, profileA, profileB, noiseVar, cfg.parsedAlphabet(), protoStream);
    for (const SingularObservation& o : obs) {
      out += std::to_string(o.roundIndex);
      out += ',';
      out += detail::formatDouble(o.sigmaA);
      out += ',';
      out += detail::formatDouble(o.sigmaB);
      out += ',';
      out += detail::formatDouble(snrDb);
      out += ',';
      out += std::to_string(cfg.seed);
      out += ',';
      out += std::to_string(protoStream.streamId());
      out += '\n';
    }
  }
  return out;
}

}  // namespace skg
