// SPDX-License-Identifier: Apache-2.0
//
// Experiment configuration: a flat key-value document (JSON object, one
// scalar or list per key) that round-trips losslessly, plus the two built-in
// presets.
#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "skg/channel.hpp"
#include "skg/sampling.hpp"

namespace skg {

inline constexpr const char* kToolVersion = "skgsim 0.1.0";

struct ExperimentConfig {
  // Antenna/array counts.
  int aliceAntennas = 4;
  int bobAntennas = 4;
  int eveAntennas = 4;
  int irsX = 2;
  int irsY = 4;

  // Adversary population: eveCount channels are drawn; sweeps attack with the
  // first m of them for each m in mList (nested subsets).
  int eveCount = 16;
  std::vector<int> mList{1, 4, 16};

  // Probe/pilot shape and power.
  int probeLength = 50;   // D
  double rowPower = 1.0;  // C
  std::vector<int> dList{25, 50, 100, 200};

  std::vector<double> snrDbList{0.0, 10.0, 20.0};
  int rounds = 500;    // coherence rounds per protocol run
  int mcTrials = 200;  // Monte-Carlo trials per sweep point
  int validationDraws = 10000;

  int quantBits = 2;
  double quantGuard = 0.1;

  std::string phaseAlphabet = "continuous";  // or "discrete:K"

  std::uint64_t seed = 42;
  int threads = 2;

  // Path statistics for every direct channel.
  int pathCountMin = 1;
  int pathCountMax = 10;
  double pathLoss = 1.0;

  // Reduced geometry for the leakage bound (K^{N_R} must stay enumerable).
  int leakageIrsElements = 2;
  int leakageAlphabetK = 2;
  int leakageEveAntennas = 4;
  int leakageOuterSamples = 192;
  int leakageInnerSamples = 0;  // 0: exact Gaussian marginal over the probe

  static ExperimentConfig desk() { return ExperimentConfig{}; }

  static ExperimentConfig paper() {
    ExperimentConfig c;
    c.aliceAntennas = c.bobAntennas = c.eveAntennas = 16;
    c.irsX = 10;
    c.irsY = 10;
    c.eveCount = 100;
    c.mList = {1, 10, 50, 100};
    c.probeLength = 100;
    c.snrDbList = {0, 5, 10, 15, 20, 25, 30};
    return c;
  }

  PhaseAlphabet parsedAlphabet() const {
    if (phaseAlphabet == "continuous") return PhaseAlphabet::continuous();
    if (phaseAlphabet.rfind("discrete:", 0) == 0) {
      return PhaseAlphabet::discrete(std::stoi(phaseAlphabet.substr(9)));
    }
    throw std::invalid_argument("config: bad phase_alphabet '" + phaseAlphabet + "'");
  }

  ScenarioDims scenarioDims() const {
    ScenarioDims d;
    d.aliceAntennas = aliceAntennas;
    d.bobAntennas = bobAntennas;
    d.eveAntennas = eveAntennas;
    d.irsX = irsX;
    d.irsY = irsY;
    d.eveCount = static_cast<std::size_t>(eveCount);
    return d;
  }

  PathStats pathStats() const { return PathStats{pathCountMin, pathCountMax, pathLoss}; }

  void validate() const {
    const auto positive = [](int v, const char* name) {
      if (v < 1) throw std::invalid_argument(std::string("config: ") + name + " must be >= 1");
    };
    positive(aliceAntennas, "n_a");
    positive(bobAntennas, "n_b");
    positive(eveAntennas, "n_e");
    positive(irsX, "nr_x");
    positive(irsY, "nr_y");
    positive(eveCount, "eve_count");
    positive(probeLength, "probe_length");
    positive(rounds, "rounds");
    positive(mcTrials, "mc_trials");
    positive(quantBits, "quant_bits");
    if (snrDbList.empty()) throw std::invalid_argument("config: snr_db_list is empty");
    if (!(rowPower > 0.0)) throw std::invalid_argument("config: row_power must be positive");
    if (!(quantGuard >= 0.0 && quantGuard < 0.5)) {
      throw std::invalid_argument("config: quant_guard must lie in [0, 0.5)");
    }
    for (int m : mList) {
      if (m < 1 || m > eveCount) {
        throw std::invalid_argument("config: m_list entries must lie in [1, eve_count]");
      }
    }
    parsedAlphabet();
  }

  nlohmann::json toJson() const {
    return nlohmann::json{{"n_a", aliceAntennas},
                          {"n_b", bobAntennas},
                          {"n_e", eveAntennas},
                          {"nr_x", irsX},
                          {"nr_y", irsY},
                          {"eve_count", eveCount},
                          {"m_list", mList},
                          {"probe_length", probeLength},
                          {"row_power", rowPower},
                          {"d_list", dList},
                          {"snr_db_list", snrDbList},
                          {"rounds", rounds},
                          {"mc_trials", mcTrials},
                          {"validation_draws", validationDraws},
                          {"quant_bits", quantBits},
                          {"quant_guard", quantGuard},
                          {"phase_alphabet", phaseAlphabet},
                          {"seed", seed},
                          {"threads", threads},
                          {"path_count_min", pathCountMin},
                          {"path_count_max", pathCountMax},
                          {"path_loss", pathLoss},
                          {"leakage_irs_elements", leakageIrsElements},
                          {"leakage_alphabet_k", leakageAlphabetK},
                          {"leakage_eve_antennas", leakageEveAntennas},
                          {"leakage_outer_samples", leakageOuterSamples},
                          {"leakage_inner_samples", leakageInnerSamples}};
  }

  static ExperimentConfig fromJson(const nlohmann::json& j) {
    ExperimentConfig c;
    const auto load = [&j](const char* key, auto& into) {
      if (j.contains(key)) j.at(key).get_to(into);
    };
    load("n_a", c.aliceAntennas);
    load("n_b", c.bobAntennas);
    load("n_e", c.eveAntennas);
    load("nr_x", c.irsX);
    load("nr_y", c.irsY);
    load("eve_count", c.eveCount);
    load("m_list", c.mList);
    load("probe_length", c.probeLength);
    load("row_power", c.rowPower);
    load("d_list", c.dList);
    load("snr_db_list", c.snrDbList);
    load("rounds", c.rounds);
    load("mc_trials", c.mcTrials);
    load("validation_draws", c.validationDraws);
    load("quant_bits", c.quantBits);
    load("quant_guard", c.quantGuard);
    load("phase_alphabet", c.phaseAlphabet);
    load("seed", c.seed);
    load("threads", c.threads);
    load("path_count_min", c.pathCountMin);
    load("path_count_max", c.pathCountMax);
    load("path_loss", c.pathLoss);
    load("leakage_irs_elements", c.leakageIrsElements);
    load("leakage_alphabet_k", c.leakageAlphabetK);
    load("leakage_eve_antennas", c.leakageEveAntennas);
    load("leakage_outer_samples", c.leakageOuterSamples);
    load("leakage_inner_samples", c.leakageInnerSamples);
    c.validate();
    return c;
  }

  static ExperimentConfig fromFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    nlohmann::json j;
    in >> j;
    return fromJson(j);
  }

  /// FNV-1a over the canonical (key-sorted) serialization.
  std::uint64_t hash() const {
    const std::string dump = toJson().dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : dump) {
      h ^= ch;
      h *= 0x100000001b3ULL;
    }
    return h;
  }
};

}  // namespace skg
