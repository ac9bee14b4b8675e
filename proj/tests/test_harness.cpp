// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "skg/harness.hpp"

using namespace skg;
using Catch::Matchers::WithinRel;

namespace {

ExperimentConfig tinyConfig() {
  ExperimentConfig cfg = ExperimentConfig::desk();
  cfg.mcTrials = 24;
  cfg.rounds = 120;
  cfg.validationDraws = 400;
  cfg.snrDbList = {0.0, 30.0};
  cfg.mList = {2, 8};
  cfg.dList = {25, 50};
  cfg.leakageOuterSamples = 48;
  return cfg;
}

}  // namespace

TEST_CASE("parallelFor covers every index exactly once") {
  std::vector<std::atomic<int>> hits(257);
  parallelFor(hits.size(), 4, [&](std::size_t i) { hits[i].fetch_add(1); });
  for (const auto& h : hits) REQUIRE(h.load() == 1);

  REQUIRE_THROWS_AS(parallelFor(8, 3,
                                [](std::size_t i) {
                                  if (i == 5) throw std::runtime_error("boom");
                                }),
                    std::runtime_error);
}

TEST_CASE("SNR convention definitional cases") {
  const double xiSqBar = 3.7;
  const double c = 1.3;
  REQUIRE_THAT(2.0 * snrToNoiseVar(0.0, c, xiSqBar), WithinRel(c * xiSqBar, 1e-12));
  REQUIRE_THAT(snrToNoiseVar(0.0, c, xiSqBar) / snrToNoiseVar(10.0, c, xiSqBar),
               WithinRel(10.0, 1e-12));

  const ExperimentConfig cfg = ExperimentConfig::desk();
  REQUIRE(calibrateXiSq(cfg) == calibrateXiSq(cfg));  // bit-identical
}

TEST_CASE("config presets validate and round-trip losslessly") {
  const ExperimentConfig desk = ExperimentConfig::desk();
  REQUIRE_NOTHROW(desk.validate());
  const ExperimentConfig paper = ExperimentConfig::paper();
  REQUIRE_NOTHROW(paper.validate());
  REQUIRE(paper.aliceAntennas == 16);
  REQUIRE(paper.irsX * paper.irsY == 100);

  ExperimentConfig tweaked = desk;
  tweaked.seed = 1234567;
  tweaked.snrDbList = {-2.5, 7.25};
  tweaked.quantGuard = 0.125;
  tweaked.phaseAlphabet = "discrete:8";
  const nlohmann::json j = tweaked.toJson();
  const ExperimentConfig back = ExperimentConfig::fromJson(j);
  REQUIRE(back.toJson().dump() == j.dump());
  REQUIRE(back.hash() == tweaked.hash());
  REQUIRE(back.hash() != desk.hash());

  ExperimentConfig bad = desk;
  bad.mList = {999};
  REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = desk;
  bad.phaseAlphabet = "sometimes";
  REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);

  const auto path = std::filesystem::temp_directory_path() / "skg_cfg_roundtrip.json";
  {
    std::ofstream out(path);
    out << tweaked.toJson().dump(2);
  }
  const ExperimentConfig fromFile = ExperimentConfig::fromFile(path.string());
  REQUIRE(fromFile.toJson().dump() == j.dump());
}

TEST_CASE("report CSV has the fixed column order and is deterministic") {
  ExperimentReport r;
  r.add("snr=0,m=2", "nrmse_median", 0.25, 0.01, 100, 42);
  r.add("snr=0,m=2", "nrmse_iqr", 0.1, std::numeric_limits<double>::quiet_NaN(), 100, 42);
  const std::string csv = r.toCsv();
  std::istringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  REQUIRE(header == "sweep_key,metric,value,stderr,n,seed");
  std::string row;
  std::getline(lines, row);
  REQUIRE(row == "snr=0,m=2,nrmse_median,0.25,0.01,100,42");
  std::getline(lines, row);
  REQUIRE(row == "snr=0,m=2,nrmse_iqr,0.1,,100,42");

  const nlohmann::json j = r.toJson();
  REQUIRE(j.at("rows").size() == 2);
  REQUIRE(!j.at("rows")[1].contains("stderr"));
}

TEST_CASE("NRMSE sweep trends at tiny scale") {
  ExperimentConfig cfg = tinyConfig();
  cfg.mcTrials = 40;
  const ExperimentReport report = runNrmseSweep(cfg);

  const double highSnrManyEves = report.find("snr=30,m=8", "nrmse_median").value;
  const double highSnrFewEves = report.find("snr=30,m=2", "nrmse_median").value;
  const double lowSnrManyEves = report.find("snr=0,m=8", "nrmse_median").value;
  REQUIRE(highSnrManyEves < 0.05);
  REQUIRE(highSnrManyEves <= highSnrFewEves);
  REQUIRE(highSnrManyEves <= lowSnrManyEves);
  REQUIRE(report.metadata().contains("snr_convention"));
}

TEST_CASE("validation suite is byte-deterministic") {
  const ExperimentConfig cfg = tinyConfig();
  const std::string first = runValidationSuite(cfg).toCsv();
  const std::string second = runValidationSuite(cfg).toCsv();
  REQUIRE(first == second);
  REQUIRE(first.find("theorem2,eta") != std::string::npos);
  REQUIRE(first.find("svd_mult_count") != std::string::npos);
}

TEST_CASE("thread count does not change report bytes") {
  ExperimentConfig one = tinyConfig();
  one.threads = 1;
  ExperimentConfig four = tinyConfig();
  four.threads = 4;
  REQUIRE(runNrmseSweep(one).toCsv() == runNrmseSweep(four).toCsv());
}

TEST_CASE("observation log schema and determinism") {
  ExperimentConfig cfg = tinyConfig();
  cfg.rounds = 16;
  const std::string log = simulateObservationLog(cfg);
  std::istringstream lines(log);
  std::string header;
  std::getline(lines, header);
  REQUIRE(header == "round_index,sigma_a,sigma_b,snr_db,seed,stream_id");
  std::size_t rows = 0;
  std::string row;
  while (std::getline(lines, row)) ++rows;
  REQUIRE(rows == cfg.snrDbList.size() * static_cast<std::size_t>(cfg.rounds));
  REQUIRE(log == simulateObservationLog(cfg));
}

TEST_CASE("SKR sweep emits both schemes with the expected metrics") {
  ExperimentConfig cfg = tinyConfig();
  cfg.rounds = 150;
  cfg.snrDbList = {10.0};
  cfg.mList = {2};
  const ExperimentReport rgm = runSkrSweep(cfg, Scheme::Rgm);
  const ExperimentReport pilot = runSkrSweep(cfg, Scheme::PilotBaseline);
  for (const char* metric : {"key_mi", "leakage", "skr_raw", "skr", "kdr", "pearson"}) {
    REQUIRE_NOTHROW(rgm.find("scheme=rgm,snr=10,m=2", metric));
    REQUIRE_NOTHROW(pilot.find("scheme=pilot,snr=10,m=2", metric));
  }
  const double skr = rgm.find("scheme=rgm,snr=10,m=2", "skr").value;
  const double raw = rgm.find("scheme=rgm,snr=10,m=2", "skr_raw").value;
  REQUIRE(skr >= 0.0);
  REQUIRE(skr >= raw);
}
