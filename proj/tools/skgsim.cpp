// SPDX-License-Identifier: Apache-2.0
//
// skgsim: IRS-assisted secret-key-generation simulator.
//
//   skgsim simulate  — per-round singular-value observation log
//   skgsim attack    — colluded-Eve NRMSE sweep over (SNR, M)
//   skgsim skr       — secret-key-rate sweep for both schemes
//   skgsim validate  — theory-vs-Monte-Carlo validation suite

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "skg/config.hpp"
#include "skg/harness.hpp"
#include "skg/report.hpp"

namespace {

struct CommonOptions {
  std::string configPath;
  std::string preset = "desk";
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string outDir = "out";
  std::string format = "csv";
};

void addCommon(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.configPath, "Path to a JSON config file");
  cmd->add_option("--preset", opts.preset, "Built-in preset when no config is given")
      ->check(CLI::IsMember({"paper", "desk"}));
  cmd->add_option("--seed", opts.seed, "Override the config seed");
  cmd->add_option("--out", opts.outDir, "Output directory");
  cmd->add_option("--threads", opts.threads, "Worker threads");
  cmd->add_option("--format", opts.format, "Report body format")
      ->check(CLI::IsMember({"csv", "json"}));
}

skg::ExperimentConfig loadConfig(const CommonOptions& opts) {
  skg::ExperimentConfig cfg;
  if (!opts.configPath.empty()) {
    cfg = skg::ExperimentConfig::fromFile(opts.configPath);
  } else if (opts.preset == "paper") {
    cfg = skg::ExperimentConfig::paper();
  } else {
    cfg = skg::ExperimentConfig::desk();
  }
  if (opts.seed) cfg.seed = *opts.seed;
  if (opts.threads) cfg.threads = *opts.threads;
  cfg.validate();
  return cfg;
}

void emitReport(const skg::ExperimentReport& report, const CommonOptions& opts,
                const std::string& base) {
  report.printTable(std::cout);
  report.writeFiles(opts.outDir, base, opts.format);
  std::cout << "wrote " << (std::filesystem::path(opts.outDir) / base).string() << "."
            << opts.format << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IRS-assisted physical-layer secret key generation simulator"};
  app.require_subcommand(1);

  CommonOptions simulateOpts, attackOpts, skrOpts, validateOpts;
  CLI::App* simulate = app.add_subcommand("simulate", "Run the probe-exchange protocol");
  addCommon(simulate, simulateOpts);
  CLI::App* attack = app.add_subcommand("attack", "Colluded-Eve NRMSE sweep");
  addCommon(attack, attackOpts);
  CLI::App* skr = app.add_subcommand("skr", "Secret-key-rate sweep (both schemes)");
  addCommon(skr, skrOpts);
  CLI::App* validate = app.add_subcommand("validate", "Theory validation suite");
  addCommon(validate, validateOpts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      const skg::ExperimentConfig cfg = loadConfig(simulateOpts);
      const std::string log = skg::simulateObservationLog(cfg);
      std::filesystem::create_directories(simulateOpts.outDir);
      const auto path = std::filesystem::path(simulateOpts.outDir) / "observations.csv";
      std::ofstream out(path, std::ios::binary);
      out << log;
      nlohmann::json meta{{"tool_version", skg::kToolVersion},
                          {"config", cfg.toJson()},
                          {"config_hash", cfg.hash()},
                          {"snr_convention", skg::snrConventionNote()}};
      std::ofstream metaOut(std::filesystem::path(simulateOpts.outDir) / "observations.meta.json",
                            std::ios::binary);
      metaOut << meta.dump(2) << '\n';
      std::cout << "wrote " << path.string() << " (" << cfg.rounds << " rounds x "
                << cfg.snrDbList.size() << " SNR points)\n";
    } else if (attack->parsed()) {
      const skg::ExperimentConfig cfg = loadConfig(attackOpts);
      emitReport(skg::runNrmseSweep(cfg), attackOpts, "attack");
    } else if (skr->parsed()) {
      const skg::ExperimentConfig cfg = loadConfig(skrOpts);
      skg::ExperimentReport merged = skg::runSkrSweep(cfg, skg::Scheme::Rgm);
      const skg::ExperimentReport pilot = skg::runSkrSweep(cfg, skg::Scheme::PilotBaseline);
      for (const skg::ReportRow& row : pilot.rows()) merged.add(row);
      merged.metadata()["sweep"] = "skr";
      emitReport(merged, skrOpts, "skr");
    } else if (validate->parsed()) {
      const skg::ExperimentConfig cfg = loadConfig(validateOpts);
      emitReport(skg::runValidationSuite(cfg), validateOpts, "validate");
    }
  } catch (const std::exception& e) {
    nlohmann::json err{{"error", e.what()}};
    std::cerr << err.dump() << "\n";
    return 1;
  }
  return 0;
}
