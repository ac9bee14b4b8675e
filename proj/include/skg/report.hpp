// SPDX-License-Identifier: Apache-2.0
//
// Tabular experiment reports: fixed-order CSV body, JSON form, metadata
// sidecar. Rerunning with the same config and seed reproduces the bytes.
#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace skg {

namespace detail {

/// Locale-independent shortest-ish float formatting shared by all outputs.
inline std::string formatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace detail

struct ReportRow {
  std::string sweepKey;
  std::string metric;
  double value = 0.0;
  double stderrVal = std::numeric_limits<double>::quiet_NaN();  // NaN: not applicable
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

class ExperimentReport {
 public:
  void add(ReportRow row) { rows_.push_back(std::move(row)); }

  void add(std::string sweepKey, std::string metric, double value,
           double stderrVal = std::numeric_limits<double>::quiet_NaN(), std::size_t n = 0,
           std::uint64_t seed = 0) {
    rows_.push_back(ReportRow{std::move(sweepKey), std::move(metric), value, stderrVal, n, seed});
  }

  const std::vector<ReportRow>& rows() const { return rows_; }
  nlohmann::json& metadata() { return metadata_; }
  const nlohmann::json& metadata() const { return metadata_; }

  const ReportRow& find(const std::string& sweepKey, const std::string& metric) const {
    for (const ReportRow& r : rows_) {
      if (r.sweepKey == sweepKey && r.metric == metric) return r;
    }
    throw std::out_of_range("report: no row (" + sweepKey + ", " + metric + ")");
  }

  /// Fixed column order: sweep_key, metric, value, stderr, n, seed.
  std::string toCsv() const {
    std::string out = "sweep_key,metric,value,stderr,n,seed\n";
    for (const ReportRow& r : rows_) {
      out += r.sweepKey;
      out += ',';
      out += r.metric;
      out += ',';
      out += detail::formatDouble(r.value);
      out += ',';
      if (!std::isnan(r.stderrVal)) out += detail::formatDouble(r.stderrVal);
      out += ',';
      out += std::to_string(r.n);
      out += ',';
      out += std::to_string(r.seed);
      out += '\n';
    }
    return out;
  }

  nlohmann::json toJson() const {
    nlohmann::json rows = nlohmann::json::array();
    for (const ReportRow& r : rows_) {
      nlohmann::json jr{{"sweep_key", r.sweepKey},
                        {"metric", r.metric},
                        {"value", r.value},
                        {"n", r.n},
                        {"seed", r.seed}};
      if (!std::isnan(r.stderrVal)) jr["stderr"] = r.stderrVal;
      rows.push_back(std::move(jr));
    }
    return nlohmann::json{{"metadata", metadata_}, {"rows", rows}};
  }

  void printTable(std::ostream& os) const {
    os << "sweep_key                        metric                    value        stderr\n";
    for (const ReportRow& r : rows_) {
      char line[160];
      std::snprintf(line, sizeof(line), "%-32s %-24s %12.6g  %12.6g\n", r.sweepKey.c_str(),
                    r.metric.c_str(), r.value, std::isnan(r.stderrVal) ? 0.0 : r.stderrVal);
      os << line;
    }
  }

  /// Writes <base>.csv (or .json) plus the <base>.meta.json sidecar.
  void writeFiles(const std::filesystem::path& dir, const std::string& base,
                  const std::string& format) const {
    std::filesystem::create_directories(dir);
    if (format == "csv") {
      std::ofstream body(dir / (base + ".csv"), std::ios::binary);
      body << toCsv();
    } else if (format == "json") {
      std::ofstream body(dir / (base + ".json"), std::ios::binary);
      body << toJson().dump(2) << '\n';
    } else {
      throw std::invalid_argument("report: unknown format '" + format + "'");
    }
    std::ofstream meta(dir / (base + ".meta.json"), std::ios::binary);
    meta << metadata_.dump(2) << '\n';
  }

 private:
  std::vector<ReportRow> rows_;
  nlohmann::json metadata_;
};

}  // namespace skg
