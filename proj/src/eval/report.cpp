// Copyright 2026 The sslkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sslkit/eval/report.hpp"

#include <cstdio>

#include <json.hpp>

#include "sslkit/common/errors.hpp"

namespace sslkit::eval {

using nlohmann::json;

namespace {

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

json config_json(const std::string& config_echo) {
  if (config_echo.empty()) return nullptr;
  return json::parse(config_echo);
}

json bucket_json(const KnownNBucket& b) {
  return json{{"frames", b.frames},
              {"matched", b.matched},
              {"correct", b.correct},
              {"mae_deg", b.mae()},
              {"acc", b.acc()}};
}

void append_bucket_row(std::string* out, const std::string& label,
                       const KnownNBucket& b) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%-18s %10ld %12s %8s\n", label.c_str(),
                b.frames, fixed(b.mae(), 2).c_str(), fixed(b.acc(), 3).c_str());
  *out += buf;
}

}  // namespace

ReportFormat parse_report_format(const std::string& name) {
  if (name == "json") return ReportFormat::kJson;
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "table") return ReportFormat::kTable;
  throw ConfigError("unknown report format '" + name +
                    "' (expected json, csv or table)");
}

std::string render_known(const KnownNReport& report, ReportFormat format,
                         const std::string& config_echo) {
  switch (format) {
    case ReportFormat::kJson: {
      json by_n = json::array();
      for (size_t n = 1; n < report.by_n.size(); ++n) {
        if (report.by_n[n].frames == 0) continue;
        json b = bucket_json(report.by_n[n]);
        b["n"] = n;
        by_n.push_back(std::move(b));
      }
      const json doc{{"schema_version", 1},
                     {"tool_version", kToolVersion},
                     {"config", config_json(config_echo)},
                     {"metric", "known_n"},
                     {"overall", bucket_json(report.overall)},
                     {"by_n", by_n}};
      return doc.dump(2) + "\n";
    }
    case ReportFormat::kCsv: {
      std::string out;
      if (!config_echo.empty()) out += "# config " + config_echo + "\n";
      out += "subset,frames,matched,mae_deg,acc\n";
      auto row = [&out](const std::string& label, const KnownNBucket& b) {
        out += label + "," + std::to_string(b.frames) + "," +
               std::to_string(b.matched) + "," + fixed(b.mae(), 6) + "," +
               fixed(b.acc(), 6) + "\n";
      };
      row("overall", report.overall);
      for (size_t n = 1; n < report.by_n.size(); ++n) {
        if (report.by_n[n].frames == 0) continue;
        row("n=" + std::to_string(n), report.by_n[n]);
      }
      return out;
    }
    case ReportFormat::kTable: {
      std::string out;
      if (!config_echo.empty()) out += "config: " + config_echo + "\n";
      out += "Subset (# frames)      frames    MAE (deg)      ACC\n";
      append_bucket_row(&out, "Overall", report.overall);
      for (size_t n = 1; n < report.by_n.size(); ++n) {
        if (report.by_n[n].frames == 0) continue;
        append_bucket_row(&out, "N = " + std::to_string(n), report.by_n[n]);
      }
      return out;
    }
  }
  throw ContractError("render_known: unreachable format");
}

std::string render_pr(const PrCurve& curve, ReportFormat format,
                      const std::string& config_echo) {
  switch (format) {
    case ReportFormat::kJson: {
      json points = json::array();
      for (const PrPoint& p : curve.points) {
        points.push_back({{"xi", p.xi},
                          {"precision", p.precision},
                          {"recall", p.recall},
                          {"tp", p.tp},
                          {"fp", p.fp},
                          {"fn", p.fn}});
      }
      const json doc{{"schema_version", 1},
                     {"tool_version", kToolVersion},
                     {"config", config_json(config_echo)},
                     {"metric", "pr_curve"},
                     {"points", points}};
      return doc.dump(2) + "\n";
    }
    case ReportFormat::kCsv: {
      std::string out;
      if (!config_echo.empty()) out += "# config " + config_echo + "\n";
      out += "xi,precision,recall,tp,fp,fn\n";
      for (const PrPoint& p : curve.points) {
        out += fixed(p.xi, 3) + "," + fixed(p.precision, 6) + "," +
               fixed(p.recall, 6) + "," + std::to_string(p.tp) + "," +
               std::to_string(p.fp) + "," + std::to_string(p.fn) + "\n";
      }
      return out;
    }
    case ReportFormat::kTable: {
      std::string out;
      if (!config_echo.empty()) out += "config: " + config_echo + "\n";
      out += "    xi  precision     recall         tp       fp       fn\n";
      for (const PrPoint& p : curve.points) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%6s %10s %10s %10ld %8ld %8ld\n",
                      fixed(p.xi, 3).c_str(), fixed(p.precision, 4).c_str(),
                      fixed(p.recall, 4).c_str(), p.tp, p.fp, p.fn);
        out += buf;
      }
      return out;
    }
  }
  throw ContractError("render_pr: unreachable format");
}

}  // namespace sslkit::eval
